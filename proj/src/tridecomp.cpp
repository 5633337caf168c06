#include "fmtk/tridecomp.hpp"

#include "fmtk/counters.hpp"
#include "fmtk/products.hpp"
#include "fmtk/witnesses.hpp"

#include <algorithm>
#include <cmath>

namespace fmtk {

namespace detail {

using Keyed = std::pair<ExtInt, std::size_t>;

// Per anchor k0 and middle node k: the sorted multiset of b[k0,j] - b[k,j]
// tagged with j, and its values of frequency above n3 / r.
struct AnchorTable {
  std::vector<std::vector<Keyed>> L;
  std::vector<std::vector<ExtInt>> F;
};

struct DecompCache {
  Matrix ux, xv;
  std::size_t s = 1, r = 1;
  // per (i, j): sorted (ux(i,k) + xv(k,j), k) over finite pairs
  std::shared_ptr<const Grid<std::vector<Keyed>>> sums;
  std::map<std::size_t, std::shared_ptr<const AnchorTable>> tables;
};

}  // namespace detail

namespace {

using detail::AnchorTable;
using detail::DecompCache;
using detail::Keyed;

std::shared_ptr<const Grid<std::vector<Keyed>>> pair_sums(const Matrix& ux, const Matrix& xv) {
  const std::size_t n1 = ux.rows(), n2 = ux.cols(), n3 = xv.cols();
  auto g = std::make_shared<Grid<std::vector<Keyed>>>(n1, n3);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      auto& v = (*g)(i, j);
      for (std::size_t k = 0; k < n2; ++k)
        if (ux(i, k) != INF && xv(k, j) != INF) v.push_back({add(ux(i, k), xv(k, j)), k});
      std::sort(v.begin(), v.end());
      counters().pair_checks += n2;
    }
  return g;
}

std::shared_ptr<const AnchorTable> anchor_table(const Matrix& xv, std::size_t k0, std::size_t r) {
  const std::size_t n2 = xv.rows(), n3 = xv.cols();
  auto t = std::make_shared<AnchorTable>();
  t->L.resize(n2);
  t->F.resize(n2);
  for (std::size_t k = 0; k < n2; ++k) {
    auto& L = t->L[k];
    for (std::size_t j = 0; j < n3; ++j)
      if (xv(k0, j) != INF && xv(k, j) != INF) L.push_back({sub(xv(k0, j), xv(k, j)), j});
    std::sort(L.begin(), L.end());
    for (std::size_t a = 0; a < L.size();) {
      std::size_t b = a;
      while (b < L.size() && L[b].first == L[a].first) ++b;
      if ((b - a) * r > n3) t->F[k].push_back(L[a].first);
      a = b;
    }
  }
  return t;
}

TriangleDecomposition build(const TripartiteGraph& G, ExtInt target, std::size_t s, const DecompCache* old) {
  const std::size_t n1 = G.n1(), n2 = G.n2(), n3 = G.n3();
  require_shape(G.xv.rows() == static_cast<Eigen::Index>(n2) && G.uv.rows() == static_cast<Eigen::Index>(n1) &&
                    G.uv.cols() == static_cast<Eigen::Index>(n3),
                "triangle_decomposition shapes");
  if (s < 1 || s > n2) throw std::invalid_argument("triangle_decomposition: need 1 <= s <= n2");

  auto cache = std::make_shared<DecompCache>();
  cache->ux = G.ux;
  cache->xv = G.xv;
  cache->s = s;
  cache->r = s * s;
  cache->sums = old ? old->sums : pair_sums(G.ux, G.xv);
  if (old) cache->tables = old->tables;
  const auto& sums = *cache->sums;

  TriangleDecomposition D;
  D.s = s;
  D.r = s * s;
  D.target = target;

  // W_ij = {k : ux(i,k) + xv(k,j) = target - uv(i,j)}
  std::vector<std::vector<std::size_t>> big;
  std::vector<std::pair<std::size_t, std::size_t>> big_ij;
  Grid<std::pair<std::size_t, std::size_t>> wrange(n1, n3, {0, 0});
  const std::size_t keep = n2 / s + 1;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      if (G.uv(i, j) == INF) continue;
      const ExtInt c = sub(target, G.uv(i, j));
      const auto& v = sums(i, j);
      auto lo = std::lower_bound(v.begin(), v.end(), Keyed{c, 0});
      auto hi = std::upper_bound(v.begin(), v.end(), Keyed{c, n2});
      const std::size_t w = hi - lo;
      if (w == 0) continue;
      if (w * s <= n2) {
        for (auto it = lo; it != hi; ++it) D.remainder.push_back({i, it->second, j});
        continue;
      }
      wrange(i, j) = {static_cast<std::size_t>(lo - v.begin()), static_cast<std::size_t>(hi - v.begin())};
      std::vector<std::size_t> ks;
      for (auto it = lo; it != lo + keep; ++it) ks.push_back(it->second);
      big.push_back(std::move(ks));
      big_ij.push_back({i, j});
    }

  if (!big.empty()) D.H = greedy_hitting_set(big);

  // k0[i,j]: smallest element of H in W_ij
  constexpr std::size_t NONE = static_cast<std::size_t>(-1);
  Grid<std::size_t> anchor(n1, n3, NONE);
  for (auto [i, j] : big_ij) {
    const auto& v = sums(i, j);
    auto [a, b] = wrange(i, j);
    for (std::size_t k0 : D.H) {
      bool in = false;
      for (std::size_t t = a; t < b && !in; ++t) in = v[t].second == k0;
      if (in) {
        anchor(i, j) = k0;
        break;
      }
    }
    if (anchor(i, j) == NONE) throw std::logic_error("triangle_decomposition: hitting set misses a witness set");
  }

  for (std::size_t k0 : D.H) {
    TriCategory cat;
    cat.k0 = k0;
    cat.uv = BoolMatrix(n1, n3);
    std::vector<char> row_used(n1, 0);
    bool any = false;
    for (auto [i, j] : big_ij)
      if (anchor(i, j) == k0) cat.uv.set(i, j), row_used[i] = 1, any = true;
    if (!any) continue;

    auto it = cache->tables.find(k0);
    if (it == cache->tables.end()) it = cache->tables.emplace(k0, anchor_table(G.xv, k0, D.r)).first;
    const AnchorTable& T = *it->second;

    std::size_t P = 0;
    for (const auto& f : T.F) P = std::max(P, f.size());
    cat.subgraphs.assign(P, TriSubgraph{BoolMatrix(n1, n2), BoolMatrix(n2, n3)});
    for (std::size_t k = 0; k < n2; ++k) {
      const auto& F = T.F[k];
      for (std::size_t i = 0; i < n1; ++i) {
        if (G.ux(i, k0) == INF || G.ux(i, k) == INF) continue;
        auto f = std::lower_bound(F.begin(), F.end(), sub(G.ux(i, k), G.ux(i, k0)));
        if (f != F.end() && *f == G.ux(i, k) - G.ux(i, k0)) cat.subgraphs[f - F.begin()].ux.set(i, k);
      }
      for (const auto& [d, j] : T.L[k]) {
        auto f = std::lower_bound(F.begin(), F.end(), d);
        if (f != F.end() && *f == d) cat.subgraphs[f - F.begin()].xv.set(k, j);
      }
    }

    // Low-frequency triangles through uv edges anchored here.
    for (std::size_t i = 0; i < n1; ++i) {
      if (!row_used[i] || G.ux(i, k0) == INF) continue;
      for (std::size_t k = 0; k < n2; ++k) {
        if (G.ux(i, k) == INF) continue;
        const ExtInt d = G.ux(i, k) - G.ux(i, k0);
        if (std::binary_search(T.F[k].begin(), T.F[k].end(), d)) continue;
        const auto& L = T.L[k];
        auto lo = std::lower_bound(L.begin(), L.end(), Keyed{d, 0});
        for (; lo != L.end() && lo->first == d; ++lo) {
          ++counters().pair_checks;
          if (anchor(i, lo->second) == k0) D.remainder.push_back({i, k, lo->second});
        }
      }
    }
    D.categories.push_back(std::move(cat));
  }

  std::sort(D.remainder.begin(), D.remainder.end());
  D.cache = std::move(cache);
  return D;
}

void check_mask(const TriMask& m, const TripartiteGraph& G) {
  require_shape(m.ux.rows() == G.n1() && m.ux.cols() == G.n2() && m.xv.rows() == G.n2() && m.xv.cols() == G.n3() &&
                    m.uv.rows() == G.n1() && m.uv.cols() == G.n3(),
                "preprocessed_exact_tri_query mask shape");
}

}  // namespace

std::size_t TriangleDecomposition::subgraph_count() const {
  std::size_t c = 0;
  for (const auto& cat : categories) c += cat.subgraphs.size();
  return c;
}

TriangleDecomposition triangle_decomposition(const TripartiteGraph& G, ExtInt target, std::size_t s) {
  return build(G, target, s, nullptr);
}

TriangleDecomposition decomposition_update_uv(const TriangleDecomposition& D, const TripartiteGraph& G) {
  return decomposition_update_uv(D, G, D.target);
}

TriangleDecomposition decomposition_update_uv(const TriangleDecomposition& D, const TripartiteGraph& G,
                                              ExtInt target) {
  if (!D.cache) throw std::invalid_argument("decomposition_update_uv: decomposition has no build data");
  const DecompCache& c = *D.cache;
  if (G.ux.rows() != c.ux.rows() || G.ux.cols() != c.ux.cols() || G.ux != c.ux)
    throw std::invalid_argument("decomposition_update_uv: ux weights changed");
  if (G.xv.rows() != c.xv.rows() || G.xv.cols() != c.xv.cols() || G.xv != c.xv)
    throw std::invalid_argument("decomposition_update_uv: xv weights changed");
  return build(G, target, D.s, &c);
}

std::vector<Triangle> subgraph_triangles(const TriCategory& c, std::size_t p) {
  const auto& g = c.subgraphs.at(p);
  std::vector<Triangle> out;
  for (std::size_t i = 0; i < g.ux.rows(); ++i)
    for (std::size_t k = 0; k < g.ux.cols(); ++k) {
      if (!g.ux.get(i, k)) continue;
      for (std::size_t j = 0; j < g.xv.cols(); ++j)
        if (g.xv.get(k, j) && c.uv.get(i, j)) out.push_back({i, k, j});
    }
  return out;
}

TriMask full_mask(const TripartiteGraph& G) {
  TriMask m{BoolMatrix(G.n1(), G.n2()), BoolMatrix(G.n2(), G.n3()), BoolMatrix(G.n1(), G.n3())};
  for (std::size_t i = 0; i < G.n1(); ++i)
    for (std::size_t k = 0; k < G.n2(); ++k)
      if (G.ux(i, k) != INF) m.ux.set(i, k);
  for (std::size_t k = 0; k < G.n2(); ++k)
    for (std::size_t j = 0; j < G.n3(); ++j)
      if (G.xv(k, j) != INF) m.xv.set(k, j);
  for (std::size_t i = 0; i < G.n1(); ++i)
    for (std::size_t j = 0; j < G.n3(); ++j)
      if (G.uv(i, j) != INF) m.uv.set(i, j);
  return m;
}

PreprocessedExactTri preprocessed_exact_tri_build(const TripartiteGraph& G, std::size_t s) {
  return {G, triangle_decomposition(G, 0, s)};
}

CountMatrix preprocessed_exact_tri_count(PreprocessedExactTri& h, const TriMask& mask, ExtInt target) {
  check_mask(mask, h.G);
  if (target != h.D.target) h.D = decomposition_update_uv(h.D, h.G, target);
  const std::size_t n1 = h.G.n1(), n2 = h.G.n2(), n3 = h.G.n3();
  CountMatrix out = CountMatrix::Zero(n1, n3);
  for (const auto& cat : h.D.categories) {
    const std::size_t P = cat.subgraphs.size();
    if (P == 0) continue;
    // middle layer X x Lambda
    BoolMatrix L(n1, n2 * P), Rm(n2 * P, n3);
    for (std::size_t p = 0; p < P; ++p) {
      const auto& g = cat.subgraphs[p];
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n2; ++k)
          if (g.ux.get(i, k) && mask.ux.get(i, k)) L.set(i, p * n2 + k);
      for (std::size_t k = 0; k < n2; ++k)
        for (std::size_t j = 0; j < n3; ++j)
          if (g.xv.get(k, j) && mask.xv.get(k, j)) Rm.set(p * n2 + k, j);
    }
    CountMatrix Cn = bool_count_product(L, Rm);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j)
        if (cat.uv.get(i, j) && mask.uv.get(i, j)) out(i, j) += Cn(i, j);
  }
  for (const auto& [i, k, j] : h.D.remainder)
    if (mask.ux.get(i, k) && mask.xv.get(k, j) && mask.uv.get(i, j)) ++out(i, j);
  return out;
}

BoolMatrix preprocessed_exact_tri_query(PreprocessedExactTri& h, const TriMask& mask, ExtInt target) {
  CountMatrix c = preprocessed_exact_tri_count(h, mask, target);
  BoolMatrix out(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if (c(i, j)) out.set(i, j);
  return out;
}

namespace {

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Buckets of X under x mod R: layer[t] is the t-th element (by value) of each bucket.
std::vector<std::vector<std::int64_t>> layers(const std::vector<std::int64_t>& X, std::int64_t R) {
  std::vector<std::vector<std::int64_t>> bucket(R);
  for (std::size_t idx = 0; idx < X.size(); ++idx) bucket[mod_pos(X[idx], R)].push_back(idx);
  std::size_t depth = 0;
  for (const auto& b : bucket) depth = std::max(depth, b.size());
  std::vector<std::vector<std::int64_t>> out(depth, std::vector<std::int64_t>(R, -1));
  for (std::int64_t h = 0; h < R; ++h)
    for (std::size_t t = 0; t < bucket[h].size(); ++t) out[t][h] = bucket[h][t];
  return out;
}

std::size_t max_load(const std::vector<std::int64_t>& X, std::int64_t R) {
  std::vector<std::size_t> cnt(R, 0);
  std::size_t m = 0;
  for (auto x : X) m = std::max(m, ++cnt[mod_pos(x, R)]);
  return std::max<std::size_t>(m, 1);
}

std::vector<char> membership(const std::vector<std::int64_t>& U, const std::vector<std::int64_t>& sub, const char* name) {
  std::vector<char> in(U.size(), 0);
  for (auto x : sub) {
    auto it = std::lower_bound(U.begin(), U.end(), x);
    if (it == U.end() || *it != x)
      throw std::invalid_argument(std::string("preprocessed_3sum_query: ") + name + " element " + std::to_string(x) +
                                  " outside the universe");
    in[it - U.begin()] = 1;
  }
  return in;
}

}  // namespace

Preprocessed3Sum preprocessed_3sum_build(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B,
                                         const std::vector<std::int64_t>& C, std::size_t s, std::size_t q) {
  Preprocessed3Sum h;
  h.A = sorted_unique(A);
  h.B = sorted_unique(B);
  h.C = sorted_unique(C);
  if (h.A.empty() || h.B.empty() || h.C.empty()) return h;

  // Deterministic modulus: the prime in [n, 2n] with the fewest layer combinations.
  const std::int64_t n = std::max<std::int64_t>({2, static_cast<std::int64_t>(h.A.size()),
                                                 static_cast<std::int64_t>(h.B.size()),
                                                 static_cast<std::int64_t>(h.C.size())});
  std::size_t best = SIZE_MAX;
  for (std::int64_t R = n; R <= 2 * n; ++R) {
    if (!is_prime(R)) continue;
    std::size_t cost = max_load(h.A, R) * max_load(h.B, R) * max_load(h.C, R);
    if (cost < best) best = cost, h.modulus = R;
  }
  const std::int64_t R = h.modulus;
  h.N = 2 * R;
  h.q = q ? q : isqrt_ceil(R);
  h.q = std::clamp<std::size_t>(h.q, 1, R);
  const std::size_t Q = h.q, n1 = ceil_div(R, Q), n3 = R + Q - 1;

  auto LA = layers(h.A, R), LB = layers(h.B, R), LC = layers(h.C, R);
  for (std::size_t rho = 0; rho < LA.size(); ++rho)
    for (std::size_t sig = 0; sig < LB.size(); ++sig)
      for (std::size_t tau = 0; tau < LC.size(); ++tau) {
        // a at u = x1*Q + x2, b at v = x3 - x2, c at w = x1*Q + x3 with w in {t, t + R}
        Preprocessed3Sum::Instance in;
        in.layer = {rho, sig, tau};
        Matrix ux = filled(n1, Q, INF), xv = filled(Q, n3, INF), uv = filled(n1, n3, INF);
        in.ux_elem.assign(n1 * Q, -1);
        in.xv_elem.assign(Q * n3, -1);
        in.uv_elem.assign(n1 * n3, -1);
        for (std::size_t x1 = 0; x1 < n1; ++x1)
          for (std::size_t x2 = 0; x2 < Q; ++x2) {
            std::size_t u = x1 * Q + x2;
            if (u >= static_cast<std::size_t>(R) || LA[rho][u] < 0) continue;
            ux(x1, x2) = h.A[LA[rho][u]];
            in.ux_elem[x1 * Q + x2] = LA[rho][u];
          }
        for (std::size_t x2 = 0; x2 < Q; ++x2)
          for (std::size_t x3 = x2; x3 < n3 && x3 - x2 < static_cast<std::size_t>(R); ++x3) {
            auto e = LB[sig][x3 - x2];
            if (e < 0) continue;
            xv(x2, x3) = h.B[e];
            in.xv_elem[x2 * n3 + x3] = e;
          }
        for (std::size_t x1 = 0; x1 < n1; ++x1)
          for (std::size_t x3 = 0; x3 < n3; ++x3) {
            std::size_t w = x1 * Q + x3;
            if (w >= static_cast<std::size_t>(2 * R)) continue;
            auto e = LC[tau][w % R];
            if (e < 0) continue;
            uv(x1, x3) = neg(h.C[e]);
            in.uv_elem[x1 * n3 + x3] = e;
          }
        in.G = TripartiteGraph(ux, xv, uv);
        in.tri = preprocessed_exact_tri_build(in.G, std::min(s, Q));
        h.instances.push_back(std::move(in));
      }
  return h;
}

std::vector<std::uint64_t> preprocessed_3sum_query(Preprocessed3Sum& h, const std::vector<std::int64_t>& Ap,
                                                   const std::vector<std::int64_t>& Bp,
                                                   const std::vector<std::int64_t>& Cq) {
  auto inA = membership(h.A, Ap, "A'");
  auto inB = membership(h.B, Bp, "B'");
  auto inC = membership(h.C, Cq, "C'");
  std::vector<std::uint64_t> perC(h.C.size(), 0);
  for (auto& in : h.instances) {
    const TripartiteGraph& G = in.G;
    TriMask m{BoolMatrix(G.n1(), G.n2()), BoolMatrix(G.n2(), G.n3()), BoolMatrix(G.n1(), G.n3())};
    bool anyA = false, anyB = false;
    for (std::size_t i = 0; i < G.n1(); ++i)
      for (std::size_t k = 0; k < G.n2(); ++k) {
        auto e = in.ux_elem[i * G.n2() + k];
        if (e >= 0 && inA[e]) m.ux.set(i, k), anyA = true;
      }
    for (std::size_t k = 0; k < G.n2(); ++k)
      for (std::size_t j = 0; j < G.n3(); ++j) {
        auto e = in.xv_elem[k * G.n3() + j];
        if (e >= 0 && inB[e]) m.xv.set(k, j), anyB = true;
      }
    if (!anyA || !anyB) continue;
    for (std::size_t i = 0; i < G.n1(); ++i)
      for (std::size_t j = 0; j < G.n3(); ++j)
        if (in.uv_elem[i * G.n3() + j] >= 0 && inC[in.uv_elem[i * G.n3() + j]]) m.uv.set(i, j);
    CountMatrix cnt = preprocessed_exact_tri_count(in.tri, m, 0);
    for (std::size_t i = 0; i < G.n1(); ++i)
      for (std::size_t j = 0; j < G.n3(); ++j)
        if (cnt(i, j)) perC[in.uv_elem[i * G.n3() + j]] += cnt(i, j);
  }
  std::vector<std::uint64_t> out;
  for (auto c : Cq) out.push_back(perC[std::lower_bound(h.C.begin(), h.C.end(), c) - h.C.begin()]);
  return out;
}

FunnyResult funny_product(const Matrix& A, const BigMatrix& Ap, const Matrix& B, const BigMatrix& Bp, std::size_t s) {
  require_shape(A.cols() == B.rows(), "funny_product inner dims");
  require_shape(Ap.rows == static_cast<std::size_t>(A.rows()) && Ap.cols == static_cast<std::size_t>(A.cols()) &&
                    Bp.rows == static_cast<std::size_t>(B.rows()) && Bp.cols == static_cast<std::size_t>(B.cols()),
                "funny_product weight shapes");
  for (const BigMatrix* X : {&Ap, &Bp})
    for (const auto& v : X->data)
      if (v < 0) throw std::invalid_argument("funny_product: negative weight");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  FunnyResult res{minplus_naive(A, B), BigMatrix(n1, n3, BigNat(0))};
  if (n1 == 0 || n2 == 0 || n3 == 0) return res;
  if (s == 0) s = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(std::max({n1, n2, n3})), 0.25)));
  s = std::clamp<std::size_t>(s, 1, n2);

  Matrix uv = filled(n1, n3, INF);
  for (Eigen::Index e = 0; e < uv.size(); ++e)
    if (res.C.data()[e] != INF) uv.data()[e] = neg(res.C.data()[e]);
  TriangleDecomposition D = triangle_decomposition(TripartiteGraph(A, B, uv), 0, s);

  for (const auto& [i, k, j] : D.remainder) res.Cp(i, j) += Ap(i, k) * Bp(k, j);
  for (const auto& cat : D.categories)
    for (const auto& g : cat.subgraphs)
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n2; ++k) {
          if (!g.ux.get(i, k) || Ap(i, k) == 0) continue;
          for (std::size_t j = 0; j < n3; ++j)
            if (g.xv.get(k, j) && cat.uv.get(i, j)) {
              res.Cp(i, j) += Ap(i, k) * Bp(k, j);
              ++counters().big_digit_ops;
            }
        }
  return res;
}

ApspCount apsp_count(const Matrix& W, std::size_t s) {
  require_shape(W.rows() == W.cols(), "apsp_count square");
  const std::size_t n = W.rows();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && W(u, v) != INF && W(u, v) <= 0)
        throw std::invalid_argument("apsp_count: nonpositive weight on arc " + std::to_string(u) + "->" +
                                    std::to_string(v));

  auto oplus = [n](const ApspCount& X, const ApspCount& Y) {
    ApspCount Z{Matrix(n, n), BigMatrix(n, n, BigNat(0))};
    for (Eigen::Index e = 0; e < Z.dist.size(); ++e) {
      ExtInt a = X.dist.data()[e], b = Y.dist.data()[e], c = std::min(a, b);
      Z.dist.data()[e] = c;
      if (c == INF) continue;
      if (a == c) Z.count.data[e] += X.count.data[e];
      if (b == c) Z.count.data[e] += Y.count.data[e];
    }
    return Z;
  };
  auto otimes = [s](const ApspCount& X, const ApspCount& Y) {
    FunnyResult f = funny_product(X.dist, X.count, Y.dist, Y.count, s);
    return ApspCount{std::move(f.C), std::move(f.Cp)};
  };

  ApspCount eq{filled(n, n, INF), BigMatrix(n, n, BigNat(0))};
  ApspCount lt{filled(n, n, INF), BigMatrix(n, n, BigNat(0))};
  for (std::size_t u = 0; u < n; ++u) {
    lt.dist(u, u) = 0;
    lt.count(u, u) = 1;
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && W(u, v) != INF) {
        eq.dist(u, v) = W(u, v);
        eq.count(u, v) = 1;
      }
  }
  // lt covers hop counts below len, eq exactly len
  for (std::size_t len = 1; len <= n; len *= 2) {
    lt = oplus(lt, otimes(lt, eq));
    if (2 * len <= n) eq = otimes(eq, eq);
  }
  return lt;
}

Matrix minplus_bounded_difference(const Matrix& A, const Matrix& B, ExtInt c0, std::size_t ell, std::size_t s) {
  require_shape(A.cols() == B.rows(), "minplus_bounded_difference inner dims");
  if (c0 < 0) throw std::invalid_argument("minplus_bounded_difference: c0 < 0");
  if (ell < 1) throw std::invalid_argument("minplus_bounded_difference: ell < 1");
  if (s < 1) throw std::invalid_argument("minplus_bounded_difference: s < 1");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  auto fail = [](const char* m, std::size_t a, std::size_t b) {
    throw std::invalid_argument(std::string("minplus_bounded_difference: ") + m + "[" + std::to_string(a) + "," +
                                std::to_string(b) + "]");
  };
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) {
      if (A(i, k) == INF) fail("infinite entry A", i, k);
      if (k + 1 < n2 && (A(i, k + 1) == INF || std::abs(sub(A(i, k + 1), A(i, k))) > c0))
        fail("bounded difference violated at A", i, k + 1);
    }
  for (std::size_t k = 0; k < n2; ++k)
    for (std::size_t j = 0; j < n3; ++j) {
      if (B(k, j) == INF) fail("infinite entry B", k, j);
      if (k + 1 < n2 && (B(k + 1, j) == INF || std::abs(sub(B(k + 1, j), B(k, j))) > c0))
        fail("bounded difference violated at B", k + 1, j);
    }
  if (n1 == 0 || n3 == 0) return Matrix(n1, n3);
  if (n2 == 0) return filled(n1, n3, INF);

  const ExtInt lp = 2 * c0 * static_cast<ExtInt>(ell) + 1;
  std::vector<std::size_t> Dk;
  for (std::size_t k = 0; k < n2; k += ell) Dk.push_back(k);
  const std::size_t m = Dk.size();
  Matrix Ar(n1, m), Br(m, n3);  // ceil(x / l')
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t d = 0; d < m; ++d) Ar(i, d) = ceil_div_signed(A(i, Dk[d]), lp);
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t j = 0; j < n3; ++j) Br(d, j) = ceil_div_signed(B(Dk[d], j), lp);
  Matrix Ct = minplus_naive(Ar, Br);

  // A^(r)[i,d] = A[i, k_d + r] - Ar[i,d] l', shifted by off into [0, M]
  const ExtInt off = lp + c0 * static_cast<ExtInt>(ell);
  const ExtInt M = 2 * off;
  std::vector<Matrix> Asub(ell, filled(n1, m, INF)), Bsub(ell, filled(m, n3, INF));
  for (std::size_t r = 0; r < ell; ++r)
    for (std::size_t d = 0; d < m; ++d) {
      if (Dk[d] + r >= n2) continue;
      for (std::size_t i = 0; i < n1; ++i) Asub[r](i, d) = A(i, Dk[d] + r) - Ar(i, d) * lp + off;
      for (std::size_t j = 0; j < n3; ++j) Bsub[r](d, j) = B(Dk[d] + r, j) - Br(d, j) * lp + off;
    }

  Matrix C = filled(n1, n3, INF);
  s = std::min(s, m);
  TriangleDecomposition D;
  for (ExtInt delta = 0; delta <= 2; ++delta) {
    Matrix uv(n1, n3);
    for (Eigen::Index e = 0; e < uv.size(); ++e) uv.data()[e] = -Ct.data()[e] - delta;
    TripartiteGraph G(Ar, Br, uv);
    D = delta == 0 ? triangle_decomposition(G, 0, s) : decomposition_update_uv(D, G);

    Matrix Cp = filled(n1, n3, INF);  // shifted by 2 off
    for (const auto& [i, d, j] : D.remainder)
      for (std::size_t r = 0; r < ell; ++r)
        if (Asub[r](i, d) != INF) Cp(i, j) = std::min(Cp(i, j), Asub[r](i, d) + Bsub[r](d, j));
    for (const auto& cat : D.categories)
      for (const auto& g : cat.subgraphs)
        for (std::size_t r = 0; r < ell; ++r) {
          Matrix X = filled(n1, m, INF), Y = filled(m, n3, INF);
          bool anyx = false, anyy = false;
          for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t d = 0; d < m; ++d)
              if (g.ux.get(i, d) && Asub[r](i, d) != INF) X(i, d) = Asub[r](i, d), anyx = true;
          for (std::size_t d = 0; d < m; ++d)
            for (std::size_t j = 0; j < n3; ++j)
              if (g.xv.get(d, j) && Bsub[r](d, j) != INF) Y(d, j) = Bsub[r](d, j), anyy = true;
          if (!anyx || !anyy) continue;
          Matrix Z = minplus_bounded(X, Y, M);
          for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n3; ++j)
              if (cat.uv.get(i, j)) Cp(i, j) = std::min(Cp(i, j), Z(i, j));
        }
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j)
        if (Cp(i, j) != INF) C(i, j) = std::min(C(i, j), (Ct(i, j) + delta) * lp + Cp(i, j) - 2 * off);
  }
  return C;
}

}  // namespace fmtk
