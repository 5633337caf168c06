#include "fmtk/counting.hpp"

#include "fmtk/counters.hpp"
#include "fmtk/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace fmtk {

namespace {

ExtInt diff_or_inf(ExtInt a, ExtInt b) { return a == INF || b == INF ? INF : sub(a, b); }

std::size_t default_cap(std::size_t n, std::size_t cap) { return cap ? cap : std::max<std::size_t>(1, ceil_div(n, 2)); }

}  // namespace

Grid<std::vector<std::size_t>> list_exact_tri_brute(const TripartiteGraph& G, ExtInt t, std::size_t cap) {
  Grid<std::vector<std::size_t>> L(G.n1(), G.n3());
  for (std::size_t i = 0; i < G.n1(); ++i)
    for (std::size_t j = 0; j < G.n3(); ++j) {
      if (G.uv(i, j) == INF) continue;
      for (std::size_t k = 0; k < G.n2() && L(i, j).size() < cap; ++k)
        if (G.has(i, k, j) && G.weight(i, k, j) == t) L(i, j).push_back(k);
    }
  return L;
}

std::vector<std::vector<std::size_t>> list_3sum_conv_brute(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                           const std::vector<ExtInt>& c, std::size_t cap) {
  std::size_t n = a.size();
  std::vector<std::vector<std::size_t>> L(n);
  for (std::size_t m = 1; m < n; ++m) {
    if (c[m] == INF) continue;
    for (std::size_t u = 0; u < m && L[m].size() < cap; ++u) {
      std::size_t v = m - 1 - u;
      if (a[u] != INF && b[v] != INF && add(a[u], b[v]) == c[m]) L[m].push_back(u);
    }
  }
  return L;
}

MaskedCounts count_exact_tri_via_anchor(const TripartiteGraph& G, ExtInt t, const std::vector<std::size_t>& S,
                                        FreqSplitParams p) {
  const std::size_t n1 = G.n1(), n2 = G.n2(), n3 = G.n3();
  for (auto s : S)
    if (s >= n2) throw std::invalid_argument("count_exact_tri_via_anchor: anchor outside X");
  MaskedCounts out{CountMatrix::Zero(n1, n3), Grid<char>(n1, n3, 0)};
  std::vector<std::ptrdiff_t> anchor(n1 * n3, -1);
  std::vector<char> used(S.size(), 0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j)
      for (std::size_t q = 0; q < S.size(); ++q)
        if (G.has(i, S[q], j) && G.weight(i, S[q], j) == t) {
          anchor[i * n3 + j] = q;
          used[q] = 1;
          break;
        }
  for (std::size_t q = 0; q < S.size(); ++q) {
    if (!used[q]) continue;
    const std::size_t s = S[q];
    Matrix As(n1, n2), Bs(n2, n3);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t k = 0; k < n2; ++k) As(i, k) = diff_or_inf(G.ux(i, k), G.ux(i, s));
    for (std::size_t k = 0; k < n2; ++k)
      for (std::size_t j = 0; j < n3; ++j) {
        ExtInt b = G.xv(k, j), b0 = G.xv(s, j);
        Bs(k, j) = b == INF || b0 == INF ? INF : sub(b0, b);
      }
    CountMatrix E = equality_product(As, Bs, p);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j)
        if (anchor[i * n3 + j] == static_cast<std::ptrdiff_t>(q)) {
          out.D(i, j) = E(i, j);
          out.valid(i, j) = 1;
        }
  }
  return out;
}

CountMatrix count_ae_exact_tri(const TripartiteGraph& G, ExtInt t, const ExactTriLister& lister, std::size_t cap) {
  const std::size_t n1 = G.n1(), n2 = G.n2(), n3 = G.n3();
  cap = default_cap(n2, cap);
  auto lists = lister(G, t, cap);
  if (lists.rows != n1 || lists.cols != n3) throw std::runtime_error("count_ae_exact_tri: lister returned wrong shape");
  CountMatrix D = CountMatrix::Zero(n1, n3);
  std::vector<std::vector<std::size_t>> big;
  std::vector<std::pair<std::size_t, std::size_t>> where;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      auto l = lists(i, j);
      std::sort(l.begin(), l.end());
      if (l.size() > cap || std::adjacent_find(l.begin(), l.end()) != l.end())
        throw std::runtime_error("count_ae_exact_tri: lister exceeded cap or repeated a witness");
      for (auto k : l)
        if (k >= n2 || !G.has(i, k, j) || G.weight(i, k, j) != t)
          throw std::runtime_error("count_ae_exact_tri: lister returned an invalid witness");
      if (l.size() < cap) {
        D(i, j) = l.size();
      } else {
        big.push_back(std::move(l));
        where.push_back({i, j});
      }
    }
  if (!big.empty()) {
    auto S = greedy_hitting_set(big);
    MaskedCounts mc = count_exact_tri_via_anchor(G, t, S);
    for (auto [i, j] : where) {
      if (!mc.valid(i, j)) throw std::logic_error("count_ae_exact_tri: hitting set missed a witness set");
      D(i, j) = mc.D(i, j);
    }
  }
  return D;
}

MaskedCounts count_minplus_witnesses_via_hitting(const Matrix& A, const Matrix& B, const std::vector<std::size_t>& S,
                                                 const Matrix& C, FreqSplitParams p) {
  require_shape(A.cols() == B.rows(), "count_minplus_witnesses_via_hitting inner dims");
  require_shape(C.rows() == A.rows() && C.cols() == B.cols(), "count_minplus_witnesses_via_hitting C shape");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  for (auto s : S)
    if (s >= n2) throw std::invalid_argument("count_minplus_witnesses_via_hitting: anchor outside inner range");
  MaskedCounts out{CountMatrix::Zero(n1, n3), Grid<char>(n1, n3, 0)};
  std::vector<std::ptrdiff_t> anchor(n1 * n3, -1);
  std::vector<char> used(S.size(), 0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      ExtInt best = INF;
      std::ptrdiff_t arg = -1;
      for (std::size_t q = 0; q < S.size(); ++q) {
        ExtInt v = add(A(i, S[q]), B(S[q], j));
        if (v < best) best = v, arg = q;
      }
      if (arg >= 0 && best == C(i, j)) {
        anchor[i * n3 + j] = arg;
        used[arg] = 1;
      }
    }
  for (std::size_t q = 0; q < S.size(); ++q) {
    if (!used[q]) continue;
    const std::size_t s = S[q];
    Matrix As(n1, n2), Bs(n2, n3);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t k = 0; k < n2; ++k) As(i, k) = diff_or_inf(A(i, k), A(i, s));
    for (std::size_t k = 0; k < n2; ++k)
      for (std::size_t j = 0; j < n3; ++j) Bs(k, j) = B(k, j) == INF || B(s, j) == INF ? INF : sub(B(s, j), B(k, j));
    CountMatrix E = equality_product(As, Bs, p);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j)
        if (anchor[i * n3 + j] == static_cast<std::ptrdiff_t>(q)) {
          out.D(i, j) = E(i, j);
          out.valid(i, j) = 1;
        }
  }
  return out;
}

CountMatrix count_minplus(const Matrix& A, const Matrix& B, Rng& rng, std::size_t cap) {
  require_shape(A.cols() == B.rows(), "count_minplus inner dims");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  cap = default_cap(n2, cap);
  WitnessReport rep = list_witnesses_capped(A, B, cap, rng);
  CountMatrix D = CountMatrix::Zero(n1, n3);
  std::vector<std::vector<std::size_t>> big;
  std::vector<std::pair<std::size_t, std::size_t>> where;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      if (rep.C(i, j) == INF) continue;
      if (rep.truncated(i, j)) {
        big.push_back(rep.lists(i, j));
        where.push_back({i, j});
      } else {
        D(i, j) = rep.lists(i, j).size();
      }
    }
  if (!big.empty()) {
    auto S = greedy_hitting_set(big);
    MaskedCounts mc = count_minplus_witnesses_via_hitting(A, B, S, rep.C);
    for (auto [i, j] : where) {
      if (!mc.valid(i, j)) throw std::logic_error("count_minplus: hitting set missed a witness set");
      D(i, j) = mc.D(i, j);
    }
  }
  return D;
}

Matrix minplus_from_counting(const Matrix& A, const Matrix& B, const MinPlusCounter& counter) {
  require_shape(A.cols() == B.rows(), "minplus_from_counting inner dims");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  const ExtInt M = static_cast<ExtInt>(n2) + 1;
  Matrix Ap(n1, n2), Bp(n2, n3);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) Ap(i, k) = A(i, k) == INF ? INF : add(mul(A(i, k), M), k + 1);
  for (Eigen::Index e = 0; e < B.size(); ++e) Bp.data()[e] = mul(B.data()[e], M);

  CountMatrix base = counter(Ap, Bp);
  for (Eigen::Index e = 0; e < base.size(); ++e)
    if (base.data()[e] > 1) throw std::runtime_error("minplus_from_counting: counter reported several witnesses after uniquifying");

  IndexMatrix K = IndexMatrix::Zero(n1, n3);
  for (std::uint64_t bit = 0; bit < ceil_log2(n2); ++bit) {
    std::vector<Eigen::Index> cols;
    for (std::size_t k = 0; k < n2; ++k)
      if ((k >> bit) & 1) cols.push_back(k);
    Matrix A2(n1, n2 + cols.size()), B2(n2 + cols.size(), n3);
    A2.leftCols(n2) = Ap;
    A2.rightCols(cols.size()) = Ap(Eigen::all, cols);
    B2.topRows(n2) = Bp;
    B2.bottomRows(cols.size()) = Bp(cols, Eigen::all);
    CountMatrix cnt = counter(A2, B2);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j) {
        std::uint64_t c = cnt(i, j);
        if (base(i, j) == 0 ? c != 0 : (c != 1 && c != 2))
          throw std::runtime_error("minplus_from_counting: count " + std::to_string(c) + " outside {1, 2} in bit round " +
                                   std::to_string(bit));
        if (c == 2) K(i, j) |= std::int64_t{1} << bit;
      }
  }
  Matrix C = filled(n1, n3, INF);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      if (!base(i, j)) continue;
      std::int64_t k = K(i, j);
      if (k >= static_cast<std::int64_t>(n2)) throw std::runtime_error("minplus_from_counting: decoded index out of range");
      C(i, j) = add(A(i, k), B(k, j));
    }
  return C;
}

HeavyCounts count_3sum_conv_heavy(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                  const std::vector<ExtInt>& c, std::size_t L, Rng& rng,
                                  const std::vector<std::size_t>& wanted) {
  const std::size_t n = a.size();
  if (b.size() != n || c.size() != n) throw std::invalid_argument("count_3sum_conv_heavy: length mismatch");
  if (L < 1) throw std::invalid_argument("count_3sum_conv_heavy: L < 1");
  HeavyCounts out;
  out.count.assign(n, 0);
  out.known.assign(n, 1);
  if (n < 2) return out;

  std::vector<char> want(n, wanted.empty());
  for (auto m : wanted)
    if (m < n) want[m] = 1;

  ExtInt maxabs = 0;
  for (const auto* v : {&a, &b, &c})
    for (ExtInt x : *v)
      if (x != INF) maxabs = std::max(maxabs, x < 0 ? neg(x) : x);
  const ExtInt pad = add(mul(maxabs, 10), 1), pad3 = mul(pad, 3);

  const std::uint64_t p = random_prime_in(2 * n, 4 * n, rng);
  const std::uint64_t x = 1 + rng.below(p - 1), y = rng.below(p);
  out.prime = p;
  std::vector<ExtInt> Ap(p, pad), Bp(p, pad), Cp(p, pad3);
  for (std::size_t u = 0; u < n; ++u) {
    if (a[u] != INF) Ap[(x * u + y) % p] = a[u];
    if (b[u] != INF) Bp[(x * u + p - y) % p] = b[u];
  }
  for (std::size_t m = 1; m < n; ++m)
    if (c[m] != INF) Cp[x * (m - 1) % p] = c[m];

  const std::size_t ell = isqrt_ceil(n);
  const std::size_t nT = 2 * ell - 1, nJ = ceil_div(p, ell);
  out.intervals = ceil_div(p, ell);
  const double lnn = std::log(static_cast<double>(n) + 1.0);
  for (std::size_t q = 0; q < out.intervals; ++q) {
    const std::size_t beta = q * ell, len = std::min<std::size_t>(ell, p - beta);
    // I x T carries A' over the interval, T x J carries B', I x J carries -C'
    // at position j*ell + i; zero triangles on (i, j) are the witnesses in the interval.
    Matrix ux = filled(ell, nT, INF), xv(nT, nJ), uv = filled(ell, nJ, INF);
    for (std::size_t i = 0; i < ell; ++i)
      for (std::size_t t = 0; t < nT; ++t) {
        std::int64_t r = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(t) + static_cast<std::int64_t>(ell) - 1;
        if (r >= 0 && r < static_cast<std::int64_t>(len)) ux(i, t) = Ap[beta + r];
      }
    for (std::size_t t = 0; t < nT; ++t)
      for (std::size_t j = 0; j < nJ; ++j) {
        std::int64_t idx = static_cast<std::int64_t>(j * ell + t + 1) - static_cast<std::int64_t>(ell + beta);
        xv(t, j) = Bp[mod_pos(idx, p)];
      }
    for (std::size_t i = 0; i < ell; ++i)
      for (std::size_t j = 0; j < nJ; ++j)
        if (j * ell + i < p) uv(i, j) = neg(Cp[j * ell + i]);
    TripartiteGraph G(ux, xv, uv);

    const double Lp = std::max(1.0, static_cast<double>(L) * len / (2.0 * p));
    const std::size_t ssize = std::min<std::size_t>(nT, static_cast<std::size_t>(std::ceil(4.0 * ell * lnn / Lp)));
    MaskedCounts mc = count_exact_tri_via_anchor(G, 0, rng.sample(nT, ssize));

    for (std::size_t m = 1; m < n; ++m) {
      const std::size_t k = x * (m - 1) % p, i = k % ell, j = k / ell;
      if (mc.valid(i, j)) {
        out.count[m] += mc.D(i, j);
        continue;
      }
      ++out.unknown_cells;
      if (!want[m]) {
        out.known[m] = 0;
        continue;
      }
      for (std::size_t r = 0; r < len; ++r) {
        std::size_t ia = beta + r, ib = (k + p - ia) % p;
        out.count[m] += add(Ap[ia], Bp[ib]) == Cp[k];
      }
      counters().pair_checks += len;
    }
  }
  for (std::size_t m = 1; m < n; ++m)
    if (!out.known[m]) out.count[m] = 0;
  return out;
}

std::vector<std::uint64_t> count_all_nums_3sum_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                    const std::vector<ExtInt>& c, const ConvLister& lister, Rng& rng,
                                                    std::size_t cap) {
  const std::size_t n = a.size();
  if (b.size() != n || c.size() != n) throw std::invalid_argument("count_all_nums_3sum_conv: length mismatch");
  cap = default_cap(n, cap);
  auto lists = lister(a, b, c, cap);
  if (lists.size() != n) throw std::runtime_error("count_all_nums_3sum_conv: lister returned wrong length");
  std::vector<std::uint64_t> out(n, 0);
  std::vector<std::size_t> heavy;
  for (std::size_t m = 0; m < n; ++m) {
    auto l = lists[m];
    std::sort(l.begin(), l.end());
    if (l.size() > cap || std::adjacent_find(l.begin(), l.end()) != l.end())
      throw std::runtime_error("count_all_nums_3sum_conv: lister exceeded cap or repeated a witness");
    for (auto u : l)
      if (m == 0 || u >= m || a[u] == INF || b[m - 1 - u] == INF || c[m] == INF || add(a[u], b[m - 1 - u]) != c[m])
        throw std::runtime_error("count_all_nums_3sum_conv: lister returned an invalid witness");
    if (l.size() < cap)
      out[m] = l.size();
    else
      heavy.push_back(m);
  }
  if (!heavy.empty()) {
    HeavyCounts h = count_3sum_conv_heavy(a, b, c, cap, rng, heavy);
    for (auto m : heavy) out[m] = h.count[m];
  }
  return out;
}

std::vector<std::uint64_t> count_minplus_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                              const ConvLister& lister, Rng& rng, std::size_t cap) {
  return count_all_nums_3sum_conv(a, b, minplus_convolution_naive(a, b), lister, rng, cap);
}

std::vector<ExtInt> minplus_conv_from_counting(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                               const ConvCounter& counter) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("minplus_conv_from_counting: length mismatch");
  const ExtInt M = static_cast<ExtInt>(n) + 1;
  std::vector<ExtInt> ap(n), bp(n);
  for (std::size_t u = 0; u < n; ++u) {
    ap[u] = a[u] == INF ? INF : add(mul(a[u], M), u);
    bp[u] = mul(b[u], M);
  }
  auto base = counter(ap, bp);
  if (base.size() != n) throw std::runtime_error("minplus_conv_from_counting: counter returned wrong length");
  for (auto v : base)
    if (v > 1) throw std::runtime_error("minplus_conv_from_counting: counter reported several witnesses after uniquifying");
  std::vector<std::size_t> idx(n, 0);
  for (std::uint64_t bit = 0; bit < ceil_log2(n); ++bit) {
    // a2[2u] = a'[u], a2[2u+1] = a'[u] when bit is set; b' doubled. Position 2m
    // then sees the witness once or twice.
    std::vector<ExtInt> a2(2 * n, INF), b2(2 * n);
    for (std::size_t u = 0; u < n; ++u) {
      a2[2 * u] = ap[u];
      if ((u >> bit) & 1) a2[2 * u + 1] = ap[u];
      b2[2 * u] = b2[2 * u + 1] = bp[u];
    }
    auto cnt = counter(a2, b2);
    if (cnt.size() != 2 * n) throw std::runtime_error("minplus_conv_from_counting: counter returned wrong length");
    for (std::size_t m = 0; m < n; ++m) {
      std::uint64_t v = cnt[2 * m];
      if (base[m] == 0 ? v != 0 : (v != 1 && v != 2))
        throw std::runtime_error("minplus_conv_from_counting: count " + std::to_string(v) + " outside {1, 2} in bit round " +
                                 std::to_string(bit));
      if (v == 2) idx[m] |= std::size_t{1} << bit;
    }
  }
  std::vector<ExtInt> C(n, INF);
  for (std::size_t m = 1; m < n; ++m) {
    if (!base[m]) continue;
    std::size_t u = idx[m];
    if (u >= m) throw std::runtime_error("minplus_conv_from_counting: decoded index out of range");
    C[m] = add(a[u], b[m - 1 - u]);
  }
  return C;
}

namespace {

// h(x) = top r bits of alpha * x mod 2^64; h(a) + h(b) is h(a + b) or h(a + b) - 1 mod 2^r.
std::vector<std::uint64_t> three_sum_round(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B,
                                           const std::vector<std::int64_t>& C, unsigned r, Rng& rng,
                                           ThreeSumStats& st) {
  const std::uint64_t alpha = rng.next() | 1, R = std::uint64_t{1} << r;
  auto h = [&](std::int64_t v) { return (alpha * static_cast<std::uint64_t>(v)) >> (64 - r); };
  std::vector<std::vector<std::int64_t>> bA(R), bB(R);
  std::vector<std::vector<std::size_t>> bC(R);
  for (auto v : A) bA[h(v)].push_back(v);
  for (auto v : B) bB[h(v)].push_back(v);
  for (std::size_t i = 0; i < C.size(); ++i) bC[h(C[i])].push_back(i);
  auto load = [](const auto& bk) {
    std::size_t m = 0;
    for (auto& x : bk) m = std::max(m, x.size());
    return m;
  };
  const std::size_t LA = load(bA), LB = load(bB), LC = load(bC), N = 2 * R;
  std::vector<std::uint64_t> counts(C.size(), 0);
  for (std::size_t ra = 0; ra < LA; ++ra)
    for (std::size_t rb = 0; rb < LB; ++rb) {
      std::vector<ExtInt> a(N, INF), b(N, INF);
      for (std::size_t t = 0; t < R; ++t) {
        if (ra < bA[t].size()) a[t] = bA[t][ra];
        if (rb < bB[t].size()) b[t] = bB[t][rb];
      }
      for (std::size_t rc = 0; rc < LC; ++rc)
        for (std::uint64_t delta = 0; delta < 2; ++delta) {
          std::vector<ExtInt> c(N, INF);
          bool any = false;
          for (std::size_t t = 0; t < R; ++t) {
            if (rc >= bC[t].size()) continue;
            std::size_t pos = (t + R - delta) % R;
            ExtInt v = C[bC[t][rc]];
            c[pos + 1] = v;
            if (pos + R + 1 < N) c[pos + R + 1] = v;
            any = true;
          }
          if (!any) continue;
          ++st.instances;
          auto w = count_all_nums_3sum_conv(a, b, c, list_3sum_conv_brute, rng);
          for (std::size_t t = 0; t < R; ++t) {
            if (rc >= bC[t].size()) continue;
            std::size_t pos = (t + R - delta) % R;
            std::uint64_t got = w[pos + 1] + (pos + R + 1 < N ? w[pos + R + 1] : 0);
            counts[bC[t][rc]] += got;
          }
        }
    }
  ++st.rounds;
  return counts;
}

}  // namespace

std::vector<std::uint64_t> count_all_nums_3sum(const std::vector<std::int64_t>& Ain, const std::vector<std::int64_t>& Bin,
                                               const std::vector<std::int64_t>& C, Rng& rng, ThreeSumStats* stats) {
  std::vector<std::int64_t> A = Ain, B = Bin;
  for (auto* v : {&A, &B}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  ThreeSumStats st;
  std::vector<std::uint64_t> out(C.size(), 0);
  if (!A.empty() && !B.empty() && !C.empty()) {
    unsigned r = std::max<unsigned>(1, ceil_log2(std::max({A.size(), B.size(), C.size()})));
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10) throw std::runtime_error("count_all_nums_3sum: hash rounds keep disagreeing");
      auto first = three_sum_round(A, B, C, r, rng, st);
      auto second = three_sum_round(A, B, C, r, rng, st);
      if (first == second) {
        out = first;
        break;
      }
      ++st.resamples;
      ++counters().resamples;
    }
  }
  if (stats) *stats = st;
  return out;
}

std::vector<ExactTriInstance> negtri_to_exacttri_instances(const TripartiteGraph& G) {
  constexpr ExtInt kLimit = ExtInt{1} << 40;
  TripartiteGraph H = G;
  for (Eigen::Index e = 0; e < H.uv.size(); ++e)
    if (H.uv.data()[e] != INF) H.uv.data()[e] = add(H.uv.data()[e], 1);
  for (const Matrix* M : {&H.ux, &H.xv, &H.uv})
    for (Eigen::Index e = 0; e < M->size(); ++e) {
      ExtInt w = M->data()[e];
      if (w != INF && (w > kLimit || w < -kLimit)) throw OverflowError("negtri_to_exacttri_instances: |weight| > 2^40");
    }

  std::vector<ExactTriInstance> out;
  auto map = [](const Matrix& M, auto f) {
    Matrix R(M.rows(), M.cols());
    bool any = false;
    for (Eigen::Index e = 0; e < M.size(); ++e) {
      ExtInt w = M.data()[e];
      R.data()[e] = w == INF ? INF : f(w);
      any |= R.data()[e] != INF;
    }
    return std::pair{R, any};
  };
  auto half = [](ExtInt w) { return ceil_div_signed(w, 2); };

  // weights with a + b + c <= 0 are counted; halving keeps the <= 0 case and
  // peels off the parity cases that land exactly on 1
  std::function<void(const TripartiteGraph&)> rec = [&](const TripartiteGraph& T) {
    ExtInt W = 0;
    bool any = false;
    for (const Matrix* M : {&T.ux, &T.xv, &T.uv})
      for (Eigen::Index e = 0; e < M->size(); ++e)
        if (M->data()[e] != INF) {
          any = true;
          W = std::max(W, std::abs(M->data()[e]));
        }
    if (!any) return;
    if (W <= 2) {
      for (ExtInt w1 = -W; w1 <= W; ++w1)
        for (ExtInt w2 = -W; w2 <= W; ++w2)
          for (ExtInt w3 = -W; w3 <= W; ++w3) {
            if (w1 + w2 + w3 > 0) continue;
            auto [a, ha] = map(T.ux, [&](ExtInt w) { return w == w1 ? 0 : INF; });
            auto [b, hb] = map(T.xv, [&](ExtInt w) { return w == w2 ? 0 : INF; });
            auto [c, hc] = map(T.uv, [&](ExtInt w) { return w == w3 ? 0 : INF; });
            if (ha && hb && hc) out.push_back({TripartiteGraph(a, b, c), 0});
          }
      return;
    }
    auto [a, ha] = map(T.ux, half);
    auto [b, hb] = map(T.xv, half);
    auto [c, hc] = map(T.uv, half);
    rec(TripartiteGraph(a, b, c));
    static constexpr int kOdd[4][3] = {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    for (auto& pat : kOdd) {
      auto keep = [&](int odd) { return [odd, &half](ExtInt w) { return (mod_pos(w, 2) == odd) ? half(w) : INF; }; };
      auto [pa, qa] = map(T.ux, keep(pat[0]));
      auto [pb, qb] = map(T.xv, keep(pat[1]));
      auto [pc, qc] = map(T.uv, keep(pat[2]));
      if (qa && qb && qc) out.push_back({TripartiteGraph(pa, pb, pc), 1});
    }
  };
  rec(H);
  return out;
}

BigNat count_exact_k_clique(const Matrix& W, ExtInt t, unsigned k) {
  require_shape(W.rows() == W.cols(), "count_exact_k_clique square");
  if (k < 3 || k > 5) throw std::invalid_argument("count_exact_k_clique: k must be 3, 4 or 5");
  const std::size_t n = W.rows();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && W(u, v) != W(v, u)) throw std::invalid_argument("count_exact_k_clique: weights not symmetric");
  const std::size_t jn = k - 3;
  if (n < k) return 0;

  BigNat total = 0;
  std::vector<std::size_t> J(jn);
  for (std::size_t i = 0; i < jn; ++i) J[i] = i;
  for (;;) {
    bool ok = true;
    ExtInt sumJ = 0;
    for (std::size_t x = 0; x < jn && ok; ++x)
      for (std::size_t y = x + 1; y < jn && ok; ++y) {
        ok = W(J[x], J[y]) != INF;
        if (ok) sumJ = add(sumJ, W(J[x], J[y]));
      }
    if (ok) {
      std::vector<std::size_t> rest;
      for (std::size_t v = 0; v < n; ++v)
        if (std::find(J.begin(), J.end(), v) == J.end()) rest.push_back(v);
      const std::size_t m = rest.size();
      Matrix w2 = filled(m, m, INF);
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) {
          if (x == y || W(rest[x], rest[y]) == INF) continue;
          ExtInt v = mul(W(rest[x], rest[y]), 2);
          for (auto j : J) v = add(v, W(j, rest[x]), W(j, rest[y]));
          w2(x, y) = v;
        }
      ExtInt t2 = sub(mul(t, 2), mul(sumJ, 2));
      CountMatrix D = count_ae_exact_tri(TripartiteGraph(w2, w2, w2), t2, list_exact_tri_brute);
      std::uint64_t ordered = D.sum();
      if (ordered % 6) throw std::logic_error("count_exact_k_clique: ordered triangle count not divisible by 6");
      total += ordered / 6;
    }
    // next combination
    std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(jn) - 1;
    while (pos >= 0 && J[pos] == n - jn + pos) --pos;
    if (pos < 0) break;
    ++J[pos];
    for (std::size_t q = pos + 1; q < jn; ++q) J[q] = J[q - 1] + 1;
  }
  // every k-clique is found once per choice of J inside it
  const unsigned per = k == 3 ? 1 : k == 4 ? 4 : 10;
  if (total % per != 0) throw std::logic_error("count_exact_k_clique: total not divisible by C(k, 3)");
  return total / per;
}

ApspModResult apsp_count_mod(const Matrix& W, std::uint64_t U, Rng& rng) {
  require_shape(W.rows() == W.cols(), "apsp_count_mod square");
  if (U < 2) throw std::invalid_argument("apsp_count_mod: modulus < 2");
  const std::size_t n = W.rows();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && W(u, v) != INF && W(u, v) <= 0) throw std::invalid_argument("apsp_count_mod: nonpositive weight");
  const unsigned bits = 64 - __builtin_clzll(U - 1);
  auto mulmod = [U](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a % U) * (b % U) % U);
  };

  using Pair = ApspModResult;
  // (C, C') with C = A * B and C'[i,j] = sum over witnesses of A'[i,k] B'[k,j],
  // split by the bits of A' and B' into witness-counting instances
  auto funny = [&](const Pair& X, const Pair& Y) {
    Pair Z{minplus_naive(X.dist, Y.dist), CountMatrix::Zero(n, n)};
    for (unsigned p = 0; p < bits; ++p) {
      Matrix Ap = filled(n, n, INF);
      bool anyA = false;
      for (Eigen::Index e = 0; e < Ap.size(); ++e)
        if ((X.count.data()[e] >> p) & 1) Ap.data()[e] = X.dist.data()[e], anyA = true;
      if (!anyA) continue;
      for (unsigned q = 0; q < bits; ++q) {
        Matrix Bq = filled(n, n, INF);
        bool anyB = false;
        for (Eigen::Index e = 0; e < Bq.size(); ++e)
          if ((Y.count.data()[e] >> q) & 1) Bq.data()[e] = Y.dist.data()[e], anyB = true;
        if (!anyB) continue;
        Matrix Cpq = minplus_naive(Ap, Bq);
        CountMatrix cnt = count_minplus(Ap, Bq, rng);
        std::uint64_t scale = mulmod(std::uint64_t{1} << p, std::uint64_t{1} << q);
        for (Eigen::Index e = 0; e < Cpq.size(); ++e)
          if (Cpq.data()[e] != INF && Cpq.data()[e] == Z.dist.data()[e])
            Z.count.data()[e] = (Z.count.data()[e] + mulmod(scale, cnt.data()[e])) % U;
      }
    }
    return Z;
  };
  auto oplus = [&](const Pair& X, const Pair& Y) {
    Pair Z{Matrix(n, n), CountMatrix::Zero(n, n)};
    for (Eigen::Index e = 0; e < Z.dist.size(); ++e) {
      ExtInt a = X.dist.data()[e], b = Y.dist.data()[e], c = std::min(a, b);
      Z.dist.data()[e] = c;
      if (c == INF) continue;
      Z.count.data()[e] = ((a == c ? X.count.data()[e] : 0) + (b == c ? Y.count.data()[e] : 0)) % U;
    }
    return Z;
  };

  Pair eq{filled(n, n, INF), CountMatrix::Zero(n, n)};
  Pair lt{filled(n, n, INF), CountMatrix::Zero(n, n)};
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
    lt = oplus(lt, funny(lt, eq));
    eq = funny(eq, eq);
  }
  return lt;
}

}  // namespace fmtk
