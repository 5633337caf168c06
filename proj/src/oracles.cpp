#include "fmtk/oracles.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fmtk::oracle {

namespace {
void guard(std::size_t n, std::size_t cap, const char* who) {
  if (n > cap)
    throw std::length_error(std::string(who) + ": size " + std::to_string(n) + " exceeds oracle guard " +
                            std::to_string(cap));
}
void guard_mats(const Matrix& A, const Matrix& B, const char* who) {
  require_shape(A.cols() == B.rows(), who);
  guard(std::max({A.rows(), A.cols(), B.cols()}), kMaxMatrixDim, who);
}
}  // namespace

Matrix brute_minplus(const Matrix& A, const Matrix& B) {
  guard_mats(A, B, "brute_minplus");
  Matrix C = filled(A.rows(), B.cols(), INF);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      for (Eigen::Index k = 0; k < A.cols(); ++k) C(i, j) = std::min(C(i, j), add(A(i, k), B(k, j)));
  return C;
}

CountMatrix brute_minplus_witness_counts(const Matrix& A, const Matrix& B) {
  Matrix C = brute_minplus(A, B);
  CountMatrix D = CountMatrix::Zero(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      if (C(i, j) != INF)
        for (Eigen::Index k = 0; k < A.cols(); ++k) D(i, j) += add(A(i, k), B(k, j)) == C(i, j);
  return D;
}

Grid<std::vector<std::size_t>> brute_witness_sets(const Matrix& A, const Matrix& B) {
  Matrix C = brute_minplus(A, B);
  Grid<std::vector<std::size_t>> W(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      if (C(i, j) != INF)
        for (Eigen::Index k = 0; k < A.cols(); ++k)
          if (add(A(i, k), B(k, j)) == C(i, j)) W(i, j).push_back(k);
  return W;
}

CountMatrix brute_equality(const Matrix& A, const Matrix& B) {
  guard_mats(A, B, "brute_equality");
  CountMatrix C = CountMatrix::Zero(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      for (Eigen::Index k = 0; k < A.cols(); ++k) C(i, j) += A(i, k) != INF && A(i, k) == B(k, j);
  return C;
}

CountMatrix brute_dominance(const Matrix& A, const Matrix& B) {
  guard_mats(A, B, "brute_dominance");
  CountMatrix C = CountMatrix::Zero(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      for (Eigen::Index k = 0; k < A.cols(); ++k) C(i, j) += A(i, k) <= B(k, j);
  return C;
}

Matrix brute_gen_equality(const Matrix& A, const Matrix& Ap, const Matrix& B, const Matrix& Bp) {
  guard_mats(A, B, "brute_gen_equality");
  require_shape(Ap.rows() == A.rows() && Ap.cols() == A.cols() && Bp.rows() == B.rows() && Bp.cols() == B.cols(),
                "brute_gen_equality weights");
  Matrix E = filled(A.rows(), B.cols(), INF);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      for (Eigen::Index k = 0; k < A.cols(); ++k)
        if (A(i, k) != INF && A(i, k) == B(k, j)) E(i, j) = std::min(E(i, j), add(Ap(i, k), Bp(k, j)));
  return E;
}

Matrix brute_min_witness(const BoolMatrix& A, const BoolMatrix& B) {
  require_shape(A.cols() == B.rows(), "brute_min_witness");
  guard(std::max({A.rows(), A.cols(), B.cols()}), kMaxMatrixDim, "brute_min_witness");
  Matrix C = filled(A.rows(), B.cols(), INF);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j)
      for (std::size_t k = 0; k < A.cols(); ++k)
        if (A.get(i, k) && B.get(k, j)) {
          C(i, j) = k;
          break;
        }
  return C;
}

Matrix brute_min_equality(const Matrix& A, const Matrix& B) {
  guard_mats(A, B, "brute_min_equality");
  Matrix C = filled(A.rows(), B.cols(), INF);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      for (Eigen::Index k = 0; k < A.cols(); ++k)
        if (A(i, k) != INF && A(i, k) == B(k, j)) C(i, j) = std::min(C(i, j), A(i, k));
  return C;
}

std::vector<ExtInt> brute_minplus_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b) {
  require_shape(a.size() == b.size(), "brute_minplus_conv lengths");
  guard(a.size(), kMaxArray, "brute_minplus_conv");
  std::size_t n = a.size();
  std::vector<ExtInt> c(n, INF);
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t p = 0; p + 1 <= m; ++p) c[m] = std::min(c[m], add(a[p], b[m - 1 - p]));
  return c;
}

std::vector<ExtInt> brute_min_equal_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b) {
  require_shape(a.size() == b.size(), "brute_min_equal_conv lengths");
  guard(a.size(), 8 * kMaxArray, "brute_min_equal_conv");
  std::size_t n = a.size();
  std::vector<ExtInt> c(n, INF);
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t p = 0; p + 1 <= m; ++p)
      if (a[p] != INF && a[p] == b[m - 1 - p]) c[m] = std::min(c[m], a[p]);
  return c;
}

std::vector<std::uint64_t> brute_3sum_conv_counts(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                  const std::vector<ExtInt>& c) {
  require_shape(a.size() == b.size() && b.size() == c.size(), "brute_3sum_conv_counts lengths");
  guard(a.size(), kMaxArray, "brute_3sum_conv_counts");
  std::size_t n = a.size();
  std::vector<std::uint64_t> w(n, 0);
  for (std::size_t m = 1; m < n; ++m) {
    if (c[m] == INF) continue;
    for (std::size_t p = 0; p + 1 <= m; ++p) w[m] += add(a[p], b[m - 1 - p]) == c[m];
  }
  return w;
}

std::vector<Triangle> brute_zero_triangle_list(const TripartiteGraph& G, ExtInt t) {
  guard(std::max({G.n1(), G.n2(), G.n3()}), kMaxMatrixDim, "brute_zero_triangle_list");
  std::vector<Triangle> out;
  for (std::size_t i = 0; i < G.n1(); ++i)
    for (std::size_t k = 0; k < G.n2(); ++k)
      for (std::size_t j = 0; j < G.n3(); ++j)
        if (G.has(i, k, j) && G.weight(i, k, j) == t) out.push_back({i, k, j});
  return out;
}

CountMatrix brute_exact_tri_counts(const TripartiteGraph& G, ExtInt t) {
  CountMatrix D = CountMatrix::Zero(G.n1(), G.n3());
  for (auto& tr : brute_zero_triangle_list(G, t)) ++D(tr[0], tr[2]);
  return D;
}

CountMatrix brute_negative_triangle_counts(const TripartiteGraph& G) {
  guard(std::max({G.n1(), G.n2(), G.n3()}), kMaxMatrixDim, "brute_negative_triangle_counts");
  CountMatrix D = CountMatrix::Zero(G.n1(), G.n3());
  for (std::size_t i = 0; i < G.n1(); ++i)
    for (std::size_t k = 0; k < G.n2(); ++k)
      for (std::size_t j = 0; j < G.n3(); ++j)
        if (G.has(i, k, j) && G.weight(i, k, j) < 0) ++D(i, j);
  return D;
}

std::vector<std::uint64_t> brute_3sum_counts(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B,
                                             const std::vector<std::int64_t>& C) {
  guard(std::max({A.size(), B.size(), C.size()}), kMaxArray, "brute_3sum_counts");
  std::vector<std::uint64_t> out(C.size(), 0);
  for (std::size_t idx = 0; idx < C.size(); ++idx)
    for (auto a : A)
      for (auto b : B) out[idx] += add(a, b) == C[idx];
  return out;
}

std::vector<std::int64_t> brute_sumset(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B) {
  guard(std::max(A.size(), B.size()), kMaxArray, "brute_sumset");
  std::set<std::int64_t> s;
  for (auto a : A)
    for (auto b : B) s.insert(add(a, b));
  return {s.begin(), s.end()};
}

ApspResult brute_apsp_count(const Matrix& W) {
  require_shape(W.rows() == W.cols(), "brute_apsp_count square");
  std::size_t n = W.rows();
  guard(n, kMaxApspNodes, "brute_apsp_count");
  ApspResult res{filled(n, n, INF), BigMatrix(n, n, BigNat(0))};
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<ExtInt> d(n, INF);
    std::vector<char> done(n, 0);
    std::vector<std::size_t> order;
    d[s] = 0;
    for (std::size_t it = 0; it < n; ++it) {
      std::size_t u = n;
      for (std::size_t v = 0; v < n; ++v)
        if (!done[v] && d[v] != INF && (u == n || d[v] < d[u])) u = v;
      if (u == n) break;
      done[u] = 1;
      order.push_back(u);
      for (std::size_t v = 0; v < n; ++v)
        if (v != u && W(u, v) != INF) d[v] = std::min(d[v], add(d[u], W(u, v)));
    }
    std::vector<BigNat> cnt(n, 0);
    cnt[s] = 1;
    for (std::size_t v : order) {
      if (v == s) continue;
      for (std::size_t u : order)
        if (u != v && W(u, v) != INF && add(d[u], W(u, v)) == d[v]) cnt[v] += cnt[u];
    }
    for (std::size_t v = 0; v < n; ++v) {
      res.dist(s, v) = d[v];
      res.count(s, v) = cnt[v];
    }
  }
  return res;
}

std::vector<ModeAnswer> brute_range_mode(const std::vector<std::int64_t>& S,
                                         const std::vector<std::pair<std::size_t, std::size_t>>& queries,
                                         TieRule rule) {
  std::vector<ModeAnswer> out;
  for (auto [lo, hi] : queries) {
    std::map<std::int64_t, std::uint64_t> freq;
    for (std::size_t p = lo; p < hi && p < S.size(); ++p) ++freq[S[p]];
    ModeAnswer best{-1, 0};
    for (auto [sym, f] : freq) {
      if (f > best.freq || (f == best.freq && rule == TieRule::Largest)) best = {sym, f};
    }
    out.push_back(best);
  }
  return out;
}

std::vector<HopWeight> brute_lex_shortest_path(const UGraph& G, std::size_t src) {
  std::vector<std::vector<std::pair<std::size_t, ExtInt>>> adj(G.n);
  for (auto& e : G.edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  std::vector<HopWeight> d(G.n, {INF, INF});
  std::vector<char> done(G.n, 0);
  d[src] = {0, 0};
  auto less = [](HopWeight a, HopWeight b) { return a.hops != b.hops ? a.hops < b.hops : a.weight < b.weight; };
  for (std::size_t it = 0; it < G.n; ++it) {
    std::size_t u = G.n;
    for (std::size_t v = 0; v < G.n; ++v)
      if (!done[v] && d[v].hops != INF && (u == G.n || less(d[v], d[u]))) u = v;
    if (u == G.n) break;
    done[u] = 1;
    for (auto [v, w] : adj[u]) {
      HopWeight cand{d[u].hops + 1, add(d[u].weight, w)};
      if (d[v].hops == INF || less(cand, d[v])) d[v] = cand;
    }
  }
  return d;
}

std::uint64_t brute_popularity(const IndexedSet& A, std::int64_t dx, ExtInt dv) {
  guard(A.n(), kMaxArray, "brute_popularity");
  std::uint64_t c = 0;
  for (std::int64_t i = A.lo; i < A.hi(); ++i)
    if (A.has(i) && A.contains(i - dx, sub(A.at(i), dv))) ++c;
  return c;
}

std::vector<Pair> brute_qualifying_pairs(const IndexedSet& A, const IndexedSet& C) {
  guard(A.n(), kMaxArray, "brute_qualifying_pairs");
  std::vector<Pair> out;
  for (std::int64_t j = A.lo; j < A.hi(); ++j)
    for (std::int64_t i = A.lo; i < A.hi(); ++i)
      if (A.has(j) && A.has(i) && C.contains(j - i, sub(A.at(j), A.at(i)))) out.push_back({j, i});
  return out;
}

std::vector<Pair> brute_popular_pairs(const IndexedSet& A, std::uint64_t threshold) {
  guard(A.n(), kMaxArray, "brute_popular_pairs");
  std::map<std::pair<std::int64_t, ExtInt>, std::uint64_t> pop;
  for (std::int64_t j = A.lo; j < A.hi(); ++j)
    for (std::int64_t i = A.lo; i < A.hi(); ++i)
      if (A.has(j) && A.has(i)) ++pop[{j - i, sub(A.at(j), A.at(i))}];
  std::vector<Pair> out;
  for (std::int64_t j = A.lo; j < A.hi(); ++j)
    for (std::int64_t i = A.lo; i < A.hi(); ++i)
      if (A.has(j) && A.has(i) && pop[{j - i, sub(A.at(j), A.at(i))}] > threshold) out.push_back({j, i});
  return out;
}

std::optional<Pair> brute_cover_check(const std::vector<std::vector<std::int64_t>>& subsets,
                                      const std::vector<Pair>& remainder, const std::vector<Pair>& pairs) {
  std::set<Pair> R(remainder.begin(), remainder.end());
  std::vector<std::set<std::int64_t>> sub;
  for (auto& s : subsets) sub.emplace_back(s.begin(), s.end());
  for (auto& p : pairs) {
    if (R.count(p)) continue;
    bool ok = false;
    for (auto& s : sub)
      if (s.count(p.first) && s.count(p.second)) {
        ok = true;
        break;
      }
    if (!ok) return p;
  }
  return std::nullopt;
}

BigNat brute_k_clique_count(const Matrix& W, ExtInt t, unsigned k) {
  require_shape(W.rows() == W.cols(), "brute_k_clique_count square");
  std::size_t n = W.rows();
  guard(n, kMaxCliqueNodes, "brute_k_clique_count");
  if (k < 1 || k > n) return 0;
  BigNat total = 0;
  std::vector<std::size_t> pick(k);
  // enumerate increasing k-tuples
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    ExtInt w = 0;
    bool ok = true;
    for (std::size_t a = 0; a < k && ok; ++a)
      for (std::size_t b = a + 1; b < k && ok; ++b) {
        ExtInt e = W(pick[a], pick[b]);
        if (e == INF)
          ok = false;
        else
          w = add(w, e);
      }
    if (ok && w == t) total += 1;
    std::size_t p = k;
    while (p > 0 && pick[p - 1] == n - k + p - 1) --p;
    if (p == 0) break;
    ++pick[p - 1];
    for (std::size_t q = p; q < k; ++q) pick[q] = pick[q - 1] + 1;
  }
  return total;
}

}  // namespace fmtk::oracle
