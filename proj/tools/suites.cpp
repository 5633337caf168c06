#include "suites.hpp"

#include "fmtk/bsg.hpp"
#include "fmtk/counters.hpp"
#include "fmtk/counting.hpp"
#include "fmtk/gadgets.hpp"
#include "fmtk/oracles.hpp"
#include "fmtk/products.hpp"
#include "fmtk/tridecomp.hpp"
#include "fmtk/witnesses.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <set>

namespace fmtk::suites {

namespace {

using nlohmann::json;

struct CaseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const char* what) {
  if (!ok) throw CaseFailure(what);
}

template <class T>
bool same(const Mat<T>& a, const Mat<T>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

// Per-case running maxima and sums, folded into the metrics object.
struct Stats {
  std::map<std::string, std::uint64_t> max, sum;
  void hi(const std::string& k, std::uint64_t v) { max[k] = std::max(max[k], v); }
  void add(const std::string& k, std::uint64_t v) { sum[k] += v; }
};

struct Env {
  Rng& rng;
  Scale scale;
  Stats& stats;
  // small_max at Small, doubled at Medium, never above cap
  std::size_t dim(std::size_t small_max, std::size_t cap = oracle::kMaxMatrixDim) const {
    return std::min(scale == Scale::Small ? small_max : 2 * small_max, cap);
  }
  std::size_t pick(std::size_t lo, std::size_t small_max, std::size_t cap = oracle::kMaxMatrixDim) const {
    return rng.range(lo, std::max(lo, dim(small_max, cap)));
  }
};

using Body = std::function<void(Env&)>;
struct CaseDef {
  std::string name;
  std::uint64_t instances;
  Body body;
};

Matrix rmat(Rng& rng, std::size_t r, std::size_t c, ExtInt lo, ExtInt hi, unsigned inf_pct = 0) {
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i)
    M.data()[i] = inf_pct && rng.below(100) < inf_pct ? INF : rng.range(lo, hi);
  return M;
}

std::vector<ExtInt> rarr(Rng& rng, std::size_t n, ExtInt lo, ExtInt hi, unsigned inf_pct = 0) {
  std::vector<ExtInt> v(n);
  for (auto& x : v) x = inf_pct && rng.below(100) < inf_pct ? INF : rng.range(lo, hi);
  return v;
}

std::vector<std::int64_t> rset(Rng& rng, std::size_t n, std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rng.range(lo, hi));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::int64_t> rsubset(Rng& rng, const std::vector<std::int64_t>& U) {
  std::vector<std::int64_t> v;
  for (auto x : U)
    if (rng.coin(1, 2)) v.push_back(x);
  return v;
}

TripartiteGraph rgraph(Rng& rng, std::size_t n1, std::size_t n2, std::size_t n3, ExtInt lo, ExtInt hi,
                       unsigned inf_pct = 0) {
  return TripartiteGraph(rmat(rng, n1, n2, lo, hi, inf_pct), rmat(rng, n2, n3, lo, hi, inf_pct),
                         rmat(rng, n1, n3, lo, hi, inf_pct));
}

BoolMatrix rbool(Rng& rng, std::size_t r, std::size_t c, std::uint64_t num, std::uint64_t den) {
  BoolMatrix M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng.coin(num, den)) M.set(i, j);
  return M;
}

Matrix rdigraph(Rng& rng, std::size_t n, ExtInt wmax, std::uint64_t num, std::uint64_t den) {
  Matrix W = filled(n, n, INF);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && rng.coin(num, den)) W(u, v) = rng.range(1, wmax);
  return W;
}

// ---------------------------------------------------------------- products

std::vector<CaseDef> products_cases() {
  return {
      {"minplus_bounded", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt M = e.rng.range(0, 20);
         Matrix A = rmat(e.rng, n1, n2, 0, M, 10), B = rmat(e.rng, n2, n3, 0, M, 10);
         Matrix ref = oracle::brute_minplus(A, B);
         expect(same(minplus_bounded(A, B, M), ref), "minplus_bounded differs from oracle");
         expect(same(minplus_naive(A, B), ref), "minplus_naive differs from oracle");
       }},
      {"dominance", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt hi = e.rng.range(0, 40);
         Matrix A = rmat(e.rng, n1, n2, -hi, hi), B = rmat(e.rng, n2, n3, -hi, hi);
         auto ref = oracle::brute_dominance(A, B);
         std::size_t r = e.rng.range(1, n2 + 1);
         expect(same(dominance_product(A, B, {r}), ref), "dominance_product differs from oracle");
         expect(same(dominance_product_naive(A, B), ref), "dominance_product_naive differs from oracle");
       }},
      {"equality", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt hi = e.rng.range(0, 4);
         Matrix A = rmat(e.rng, n1, n2, 0, hi, 5), B = rmat(e.rng, n2, n3, 0, hi, 5);
         std::size_t r = e.rng.range(1, n2 + 1);
         expect(same(equality_product(A, B, {r}), oracle::brute_equality(A, B)), "equality_product differs");
       }},
      {"generalized_equality", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt hi = e.rng.range(0, 4), ell = e.rng.range(0, 16);
         Matrix A = rmat(e.rng, n1, n2, 0, hi, 5), B = rmat(e.rng, n2, n3, 0, hi, 5);
         Matrix Ap = rmat(e.rng, n1, n2, -ell, ell, 10), Bp = rmat(e.rng, n2, n3, -ell, ell, 10);
         std::size_t r = e.rng.range(1, n2 + 1);
         expect(same(generalized_equality_product(A, Ap, B, Bp, {r}, ell), oracle::brute_gen_equality(A, Ap, B, Bp)),
                "generalized_equality_product differs");
       }},
      {"min_witness", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 24), n2 = e.pick(1, 24), n3 = e.pick(1, 24);
         std::uint64_t den = e.rng.range(2, 8);
         BoolMatrix A = rbool(e.rng, n1, n2, 1, den), B = rbool(e.rng, n2, n3, 1, den);
         expect(same(min_witness_product(A, B), oracle::brute_min_witness(A, B)), "min_witness_product differs");
       }},
      {"min_equality", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt hi = e.rng.range(0, 5);
         Matrix A = rmat(e.rng, n1, n2, 0, hi, 10), B = rmat(e.rng, n2, n3, 0, hi, 10);
         expect(same(min_equality_product(A, B), oracle::brute_min_equality(A, B)), "min_equality_product differs");
       }},
      {"min_equal_convolution", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 64, oracle::kMaxArray);
         ExtInt hi = e.rng.range(0, 6);
         auto a = rarr(e.rng, n, 0, hi, 10), b = rarr(e.rng, n, 0, hi, 10);
         expect(min_equal_convolution(a, b) == oracle::brute_min_equal_conv(a, b), "min_equal_convolution differs");
       }},
      {"minplus_convolution", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 64, oracle::kMaxArray);
         auto a = rarr(e.rng, n, -20, 20, 10), b = rarr(e.rng, n, -20, 20, 10);
         expect(minplus_convolution_naive(a, b) == oracle::brute_minplus_conv(a, b),
                "minplus_convolution_naive differs");
       }},
      {"threesum_convolution_counts", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 64, oracle::kMaxArray);
         auto a = rarr(e.rng, n, -5, 5, 5), b = rarr(e.rng, n, -5, 5, 5), c = rarr(e.rng, n, -10, 10, 5);
         expect(threesum_convolution_counts(a, b, c) == oracle::brute_3sum_conv_counts(a, b, c),
                "threesum_convolution_counts differs");
       }},
      {"sumset", 200,
       [](Env& e) {
         std::int64_t span = e.rng.range(1, 2000);
         auto A = rset(e.rng, e.pick(0, 64, 256), -span, span), B = rset(e.rng, e.pick(0, 64, 256), -span, span);
         auto ref = oracle::brute_sumset(A, B);
         expect(sumset(A, B, e.rng, {0, true}) == ref, "sumset (fft) differs");
         expect(sumset(A, B, e.rng) == ref, "sumset differs");
         expect(sumset_direct(A, B) == ref, "sumset_direct differs");
       }},
      {"minplus_key_reduction", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt ell = e.rng.range(1, 32), top = e.rng.coin(1, 3) ? std::min<ExtInt>(ell, 2) : ell;
         Matrix A = rmat(e.rng, n1, n2, 0, top, 10), B = rmat(e.rng, n2, n3, 0, top, 10);
         KeyReductionParams p{static_cast<std::size_t>(e.rng.range(1, n2)),
                              static_cast<std::size_t>(e.rng.range(1, ell)), static_cast<std::size_t>(e.rng.range(1, 8))};
         expect(same(minplus_key_reduction(A, B, ell, p, e.rng), oracle::brute_minplus(A, B)),
                "minplus_key_reduction differs");
       }},
  };
}

// --------------------------------------------------------------- witnesses

std::vector<CaseDef> witnesses_cases() {
  return {
      {"unique_witness", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 8), n2 = e.pick(1, 12), n3 = e.pick(1, 8);
         Matrix A = rmat(e.rng, n1, n2, 0, 6, 10), B = rmat(e.rng, n2, n3, 0, 6, 10);
         auto K = unique_witness_matrix(A, B);
         auto W = oracle::brute_witness_sets(A, B);
         Matrix C = oracle::brute_minplus(A, B);
         for (std::size_t i = 0; i < n1; ++i)
           for (std::size_t j = 0; j < n3; ++j) {
             if (C(i, j) == INF) {
               expect(K(i, j) == NO_WITNESS, "unreachable cell not marked NO_WITNESS");
             } else if (K(i, j) >= 0) {
               expect(add(A(i, K(i, j)), B(K(i, j), j)) == C(i, j), "returned index is not a witness");
             } else {
               expect(K(i, j) == NOT_UNIQUE && W(i, j).size() > 1, "NOT_UNIQUE on a unique cell");
             }
             if (W(i, j).size() == 1) expect(K(i, j) == static_cast<std::int64_t>(W(i, j)[0]), "unique witness missed");
           }
       }},
      {"capped_listing", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt hi = e.rng.range(0, 4);
         Matrix A = rmat(e.rng, n1, n2, 0, hi, 10), B = rmat(e.rng, n2, n3, 0, hi, 10);
         std::size_t cap = e.rng.range(1, n2);
         auto rep = list_witnesses_capped(A, B, cap, e.rng);
         auto W = oracle::brute_witness_sets(A, B);
         expect(same(rep.C, oracle::brute_minplus(A, B)), "product differs");
         for (std::size_t i = 0; i < n1; ++i)
           for (std::size_t j = 0; j < n3; ++j) {
             const auto& l = rep.lists(i, j);
             for (auto k : l) expect(add(A(i, k), B(k, j)) == rep.C(i, j), "listed index is not a witness");
             if (W(i, j).size() <= cap)
               expect(l == W(i, j) && !rep.truncated(i, j), "short witness list incomplete");
             else
               expect(rep.truncated(i, j) && l.size() == cap, "long witness list not truncated to cap");
           }
         e.stats.hi("max_rounds", rep.rounds);
       }},
      {"hitting_set", 200,
       [](Env& e) {
         std::size_t n = e.pick(4, 200, 400), s = e.rng.range(1, 8), m = e.pick(1, 300, 600);
         std::vector<std::vector<std::size_t>> sets(m);
         for (auto& st : sets) st = e.rng.sample(n, e.rng.range(ceil_div(n, s), n));
         auto H = greedy_hitting_set(sets);
         expect(std::is_sorted(H.begin(), H.end()), "hitting set not sorted");
         for (const auto& st : sets) {
           bool hit = false;
           for (auto x : st) hit = hit || std::binary_search(H.begin(), H.end(), x);
           expect(hit, "set missed by hitting set");
         }
         expect(H.size() <= static_cast<std::size_t>(std::ceil(s * std::log(m + 1.0))) + 1, "hitting set too large");
         e.stats.hi("max_size", H.size());
       }},
  };
}

// ---------------------------------------------------------------- counting

std::vector<CaseDef> counting_cases() {
  return {
      {"ae_exact_tri", 200,
       [](Env& e) {
         auto G = rgraph(e.rng, e.pick(1, 8), e.pick(1, 8), e.pick(1, 8), -3, 3, 10);
         ExtInt t = e.rng.range(-2, 2);
         std::size_t cap = e.rng.range(0, G.n2());
         expect(same(count_ae_exact_tri(G, t, list_exact_tri_brute, cap), oracle::brute_exact_tri_counts(G, t)),
                "count_ae_exact_tri differs");
       }},
      {"count_minplus", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 10), n2 = e.pick(1, 10), n3 = e.pick(1, 10);
         ExtInt hi = e.rng.range(0, 4);
         Matrix A = rmat(e.rng, n1, n2, 0, hi, 10), B = rmat(e.rng, n2, n3, 0, hi, 10);
         std::size_t cap = e.rng.range(0, n2);
         expect(same(count_minplus(A, B, e.rng, cap), oracle::brute_minplus_witness_counts(A, B)),
                "count_minplus differs");
       }},
      {"minplus_from_counting", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 6), n2 = e.pick(1, 6), n3 = e.pick(1, 6);
         Matrix A = rmat(e.rng, n1, n2, -5, 5, 10), B = rmat(e.rng, n2, n3, -5, 5, 10);
         MinPlusCounter counter = [&](const Matrix& X, const Matrix& Y) { return count_minplus(X, Y, e.rng); };
         expect(same(minplus_from_counting(A, B, counter), minplus_naive(A, B)), "minplus_from_counting differs");
       }},
      {"all_nums_3sum_conv", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 24, 256);
         auto a = rarr(e.rng, n, -4, 4, 5), b = rarr(e.rng, n, -4, 4, 5), c = rarr(e.rng, n, -8, 8, 5);
         std::size_t cap = e.rng.range(0, n);
         expect(count_all_nums_3sum_conv(a, b, c, list_3sum_conv_brute, e.rng, cap) ==
                    oracle::brute_3sum_conv_counts(a, b, c),
                "count_all_nums_3sum_conv differs");
       }},
      {"count_minplus_conv", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 24, 256);
         auto a = rarr(e.rng, n, 0, 4, 5), b = rarr(e.rng, n, 0, 4, 5);
         std::size_t cap = e.rng.range(0, n);
         expect(count_minplus_conv(a, b, list_3sum_conv_brute, e.rng, cap) ==
                    oracle::brute_3sum_conv_counts(a, b, oracle::brute_minplus_conv(a, b)),
                "count_minplus_conv differs");
       }},
      {"minplus_conv_from_counting", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 16, 128);
         auto a = rarr(e.rng, n, -10, 10, 10), b = rarr(e.rng, n, -10, 10, 10);
         ConvCounter counter = [&](const std::vector<ExtInt>& x, const std::vector<ExtInt>& y) {
           return count_minplus_conv(x, y, list_3sum_conv_brute, e.rng);
         };
         expect(minplus_conv_from_counting(a, b, counter) == minplus_convolution_naive(a, b),
                "minplus_conv_from_counting differs");
       }},
      {"all_nums_3sum", 200,
       [](Env& e) {
         std::int64_t span = e.rng.range(4, 200);
         auto A = rset(e.rng, e.pick(0, 24, 256), -span, span), B = rset(e.rng, e.pick(0, 24, 256), -span, span);
         auto C = rarr(e.rng, e.pick(1, 24, 256), -2 * span, 2 * span);
         ThreeSumStats st;
         expect(count_all_nums_3sum(A, B, C, e.rng, &st) == oracle::brute_3sum_counts(A, B, C),
                "count_all_nums_3sum differs");
         e.stats.hi("max_rounds", st.rounds);
         e.stats.add("resamples", st.resamples);
       }},
      {"negtri_to_exacttri", 200,
       [](Env& e) {
         ExtInt W = e.rng.coin(1, 2) ? 8 : ExtInt{1} << e.rng.range(3, 40);
         auto G = rgraph(e.rng, e.pick(1, 4), e.pick(1, 4), e.pick(1, 4), -W, W, 10);
         auto inst = negtri_to_exacttri_instances(G);
         CountMatrix S = CountMatrix::Zero(G.n1(), G.n3());
         for (const auto& I : inst) S += oracle::brute_exact_tri_counts(I.G, I.target);
         expect(same(S, oracle::brute_negative_triangle_counts(G)), "exact-triangle counts do not sum to negative counts");
         e.stats.hi("max_instances", inst.size());
       }},
      {"exact_k_clique", 200,
       [](Env& e) {
         unsigned k = e.rng.range(3, 5);
         std::size_t n = e.rng.range(k, e.dim(9, oracle::kMaxCliqueNodes));
         Matrix W = filled(n, n, INF);
         for (std::size_t u = 0; u < n; ++u)
           for (std::size_t v = u + 1; v < n; ++v) W(u, v) = W(v, u) = e.rng.coin(1, 10) ? INF : e.rng.range(0, 6);
         ExtInt t = e.rng.range(0, 6 * k);
         expect(count_exact_k_clique(W, t, k) == oracle::brute_k_clique_count(W, t, k), "count_exact_k_clique differs");
       }},
      {"apsp_count_mod", 200,
       [](Env& e) {
         std::size_t n = e.pick(2, 10, 12);
         Matrix W = rdigraph(e.rng, n, 3, 1, 2);
         std::uint64_t U = e.rng.range(2, 1000);
         auto got = apsp_count_mod(W, U, e.rng);
         auto ref = oracle::brute_apsp_count(W);
         expect(same(got.dist, ref.dist), "distances differ");
         for (std::size_t u = 0; u < n; ++u)
           for (std::size_t v = 0; v < n; ++v)
             expect(got.count(u, v) == static_cast<std::uint64_t>(ref.count(u, v) % U), "count mod U differs");
       }},
  };
}

// --------------------------------------------------------------- tridecomp

// Purity, disjoint completeness against the brute list, and the size bounds.
void check_decomposition(Env& e, const TripartiteGraph& G, ExtInt t, const TriangleDecomposition& D) {
  std::map<Triangle, int> seen;
  for (const auto& tri : D.remainder) ++seen[tri];
  for (const auto& cat : D.categories)
    for (std::size_t p = 0; p < cat.subgraphs.size(); ++p)
      for (const auto& tri : subgraph_triangles(cat, p)) {
        expect(G.has(tri[0], tri[1], tri[2]) && G.weight(tri[0], tri[1], tri[2]) == t, "impure subgraph triangle");
        ++seen[tri];
      }
  auto ref = oracle::brute_zero_triangle_list(G, t);
  expect(seen.size() == ref.size(), "triangle count identity fails");
  for (const auto& tri : ref) {
    auto it = seen.find({tri[0], tri[1], tri[2]});
    expect(it != seen.end(), "triangle not covered");
    expect(it->second == 1, "triangle covered twice");
  }
  const double n1 = G.n1(), n2 = G.n2(), n3 = G.n3(), s = D.s, lnN = std::log(n1 * n3);
  expect(D.remainder.size() <= (2 + lnN) * n1 * n2 * n3 / s + 1e-9, "remainder above bound");
  expect(D.subgraph_count() <= (std::ceil(s * lnN) + 1) * s * s, "too many subgraphs");
  e.stats.hi("max_remainder", D.remainder.size());
  e.stats.hi("max_subgraphs", D.subgraph_count());
}

std::vector<CaseDef> tridecomp_cases() {
  return {
      {"decomposition_contract", 200,
       [](Env& e) {
         std::size_t n2 = e.pick(1, 12, 24);
         ExtInt w = e.rng.range(1, 12);
         bool nonneg = e.rng.coin(1, 2);
         auto G = rgraph(e.rng, e.pick(1, 12, 24), n2, e.pick(1, 12, 24), nonneg ? 0 : -w, w,
                         e.rng.coin(1, 3) ? 10 : 0);
         if (e.rng.coin(1, 4))  // dense in target triangles
           for (Eigen::Index i = 0; i < G.uv.size(); ++i) G.uv.data()[i] = -e.rng.range(0, 1);
         ExtInt t = e.rng.range(-2, 2);
         std::size_t s = e.rng.range(1, std::min<std::size_t>(4, n2));
         check_decomposition(e, G, t, triangle_decomposition(G, t, s));
       }},
      {"update_equals_rebuild", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12, 24), n2 = e.pick(1, 12, 24), n3 = e.pick(1, 12, 24);
         auto G = rgraph(e.rng, n1, n2, n3, 0, 2);
         for (Eigen::Index i = 0; i < G.uv.size(); ++i) G.uv.data()[i] = -e.rng.range(0, 4);
         std::size_t s = e.rng.range(1, std::min<std::size_t>(4, n2));
         auto base = triangle_decomposition(G, 0, s);
         TripartiteGraph P = G;
         for (std::size_t k = e.rng.range(1, 8); k > 0; --k)
           P.uv(e.rng.below(n1), e.rng.below(n3)) = e.rng.coin(1, 8) ? INF : -e.rng.range(0, 4);
         ExtInt t = e.rng.coin(1, 4) ? e.rng.range(-1, 1) : 0;
         auto fresh = triangle_decomposition(P, t, s);
         expect(decomposition_update_uv(base, P, t) == fresh, "update differs from rebuild");
         check_decomposition(e, P, t, fresh);
       }},
      {"preprocessed_exact_tri", 200,
       [](Env& e) {
         auto G = rgraph(e.rng, e.pick(1, 8), e.pick(2, 8), e.pick(1, 8), -2, 2, 10);
         auto h = preprocessed_exact_tri_build(G, e.rng.range(1, std::min<std::size_t>(3, G.n2())));
         for (int q = 0; q < 3; ++q) {
           TriMask m = full_mask(G);
           TripartiteGraph Gm = G;
           auto thin = [&](BoolMatrix& b, Matrix& w) {
             for (std::size_t i = 0; i < b.rows(); ++i)
               for (std::size_t j = 0; j < b.cols(); ++j)
                 if (e.rng.coin(1, 3)) b.set(i, j, false), w(i, j) = INF;
           };
           thin(m.ux, Gm.ux);
           thin(m.xv, Gm.xv);
           thin(m.uv, Gm.uv);
           ExtInt t = e.rng.range(-1, 1);
           auto ref = oracle::brute_exact_tri_counts(Gm, t);
           auto cnt = preprocessed_exact_tri_count(h, m, t);
           auto flags = preprocessed_exact_tri_query(h, m, t);
           expect(same(cnt, ref), "masked triangle counts differ");
           for (std::size_t i = 0; i < G.n1(); ++i)
             for (std::size_t j = 0; j < G.n3(); ++j) expect(flags.get(i, j) == (ref(i, j) > 0), "masked flag differs");
         }
       }},
      {"preprocessed_3sum", 200,
       [](Env& e) {
         std::int64_t span = e.rng.range(4, 300);
         auto A = rset(e.rng, e.pick(1, 24, 256), -span, span), B = rset(e.rng, e.pick(1, 24, 256), -span, span);
         auto S = oracle::brute_sumset(A, B);
         e.rng.shuffle(S);
         std::vector<std::int64_t> C(S.begin(), S.begin() + std::min<std::size_t>(S.size(), e.pick(1, 24, 256)));
         for (int i = 0; i < 4; ++i) C.push_back(e.rng.range(-2 * span, 2 * span));
         std::sort(C.begin(), C.end());
         C.erase(std::unique(C.begin(), C.end()), C.end());
         auto h = preprocessed_3sum_build(A, B, C, e.rng.range(1, 3), e.rng.coin(1, 2) ? 0 : e.rng.range(1, 6));
         for (int q = 0; q < 3; ++q) {
           auto Ap = rsubset(e.rng, A), Bp = rsubset(e.rng, B), Cq = rsubset(e.rng, C);
           expect(preprocessed_3sum_query(h, Ap, Bp, Cq) == oracle::brute_3sum_counts(Ap, Bp, Cq),
                  "preprocessed 3SUM counts differ");
         }
       }},
      {"funny_product", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 8), n2 = e.pick(1, 8), n3 = e.pick(1, 8);
         Matrix A = rmat(e.rng, n1, n2, -2, 2, 10), B = rmat(e.rng, n2, n3, -2, 2, 10);
         BigMatrix X(n1, n2), Y(n2, n3);
         unsigned bits = e.rng.range(1, 200);
         auto big = [&]() -> BigNat {
           BigNat v = 0;
           for (unsigned b = 0; b < bits; b += 32) v = (v << 32) | BigNat(e.rng.next() & 0xffffffffu);
           return v >> e.rng.below(bits);
         };
         for (auto& v : X.data) v = big();
         for (auto& v : Y.data) v = big();
         auto g = funny_product(A, X, B, Y, e.rng.range(0, 3));
         Matrix C = oracle::brute_minplus(A, B);
         expect(same(g.C, C), "min-plus part differs");
         auto W = oracle::brute_witness_sets(A, B);
         for (std::size_t i = 0; i < n1; ++i)
           for (std::size_t j = 0; j < n3; ++j) {
             BigNat want = 0;
             for (auto k : W(i, j)) want += X(i, k) * Y(k, j);
             expect(g.Cp(i, j) == want, "witness-weighted sum differs");
           }
       }},
      {"apsp_count", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 12);
         Matrix W = rdigraph(e.rng, n, e.rng.coin(1, 2) ? 2 : 8, 3, 5);
         auto got = apsp_count(W, e.rng.range(0, 3));
         auto ref = oracle::brute_apsp_count(W);
         expect(same(got.dist, ref.dist), "distances differ");
         expect(got.count == ref.count, "path counts differ");
       }},
      {"minplus_bounded_difference", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 12), n2 = e.pick(1, 12), n3 = e.pick(1, 12);
         ExtInt c0 = e.rng.range(0, 3);
         Matrix A(n1, n2), B(n2, n3);
         for (std::size_t i = 0; i < n1; ++i)
           for (std::size_t k = 0; k < n2; ++k) A(i, k) = k ? A(i, k - 1) + e.rng.range(-c0, c0) : e.rng.range(-20, 20);
         for (std::size_t j = 0; j < n3; ++j)
           for (std::size_t k = 0; k < n2; ++k) B(k, j) = k ? B(k - 1, j) + e.rng.range(-c0, c0) : e.rng.range(-20, 20);
         expect(same(minplus_bounded_difference(A, B, c0, e.rng.range(1, 4), e.rng.range(1, 4)),
                     oracle::brute_minplus(A, B)),
                "minplus_bounded_difference differs");
       }},
  };
}

// --------------------------------------------------------------------- bsg

// C over offsets [-(n-1), n-1]; about half the entries copy a realized difference.
IndexedSet random_targets(Rng& rng, const IndexedSet& A, ExtInt span) {
  const std::int64_t n = A.n();
  std::vector<ExtInt> v(2 * n - 1, INF);
  for (std::int64_t k = -(n - 1); k <= n - 1; ++k) {
    if (rng.coin(1, 2)) {
      std::int64_t i = rng.range(std::max<std::int64_t>(0, -k), std::min<std::int64_t>(n - 1, n - 1 - k));
      if (A.has(i) && A.has(i + k)) v[k + n - 1] = A.at(i + k) - A.at(i);
    } else if (rng.coin(1, 2)) {
      v[k + n - 1] = rng.range(-span, span);
    }
  }
  return IndexedSet(v, -(n - 1));
}

void check_cover(Env& e, const BsgCover& cov, const std::vector<oracle::Pair>& need, const IndexedSet& A) {
  expect(!oracle::brute_cover_check(cov.subsets, cov.remainder, need).has_value(), "uncovered pair");
  expect(cov.remainder.size() <= cov.pair_budget, "remainder above budget");
  expect(cov.subsets.size() <= cov.subset_budget, "too many subsets");
  expect(cov.attempts >= 1 && cov.attempts <= 10, "attempt count out of range");
  for (const auto& S : cov.subsets) {
    expect(!S.empty() && std::is_sorted(S.begin(), S.end()), "subset empty or unsorted");
    for (auto i : S) expect(A.has(i), "subset index outside A");
  }
  e.stats.hi("max_attempts", cov.attempts);
  e.stats.add("covers", 1);
}

std::vector<CaseDef> bsg_cases() {
  return {
      {"cover_simple", 200,
       [](Env& e) {
         std::size_t n = e.pick(8, 64, 256);
         IndexedSet A(rarr(e.rng, n, 0, e.rng.range(1, 6), 10));
         auto C = random_targets(e.rng, A, 6);
         auto cov = bsg_cover_simple(A, C, e.rng.range(1, 2), e.rng);
         check_cover(e, cov, oracle::brute_qualifying_pairs(A, C), A);
         expect(cov.sumset_total <= cov.sumset_budget, "sumset total above budget");
       }},
      {"cover_gowers", 200,
       [](Env& e) {
         std::size_t n = e.pick(8, 64, 256);
         IndexedSet A(rarr(e.rng, n, 0, e.rng.range(1, 4), 10));
         auto C = random_targets(e.rng, A, 4);
         auto cov = bsg_cover_gowers(A, C, e.rng.range(1, 2), e.rng);
         check_cover(e, cov, oracle::brute_qualifying_pairs(A, C), A);
         expect(cov.sumset_max <= cov.sumset_budget, "subset sumset above budget");
       }},
      {"cover_popular_fast", 200,
       [](Env& e) {
         std::size_t n = e.pick(8, 64, 256), s = e.rng.range(1, 3), s_hat = e.rng.range(1, 3);
         std::uint64_t den = e.rng.range(2, 12);
         std::vector<ExtInt> v(n);
         for (auto& x : v) x = e.rng.coin(1, den) ? e.rng.range(0, 3) : 0;
         IndexedSet A(v);
         auto cov = bsg_cover_popular_fast(A, s, s_hat, e.rng);
         check_cover(e, cov, oracle::brute_popular_pairs(A, n / s), A);
         expect(cov.op_budget > 0 && cov.pair_checks <= cov.op_budget, "pair checks above budget");
         e.stats.hi("max_pair_checks", cov.pair_checks);
       }},
      {"extract_single", 200,
       [](Env& e) {
         std::size_t n = e.pick(2, 48, 128);
         auto A = rset(e.rng, n, 0, e.rng.range(n, 4 * n));
         std::vector<std::int64_t> C;
         for (auto x : A)
           for (auto y : A) C.push_back(x - y);
         std::sort(C.begin(), C.end());
         C.erase(std::unique(C.begin(), C.end()), C.end());
         std::size_t s = e.rng.range(1, 4);
         auto out = bsg_extract_single(A, C, s, e.rng);
         expect(!out.subset.empty(), "empty subset");
         for (auto a : out.subset)
           expect(std::binary_search(A.begin(), A.end(), a) && std::binary_search(A.begin(), A.end(), a - out.h),
                  "subset member without its shift in A");
         std::set<std::int64_t> d;
         for (auto x : out.subset)
           for (auto y : out.subset) d.insert(x - y);
         expect(d.size() == out.diff_size, "difference set size misreported");
         expect(out.diff_size <= out.budget, "difference set above budget");
         expect(2 * s * out.subset.size() >= A.size(), "subset too small");
         e.stats.hi("max_draws", out.draws);
       }},
      {"preprocessed_3sum_rand", 200,
       [](Env& e) {
         std::int64_t span = e.rng.range(8, 400);
         auto U = rset(e.rng, e.pick(1, 48, 256), -span, span), V = rset(e.rng, e.pick(1, 48, 256), -span, span);
         auto h = preprocessed_3sum_rand_build(U, V, e.rng);
         for (int q = 0; q < 3; ++q) {
           auto Ap = rsubset(e.rng, U), Bp = rsubset(e.rng, V);
           auto Cq = rset(e.rng, e.pick(1, 24, 256), -2 * span, 2 * span);
           auto got = preprocessed_3sum_rand_query(h, Ap, Bp, Cq, e.rng);
           auto ref = oracle::brute_3sum_counts(Ap, Bp, Cq);
           expect(got.size() == Cq.size(), "flag vector length");
           for (std::size_t i = 0; i < Cq.size(); ++i) expect(static_cast<bool>(got[i]) == (ref[i] > 0), "flag differs");
         }
         e.stats.add("covers_built", h.covers_built);
       }},
  };
}

// ----------------------------------------------------------------- gadgets

std::vector<CaseDef> gadgets_cases() {
  return {
      {"minwitness_gadget", 200,
       [](Env& e) {
         // the gadget's inner dimension x * y^2 stays within the oracle guard
         ExtInt y = e.rng.range(1, 4);
         std::size_t n = e.pick(1, 6), x = e.rng.range(1, std::min<std::size_t>(e.dim(4), 64 / (y * y)));
         Matrix A = rmat(e.rng, n, x, 1, y), B = rmat(e.rng, x, n, 1, y);
         auto g = minwitness_gadget(A, B, y);
         expect(same(g.decode(oracle::brute_min_witness(g.A, g.B)), minplus_naive(A, B)), "decode(solve) differs");
         expect(same(g.decode(min_witness_product(g.A, g.B)), minplus_naive(A, B)), "decode(fast solve) differs");
       }},
      {"apslp_gadget", 200,
       [](Env& e) {
         // the gadget needs x * y^2 <= n
         std::size_t x = e.rng.range(1, 2);
         ExtInt y = e.rng.range(1, 2);
         std::size_t n = e.rng.range(x * y * y, x * y * y + e.dim(4, 16));
         Matrix A = rmat(e.rng, n, x, 1, y), B = rmat(e.rng, x, n, 1, y);
         auto g = apslp_gadget(A, B, y);
         expect(g.G.n == ApslpGadget::node_count(n, x, y) && g.G.edges.size() == ApslpGadget::edge_count(n, x, y),
                "gadget size");
         Matrix hops(n, n), w(n, n);
         for (std::size_t i = 0; i < n; ++i) {
           auto d = oracle::brute_lex_shortest_path(g.G, g.s[i]);
           for (std::size_t j = 0; j < n; ++j) hops(i, j) = d[g.t[j]].hops, w(i, j) = d[g.t[j]].weight;
         }
         expect(same(g.decode(hops, w), minplus_naive(A, B)), "decode(solve) differs");
       }},
      {"range_mode_gadget", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 5), x = e.pick(1, 3);
         ExtInt y = e.rng.range(1, 4);
         Matrix A = rmat(e.rng, n, x, 1, y), B = rmat(e.rng, x, n, 1, y);
         auto g = range_mode_gadget(A, B, y);
         Matrix ref = minplus_naive(A, B);
         for (auto rule : {oracle::TieRule::Smallest, oracle::TieRule::Largest}) {
           std::vector<std::uint64_t> f;
           for (auto ans : oracle::brute_range_mode(g.S, g.queries, rule)) f.push_back(ans.freq);
           expect(same(g.decode(f), ref), "decode(solve) differs");
         }
       }},
      {"minwitness_to_minequal", 200,
       [](Env& e) {
         std::size_t n1 = e.pick(1, 8), n2 = e.pick(1, 8), n3 = e.pick(1, 8);
         const ExtInt m = std::max({n1, n2, n3});
         Matrix A = rmat(e.rng, n1, n2, 1, 2 * m, 10), B = rmat(e.rng, n2, n3, 1, 2 * m, 10);
         Matrix ref = filled(n1, n3, INF);
         for (std::size_t i = 0; i < n1; ++i)
           for (std::size_t j = 0; j < n3; ++j)
             for (std::size_t k = 0; k < n2 && ref(i, j) == INF; ++k)
               if (A(i, k) != INF && A(i, k) == B(k, j)) ref(i, j) = k;
         auto inst = minwitness_to_minequal(A, B);
         expect(same(inst.decode(oracle::brute_min_equality(inst.A, inst.B)), ref), "decode(solve) differs");
         expect(same(inst.decode(min_equality_product(inst.A, inst.B)), ref), "decode(fast solve) differs");
       }},
      {"minequalprod_to_conv", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 5);
         ExtInt top = std::min<ExtInt>(2 * static_cast<ExtInt>(n * n), e.rng.range(1, 6));
         Matrix A = rmat(e.rng, n, n, 1, top), B = rmat(e.rng, n, n, 1, top);
         auto inst = minequalprod_to_conv(A, B);
         expect(inst.a.size() == 2 * n * n, "instance length");
         Matrix ref = oracle::brute_min_equality(A, B);
         expect(same(inst.decode(oracle::brute_min_equal_conv(inst.a, inst.b)), ref), "decode(solve) differs");
         expect(same(inst.decode(min_equal_convolution(inst.a, inst.b)), ref), "decode(fast solve) differs");
       }},
      {"minplus_conv_via_minequal", 200,
       [](Env& e) {
         std::size_t n = e.pick(1, 16, 64);
         std::size_t s = std::size_t{1} << e.rng.range(0, 2), s_hat = e.rng.range(1, 2);
         std::size_t tmax = std::max<std::size_t>(1, isqrt_ceil(n) / isqrt_ceil(s));
         if (isqrt_ceil(s) > isqrt_ceil(n)) s = 1, tmax = isqrt_ceil(n);
         std::size_t t = e.rng.range(1, tmax);
         ExtInt V = e.rng.range(0, 3 * static_cast<ExtInt>(n));
         auto a = rarr(e.rng, n, 0, V), b = rarr(e.rng, n, 0, V);
         const MinEqualConvFn brute = [](const auto& x, const auto& y) { return oracle::brute_min_equal_conv(x, y); };
         auto r = minplus_conv_via_minequal(a, b, brute, {t, s, s_hat}, e.rng);
         expect(r.c == oracle::brute_minplus_conv(a, b), "min-plus convolution differs");
         e.stats.add("heavy_hits", r.heavy_hits);
         e.stats.add("oracle_calls", r.oracle_calls);
       }},
  };
}

std::vector<CaseDef> cases_of(const std::string& suite) {
  if (suite == "products") return products_cases();
  if (suite == "witnesses") return witnesses_cases();
  if (suite == "counting") return counting_cases();
  if (suite == "tridecomp") return tridecomp_cases();
  if (suite == "bsg") return bsg_cases();
  if (suite == "gadgets") return gadgets_cases();
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

std::uint64_t stream_of(const std::string& suite, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (char c : suite + "/" + name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  return h;
}

CaseResult execute(const std::string& suite, const CaseDef& def, std::uint64_t seed, Scale scale,
                   std::uint64_t instances) {
  CaseResult res;
  res.name = def.name;
  res.instances = instances ? instances : def.instances;
  const Rng base(seed, stream_of(suite, def.name));
  Stats stats;
  Counters total;
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < res.instances; ++i) {
    Rng rng = base.split(i);
    Env env{rng, scale, stats};
    reset_counters();
    try {
      def.body(env);
    } catch (const std::exception& ex) {
      if (res.failures++ == 0) res.first_failure = "instance " + std::to_string(i) + ": " + ex.what();
    }
    const Counters& c = counters();
    total.pair_checks += c.pair_checks;
    total.matmul_cells += c.matmul_cells;
    total.big_digit_ops += c.big_digit_ops;
    total.bool_word_ops += c.bool_word_ops;
    total.heavy_path += c.heavy_path;
    total.resamples += c.resamples;
  }
  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  res.metrics["counters"] = {{"pair_checks", total.pair_checks},     {"matmul_cells", total.matmul_cells},
                             {"big_digit_ops", total.big_digit_ops}, {"bool_word_ops", total.bool_word_ops},
                             {"heavy_path", total.heavy_path},       {"resamples", total.resamples}};
  for (const auto& [k, v] : stats.max) res.metrics[k] = v;
  for (const auto& [k, v] : stats.sum) res.metrics[k] = v;
  reset_counters();
  return res;
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"bsg", "counting", "gadgets", "products", "tridecomp", "witnesses"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& v = suite_names();
  return std::find(v.begin(), v.end(), name) != v.end();
}

bool parse_scale(const std::string& s, Scale& out) {
  if (s == "small") return out = Scale::Small, true;
  if (s == "medium") return out = Scale::Medium, true;
  return false;
}

const char* scale_name(Scale s) { return s == Scale::Small ? "small" : "medium"; }

std::vector<std::string> case_names(const std::string& suite) {
  std::vector<std::string> v;
  for (const auto& c : cases_of(suite)) v.push_back(c.name);
  return v;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, Scale scale) {
  SuiteResult r;
  r.suite = name;
  for (const auto& def : cases_of(name)) r.cases.push_back(execute(name, def, seed, scale, 0));
  return r;
}

CaseResult run_case(const std::string& suite, const std::string& name, std::uint64_t seed, Scale scale,
                    std::uint64_t instances) {
  for (const auto& def : cases_of(suite))
    if (def.name == name) return execute(suite, def, seed, scale, instances);
  throw std::invalid_argument("unknown case '" + name + "' in suite '" + suite + "'");
}

json report_json(const std::vector<SuiteResult>& results, std::uint64_t seed, Scale scale) {
  json j;
  j["kind"] = "verify";
  j["seed"] = seed;
  j["scale"] = scale_name(scale);
  json suites = json::array();
  json wall = json::object();
  double total_ms = 0;
  bool all = true;
  for (const auto& s : results) {
    json cases = json::array();
    for (const auto& c : s.cases) {
      json cj;
      cj["name"] = c.name;
      cj["instances"] = c.instances;
      cj["failures"] = c.failures;
      cj["pass"] = c.pass();
      if (!c.pass()) cj["first_failure"] = c.first_failure;
      cj["metrics"] = c.metrics;
      cases.push_back(cj);
      wall[s.suite + "/" + c.name] = std::llround(c.wall_ms);
      total_ms += c.wall_ms;
    }
    suites.push_back({{"suite", s.suite}, {"pass", s.pass()}, {"cases", cases}});
    all = all && s.pass();
  }
  j["suites"] = suites;
  j["pass"] = all;
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["timestamp"] = {{"utc", buf}, {"wall_ms_total", std::llround(total_ms)}, {"wall_ms", wall}};
  return j;
}

}  // namespace fmtk::suites
