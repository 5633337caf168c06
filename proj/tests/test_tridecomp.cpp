#include <doctest.h>

#include "fmtk/oracles.hpp"
#include "fmtk/products.hpp"
#include "fmtk/tridecomp.hpp"
#include "support.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace fmtk;
using namespace fmtk::testing;

namespace {

TripartiteGraph random_graph(Rng& rng, std::size_t n1, std::size_t n2, std::size_t n3, ExtInt lo, ExtInt hi,
                             unsigned inf_pct = 0) {
  return TripartiteGraph(random_matrix(rng, n1, n2, lo, hi, inf_pct), random_matrix(rng, n2, n3, lo, hi, inf_pct),
                         random_matrix(rng, n1, n3, lo, hi, inf_pct));
}

// Every triangle of D with multiplicity, checked against the brute list.
void check_invariants(const TripartiteGraph& G, ExtInt t, const TriangleDecomposition& D) {
  const double n1 = G.n1(), n2 = G.n2(), n3 = G.n3();
  std::map<Triangle, int> seen;
  for (const auto& tri : D.remainder) ++seen[tri];
  for (const auto& cat : D.categories)
    for (std::size_t p = 0; p < cat.subgraphs.size(); ++p)
      for (const auto& tri : subgraph_triangles(cat, p)) {
        REQUIRE(G.has(tri[0], tri[1], tri[2]));
        REQUIRE(G.weight(tri[0], tri[1], tri[2]) == t);  // purity
        ++seen[tri];
      }
  auto ref = oracle::brute_zero_triangle_list(G, t);
  REQUIRE(seen.size() == ref.size());
  for (const auto& tri : ref) {
    auto it = seen.find({tri[0], tri[1], tri[2]});
    REQUIRE(it != seen.end());
    REQUIRE(it->second == 1);
  }
  const double s = D.s, lnN = std::log(n1 * n3);
  CHECK(D.remainder.size() <= (2 + lnN) * n1 * n2 * n3 / s + 1e-9);
  CHECK(D.subgraph_count() <= (std::ceil(s * lnN) + 1) * s * s);
  CHECK(D.r == D.s * D.s);
  // category exclusivity
  BoolMatrix owned(G.n1(), G.n3());
  for (const auto& cat : D.categories) {
    CHECK(cat.subgraphs.size() <= D.r);
    for (std::size_t i = 0; i < G.n1(); ++i)
      for (std::size_t j = 0; j < G.n3(); ++j)
        if (cat.uv.get(i, j)) {
          REQUIRE_FALSE(owned.get(i, j));
          owned.set(i, j);
        }
  }
}

BigNat random_big(Rng& rng, unsigned bits) {
  BigNat v = 0;
  for (unsigned b = 0; b < bits; b += 32) v = (v << 32) | BigNat(rng.next() & 0xffffffffu);
  return v >> (rng.below(bits) + 1);
}

}  // namespace

TEST_CASE("decomposition examples") {
  TripartiteGraph none(make_matrix({{1, 2}, {3, 4}}), make_matrix({{1, 1}, {1, 1}}), make_matrix({{0, 0}, {0, 0}}));
  for (std::size_t s : {1, 2}) {
    auto D = triangle_decomposition(none, 0, s);
    CHECK(D.remainder.empty());
    for (const auto& cat : D.categories)
      for (std::size_t p = 0; p < cat.subgraphs.size(); ++p) CHECK(subgraph_triangles(cat, p).empty());
  }
  TripartiteGraph one(make_matrix({{1}}), make_matrix({{2}}), make_matrix({{-3}}));
  auto D = triangle_decomposition(one, 0, 1);
  check_invariants(one, 0, D);
  CHECK_THROWS_AS(triangle_decomposition(one, 0, 2), std::invalid_argument);
}

TEST_CASE("decomposition on random 8x8x8 graphs") {
  Rng rng(51);
  for (std::size_t s : {1, 2, 4})
    for (int rep = 0; rep < 5; ++rep) {
      auto G = random_graph(rng, 8, 8, 8, -6, 6);
      check_invariants(G, 0, triangle_decomposition(G, 0, s));
    }
  // dense in zero triangles so the hitting-set branch is exercised
  for (std::size_t s : {2, 4}) {
    auto G = random_graph(rng, 8, 8, 8, 0, 1);
    for (Eigen::Index e = 0; e < G.uv.size(); ++e) G.uv.data()[e] = -1;
    auto D = triangle_decomposition(G, 0, s);
    CHECK_FALSE(D.H.empty());
    std::size_t in_sub = 0;
    for (const auto& cat : D.categories)
      for (std::size_t p = 0; p < cat.subgraphs.size(); ++p) in_sub += subgraph_triangles(cat, p).size();
    CHECK(in_sub > 0);
    check_invariants(G, 0, D);
  }
}

TEST_CASE("decomposition invariants on 200 random graphs") {
  Rng rng(52);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n2 = rng.range(4, 12);
    ExtInt w = rng.range(1, 12);
    auto G = random_graph(rng, rng.range(1, 12), n2, rng.range(1, 12), rep % 2 ? 0 : -w, w, rep % 3 ? 0 : 10);
    ExtInt t = rng.range(-2, 2);
    std::size_t s = rng.range(1, 4);
    check_invariants(G, t, triangle_decomposition(G, t, s));
  }
}

TEST_CASE("uv update equals a fresh build") {
  TripartiteGraph one(make_matrix({{1}}), make_matrix({{2}}), make_matrix({{-3}}));
  auto D = triangle_decomposition(one, 0, 1);
  REQUIRE(D.remainder.size() == 1);
  TripartiteGraph killed = one;
  killed.uv(0, 0) = 5;
  auto U = decomposition_update_uv(D, killed);
  CHECK(U.remainder.empty());
  CHECK(U.subgraph_count() == 0);

  Rng rng(53);
  auto G = random_graph(rng, 8, 8, 8, 0, 2);
  auto base = triangle_decomposition(G, 0, 2);
  TripartiteGraph H = G;
  H.uv(3, 4) = -(G.ux(3, 0) + G.xv(0, 4));
  CHECK(decomposition_update_uv(base, H) == triangle_decomposition(H, 0, 2));

  auto prev = base;
  for (int rep = 0; rep < 20; ++rep) {
    TripartiteGraph P = G;
    for (int e = 0; e < 6; ++e) P.uv(rng.below(8), rng.below(8)) = -rng.range(0, 4);
    auto fresh = triangle_decomposition(P, 0, 2);
    CHECK(decomposition_update_uv(base, P) == fresh);
    CHECK(decomposition_update_uv(prev, P) == fresh);
    prev = fresh;
  }
  auto T = decomposition_update_uv(base, G, 1);
  CHECK(T == triangle_decomposition(G, 1, 2));

  TripartiteGraph bad = G;
  bad.ux(0, 0) += 1;
  CHECK_THROWS_AS(decomposition_update_uv(base, bad), std::invalid_argument);
  bad = G;
  bad.xv(1, 1) += 1;
  CHECK_THROWS_AS(decomposition_update_uv(base, bad), std::invalid_argument);
}

TEST_CASE("preprocessed exact triangle queries") {
  TripartiteGraph one(make_matrix({{1, 5}}), make_matrix({{2}, {9}}), make_matrix({{-3}}));
  auto h = preprocessed_exact_tri_build(one, 1);
  auto full = full_mask(one);
  auto q = preprocessed_exact_tri_query(h, full, 0);
  CHECK(q.get(0, 0));
  TriMask empty{BoolMatrix(1, 2), BoolMatrix(2, 1), BoolMatrix(1, 1)};
  CHECK(preprocessed_exact_tri_query(h, empty, 0).count() == 0);
  CHECK_THROWS_AS(preprocessed_exact_tri_query(h, TriMask{BoolMatrix(2, 2), BoolMatrix(2, 1), BoolMatrix(1, 1)}, 0),
                  std::invalid_argument);

  Rng rng(54);
  for (int g = 0; g < 5; ++g) {
    auto G = random_graph(rng, 8, 8, 8, -2, 2, 10);
    auto handle = preprocessed_exact_tri_build(G, 2);
    for (int rep = 0; rep < 10; ++rep) {
      TriMask m = full_mask(G);
      TripartiteGraph Gm = G;
      auto thin = [&](BoolMatrix& b, Matrix& w) {
        for (std::size_t i = 0; i < b.rows(); ++i)
          for (std::size_t j = 0; j < b.cols(); ++j)
            if (rng.coin(1, 3)) b.set(i, j, false), w(i, j) = INF;
      };
      thin(m.ux, Gm.ux);
      thin(m.xv, Gm.xv);
      thin(m.uv, Gm.uv);
      ExtInt t = rng.range(-1, 1);
      auto ref = oracle::brute_exact_tri_counts(Gm, t);
      auto cnt = preprocessed_exact_tri_count(handle, m, t);
      auto flags = preprocessed_exact_tri_query(handle, m, t);
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
          REQUIRE(cnt(i, j) == ref(i, j));
          REQUIRE(flags.get(i, j) == (ref(i, j) > 0));
        }
    }
  }
}

TEST_CASE("preprocessed 3SUM queries") {
  auto h = preprocessed_3sum_build({1, 2}, {3, 4}, {5, 6});
  CHECK(preprocessed_3sum_query(h, {1, 2}, {3}, {5, 6}) == std::vector<std::uint64_t>{1, 0});
  CHECK(preprocessed_3sum_query(h, {}, {3, 4}, {5, 6}) == std::vector<std::uint64_t>{0, 0});
  CHECK(preprocessed_3sum_query(h, {1, 2}, {3, 4}, {5, 6}) == std::vector<std::uint64_t>{2, 1});
  CHECK_THROWS_AS(preprocessed_3sum_query(h, {7}, {3}, {5}), std::invalid_argument);

  Rng rng(55);
  auto A = random_set(rng, 64, -300, 300), B = random_set(rng, 64, -300, 300);
  // about 56 attainable sums and a few random values
  auto S = oracle::brute_sumset(A, B);
  rng.shuffle(S);
  std::vector<std::int64_t> C(S.begin(), S.begin() + std::min<std::size_t>(56, S.size()));
  for (int i = 0; i < 8; ++i) C.push_back(rng.range(-700, 700));
  std::sort(C.begin(), C.end());
  C.erase(std::unique(C.begin(), C.end()), C.end());
  auto subset = [&](const std::vector<std::int64_t>& U) {
    std::vector<std::int64_t> v;
    for (auto x : U)
      if (rng.coin(1, 2)) v.push_back(x);
    return v;
  };
  for (std::size_t q : {std::size_t{0}, std::size_t{3}}) {
    auto handle = preprocessed_3sum_build(A, B, C, 2, q);
    for (int rep = 0; rep < 10; ++rep) {
      auto Ap = subset(A), Bp = subset(B), Cp = subset(C);
      CHECK(preprocessed_3sum_query(handle, Ap, Bp, Cp) == oracle::brute_3sum_counts(Ap, Bp, Cp));
    }
  }
}

TEST_CASE("funny product") {
  BigMatrix Ap(1, 2), Bp(2, 1);
  Ap(0, 0) = 2, Ap(0, 1) = 3, Bp(0, 0) = 5, Bp(1, 0) = 7;
  auto f = funny_product(make_matrix({{0, 0}}), Ap, make_matrix({{0}, {0}}), Bp);
  CHECK(f.C(0, 0) == 0);
  CHECK(f.Cp(0, 0) == 31);

  Rng rng(56);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix A = random_matrix(rng, 6, 6, 0, 3, 10), B = random_matrix(rng, 6, 6, 0, 3, 10);
    BigMatrix ones(6, 6, BigNat(1));
    auto g = funny_product(A, ones, B, ones, 2);
    auto counts = oracle::brute_minplus_witness_counts(A, B);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) REQUIRE(g.Cp(i, j) == counts(i, j));
  }
  for (unsigned bits : {128u, 256u})
    for (int rep = 0; rep < 10; ++rep) {
      Matrix A = random_matrix(rng, 6, 6, -2, 2, 10), B = random_matrix(rng, 6, 6, -2, 2, 10);
      BigMatrix X(6, 6), Y(6, 6);
      for (auto& v : X.data) v = random_big(rng, bits);
      for (auto& v : Y.data) v = random_big(rng, bits);
      auto g = funny_product(A, X, B, Y, rng.range(1, 3));
      Matrix C = oracle::brute_minplus(A, B);
      REQUIRE(g.C == C);
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
          BigNat want = 0;
          for (std::size_t k = 0; k < 6; ++k)
            if (C(i, j) != INF && A(i, k) != INF && B(k, j) != INF && A(i, k) + B(k, j) == C(i, j))
              want += X(i, k) * Y(k, j);
          REQUIRE(g.Cp(i, j) == want);
        }
    }
}

TEST_CASE("shortest path counts") {
  Matrix W = filled(3, 3, INF);
  W(0, 1) = 1, W(1, 2) = 1, W(0, 2) = 2;
  auto r = apsp_count(W);
  CHECK(r.dist(0, 2) == 2);
  CHECK(r.count(0, 2) == 2);
  Matrix E = filled(2, 2, INF);
  E(0, 1) = 4;
  auto e = apsp_count(E);
  CHECK(e.count(0, 1) == 1);
  CHECK(e.dist(1, 0) == INF);
  CHECK(e.count(1, 0) == 0);
  Matrix bad = filled(2, 2, INF);
  bad(0, 1) = 0;
  CHECK_THROWS_AS(apsp_count(bad), std::invalid_argument);

  Rng rng(57);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix G = random_matrix(rng, 12, 12, 1, rep % 2 ? 8 : 2, 40);
    auto got = apsp_count(G);
    auto ref = oracle::brute_apsp_count(G);
    for (std::size_t u = 0; u < 12; ++u)
      for (std::size_t v = 0; v < 12; ++v) {
        REQUIRE(got.dist(u, v) == ref.dist(u, v));
        REQUIRE(got.count(u, v) == ref.count(u, v));
        if (ref.dist(u, v) == INF) REQUIRE(got.count(u, v) == 0);
      }
  }
}

TEST_CASE("bounded-difference min-plus") {
  Matrix K = filled(5, 5, 3);
  Matrix C = minplus_bounded_difference(K, K, 0, 2, 1);
  CHECK(C == filled(5, 5, 6));

  Rng rng(58);
  auto walk = [&](std::size_t r, std::size_t c, ExtInt c0, bool by_row) {
    Matrix M(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        bool first = by_row ? j == 0 : i == 0;
        M(i, j) = first ? rng.range(-20, 20) : (by_row ? M(i, j - 1) : M(i - 1, j)) + rng.range(-c0, c0);
      }
    return M;
  };
  for (int rep = 0; rep < 3; ++rep) {
    Matrix A = walk(16, 16, 1, true), B = walk(16, 16, 1, false);
    CHECK(minplus_bounded_difference(A, B, 1, 2, 2) == minplus_naive(A, B));
  }
  Matrix A = walk(32, 32, 2, true), B = walk(32, 32, 2, false);
  Matrix ref = minplus_naive(A, B);
  for (std::size_t ell : {2, 4})
    for (std::size_t s : {2, 4}) CHECK(minplus_bounded_difference(A, B, 2, ell, s) == ref);

  Matrix V = A;
  V(3, 7) = V(3, 6) + 9;
  CHECK_THROWS_AS(minplus_bounded_difference(V, B, 2, 2, 2), std::invalid_argument);
}
