#include <doctest.h>

#include "fmtk/oracles.hpp"

using namespace fmtk;
using namespace fmtk::oracle;

TEST_CASE("oracle examples") {
  CHECK(brute_minplus(make_matrix({{0, 2}, {1, 3}}), make_matrix({{1, 0}, {0, 5}})) == make_matrix({{1, 0}, {2, 1}}));
  CHECK(brute_minplus(make_matrix({{INF, 1}}), make_matrix({{5}, {2}})) == make_matrix({{3}}));
  CHECK(brute_3sum_counts({1, 2}, {3, 4}, {5}) == std::vector<std::uint64_t>{2});
  auto single = brute_apsp_count(make_matrix({{INF, 4}, {INF, INF}}));
  CHECK(single.count(0, 1) == 1);
  CHECK(single.dist(0, 1) == 4);
  CHECK(single.count(1, 0) == 0);
  CHECK(single.dist(1, 0) == INF);
  CHECK(single.count(0, 0) == 1);
}

TEST_CASE("product oracles on small cases") {
  CHECK(brute_dominance(make_matrix({{1, 4}}), make_matrix({{2}, {3}}))(0, 0) == 1);
  CHECK(brute_equality(make_matrix({{1, 2, 2}}), make_matrix({{2}, {2}, {3}}))(0, 0) == 1);
  CHECK(brute_equality(make_matrix({{INF}}), make_matrix({{INF}}))(0, 0) == 0);
  CHECK(brute_gen_equality(make_matrix({{1, 1}}), make_matrix({{5, 2}}), make_matrix({{1}, {1}}),
                           make_matrix({{0}, {10}})) == make_matrix({{5}}));
  auto A = BoolMatrix::from({{0, 1}, {1, 1}});
  auto B = BoolMatrix::from({{1, 0}, {1, 1}});
  CHECK(brute_min_witness(A, B) == make_matrix({{1, 1}, {0, 1}}));
  CHECK(brute_min_equality(make_matrix({{3, 1}}), make_matrix({{3}, {2}})) == make_matrix({{3}}));
}

TEST_CASE("convolution oracles") {
  CHECK(brute_min_equal_conv({1, 2, 3}, {9, 1, 2}) == std::vector<ExtInt>{INF, INF, 1});
  CHECK(brute_min_equal_conv({5}, {5}) == std::vector<ExtInt>{INF});
  CHECK(brute_minplus_conv({1, 2}, {3, 4}) == std::vector<ExtInt>{INF, 4});
  CHECK(brute_3sum_conv_counts({0, 0}, {0, 0}, {0, 0})[1] == 1);
  auto w = brute_3sum_conv_counts({0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0});
  CHECK(w == std::vector<std::uint64_t>{0, 1, 2, 3});
}

TEST_CASE("triangle oracles agree with each other") {
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    std::size_t n1 = rng.range(1, 6), n2 = rng.range(1, 6), n3 = rng.range(1, 6);
    auto rnd = [&](std::size_t r, std::size_t c) {
      Matrix M(r, c);
      for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = rng.coin(1, 8) ? INF : rng.range(-3, 3);
      return M;
    };
    TripartiteGraph G(rnd(n1, n2), rnd(n2, n3), rnd(n1, n3));
    auto list = brute_zero_triangle_list(G, 0);
    auto D = brute_exact_tri_counts(G, 0);
    CHECK(D.sum() == list.size());
    CountMatrix neg = CountMatrix::Zero(n1, n3);
    for (ExtInt target = -9; target < 0; ++target) neg += brute_exact_tri_counts(G, target);
    CHECK(neg == brute_negative_triangle_counts(G));
  }
}

TEST_CASE("apsp oracle path counts") {
  Matrix W = filled(3, 3, INF);
  W(0, 1) = 1, W(1, 2) = 1, W(0, 2) = 2;
  auto r = brute_apsp_count(W);
  CHECK(r.dist(0, 2) == 2);
  CHECK(r.count(0, 2) == 2);
}

TEST_CASE("range mode and lexicographic paths") {
  std::vector<std::int64_t> S{1, 2, 2, 1, 3};
  auto sm = brute_range_mode(S, {{0, 4}, {4, 5}, {2, 2}}, TieRule::Smallest);
  auto lg = brute_range_mode(S, {{0, 4}}, TieRule::Largest);
  CHECK(sm[0].symbol == 1);
  CHECK(sm[0].freq == 2);
  CHECK(lg[0].symbol == 2);
  CHECK(sm[1].symbol == 3);
  CHECK(sm[2].freq == 0);
  UGraph G{4, {{0, 1, 5}, {1, 3, 5}, {0, 2, 1}, {2, 1, 1}}};
  auto d = brute_lex_shortest_path(G, 0);
  CHECK(d[3].hops == 2);
  CHECK(d[3].weight == 10);
  CHECK(d[1].hops == 1);
  CHECK(d[1].weight == 5);
}

TEST_CASE("popularity and cover oracles") {
  IndexedSet A({0, 0}, 1);
  CHECK(brute_popularity(A, 1, 0) == 1);
  CHECK(brute_popularity(A, 0, 0) == 2);
  CHECK(brute_popularity(A, 5, 0) == 0);
  IndexedSet C({0, 0, 0}, -1);
  auto pairs = brute_qualifying_pairs(A, C);
  CHECK(pairs.size() == 4);
  CHECK(brute_cover_check({{1, 2}}, {}, pairs) == std::nullopt);
  CHECK(brute_cover_check({{1}}, {{2, 2}}, pairs).has_value());
  CHECK(brute_popular_pairs(A, 1).size() == 2);
}

TEST_CASE("clique oracle") {
  Matrix W = filled(4, 4, 1);
  CHECK(brute_k_clique_count(W, 6, 4) == 1);
  CHECK(brute_k_clique_count(W, 3, 3) == 4);
  CHECK(brute_k_clique_count(W, 7, 4) == 0);
}

TEST_CASE("size guards") {
  CHECK_THROWS_AS(brute_minplus(filled(65, 1, 0), filled(1, 1, 0)), std::length_error);
  CHECK_THROWS_AS(brute_3sum_counts(std::vector<std::int64_t>(1025, 0), {}, {}), std::length_error);
}
