#include <doctest.h>

#include "fmtk/oracles.hpp"
#include "fmtk/products.hpp"
#include "fmtk/witnesses.hpp"
#include "support.hpp"

#include <cmath>

using namespace fmtk;
using namespace fmtk::testing;

TEST_CASE("unique witness examples") {
  CHECK(unique_witness_matrix(make_matrix({{0, 0}}), make_matrix({{0}, {1}}))(0, 0) == 0);
  CHECK(unique_witness_matrix(make_matrix({{4}}), make_matrix({{2}}))(0, 0) == 0);
  auto k = unique_witness_matrix(make_matrix({{0, 0}}), make_matrix({{0}, {0}}))(0, 0);
  CHECK((k == NOT_UNIQUE || k == 0 || k == 1));
  CHECK(unique_witness_matrix(make_matrix({{INF}}), make_matrix({{0}}))(0, 0) == NO_WITNESS);
}

TEST_CASE("unique witness soundness") {
  Rng rng(31);
  for (int t = 0; t < 500; ++t) {
    std::size_t n1 = rng.range(1, 8), n2 = rng.range(1, 12), n3 = rng.range(1, 8);
    Matrix A = random_matrix(rng, n1, n2, 0, 6, 10), B = random_matrix(rng, n2, n3, 0, 6, 10);
    auto K = unique_witness_matrix(A, B);
    auto W = oracle::brute_witness_sets(A, B);
    Matrix C = oracle::brute_minplus(A, B);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j) {
        if (C(i, j) == INF) {
          REQUIRE(K(i, j) == NO_WITNESS);
        } else if (K(i, j) >= 0) {
          REQUIRE(add(A(i, K(i, j)), B(K(i, j), j)) == C(i, j));
        } else {
          REQUIRE(K(i, j) == NOT_UNIQUE);
          REQUIRE(W(i, j).size() > 1);
        }
        if (W(i, j).size() == 1) REQUIRE(K(i, j) == static_cast<std::int64_t>(W(i, j)[0]));
      }
  }
}

TEST_CASE("capped listing examples") {
  Rng rng(1);
  auto r1 = list_witnesses_capped(make_matrix({{0, 0, 0}}), make_matrix({{0}, {0}, {1}}), 2, rng);
  CHECK(r1.lists(0, 0) == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(r1.truncated(0, 0));
  auto r2 = list_witnesses_capped(make_matrix({{0, 0, 0}}), make_matrix({{0}, {0}, {0}}), 1, rng);
  CHECK(r2.truncated(0, 0));
  REQUIRE(r2.lists(0, 0).size() == 1);
  CHECK(r2.lists(0, 0)[0] < 3);
  Matrix A = random_matrix(rng, 5, 7, 0, 2), B = random_matrix(rng, 7, 5, 0, 2);
  auto r3 = list_witnesses_capped(A, B, 7, rng);
  auto W = oracle::brute_witness_sets(A, B);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(r3.lists(i, j) == W(i, j));
}

TEST_CASE("capped listing soundness and completeness") {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    std::size_t n1 = rng.range(1, 12), n2 = rng.range(1, 12), n3 = rng.range(1, 12);
    ExtInt hi = rng.range(0, 4);
    Matrix A = random_matrix(rng, n1, n2, 0, hi, 10), B = random_matrix(rng, n2, n3, 0, hi, 10);
    std::size_t cap = t % 2 ? n2 : static_cast<std::size_t>(rng.range(1, n2));
    Rng local = rng.split(t);
    auto rep = list_witnesses_capped(A, B, cap, local);
    auto W = oracle::brute_witness_sets(A, B);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j) {
        auto& l = rep.lists(i, j);
        for (auto k : l) REQUIRE(add(A(i, k), B(k, j)) == rep.C(i, j));
        if (W(i, j).size() <= cap) {
          REQUIRE(l == W(i, j));
          REQUIRE_FALSE(rep.truncated(i, j));
        } else {
          REQUIRE(rep.truncated(i, j));
          REQUIRE(l.size() == cap);
        }
      }
  }
}

TEST_CASE("greedy hitting set examples") {
  CHECK(greedy_hitting_set({{1, 2}, {2, 3}}) == std::vector<std::size_t>{2});
  CHECK(greedy_hitting_set({{1}}) == std::vector<std::size_t>{1});
  CHECK(greedy_hitting_set({{1}, {2}}) == std::vector<std::size_t>{1, 2});
  CHECK(greedy_hitting_set({{0, 1}, {0, 1}}) == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(greedy_hitting_set({{1}, {}}), std::invalid_argument);
}

TEST_CASE("greedy hitting set size bound") {
  Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = rng.range(4, 200), s = rng.range(1, 8), m = rng.range(1, 300);
    std::size_t minsz = ceil_div(n, s);
    std::vector<std::vector<std::size_t>> sets(m);
    for (auto& st : sets) st = rng.sample(n, rng.range(minsz, n));
    auto H = greedy_hitting_set(sets);
    for (auto& st : sets) {
      bool hit = false;
      for (auto x : st) hit |= std::binary_search(H.begin(), H.end(), x);
      REQUIRE(hit);
    }
    REQUIRE(H.size() <= static_cast<std::size_t>(std::ceil(s * std::log(m + 1.0))) + 1);
  }
}
