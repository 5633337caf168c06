#include <doctest.h>

#include "fmtk/oracles.hpp"
#include "fmtk/products.hpp"
#include "support.hpp"

using namespace fmtk;
using namespace fmtk::testing;

TEST_CASE("minplus examples") {
  Matrix A = make_matrix({{0, 2}, {1, 3}}), B = make_matrix({{1, 0}, {0, 5}});
  Matrix expect = make_matrix({{1, 0}, {2, 1}});
  CHECK(minplus_naive(A, B) == expect);
  CHECK(minplus_bounded(A, B, 5) == expect);
  CHECK(minplus_naive(make_matrix({{0}}), make_matrix({{0}})) == make_matrix({{0}}));
  CHECK(minplus_bounded(make_matrix({{0}}), make_matrix({{0}}), 0) == make_matrix({{0}}));
  CHECK(minplus_naive(make_matrix({{INF, 1}}), make_matrix({{5}, {2}})) == make_matrix({{3}}));
  CHECK(minplus_bounded(make_matrix({{INF, 1}}), make_matrix({{5}, {2}}), 5) == make_matrix({{3}}));
  CHECK_THROWS_AS(minplus_naive(A, make_matrix({{1}})), std::invalid_argument);
  CHECK_THROWS_AS(minplus_bounded(A, B, 4), std::invalid_argument);
}

TEST_CASE("minplus bounded equals naive on random instances") {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    std::size_t n1 = rng.range(1, 32), n2 = rng.range(1, 32), n3 = rng.range(1, 32);
    ExtInt M = rng.range(0, 32);
    Matrix A = random_matrix(rng, n1, n2, 0, M, 10), B = random_matrix(rng, n2, n3, 0, M, 10);
    REQUIRE(minplus_bounded(A, B, M) == oracle::brute_minplus(A, B));
  }
}

TEST_CASE("dominance and equality examples") {
  CHECK(dominance_product(make_matrix({{1, 4}}), make_matrix({{2}, {3}}), {1})(0, 0) == 1);
  CHECK(dominance_product(make_matrix({{0}}), make_matrix({{0}}), {1})(0, 0) == 1);
  CHECK(dominance_product(make_matrix({{5}}), make_matrix({{0}}), {1})(0, 0) == 0);
  CHECK(equality_product(make_matrix({{1, 2, 2}}), make_matrix({{2}, {2}, {3}}), {1})(0, 0) == 1);
  CHECK(equality_product(make_matrix({{7}}), make_matrix({{7}}), {1})(0, 0) == 1);
  CHECK(equality_product(make_matrix({{1, 2}}), make_matrix({{3}, {4}}), {1})(0, 0) == 0);
  CHECK(equality_product(make_matrix({{INF}}), make_matrix({{INF}}), {1})(0, 0) == 0);
  CHECK_THROWS_AS(dominance_product(make_matrix({{INF}}), make_matrix({{0}}), {1}), std::invalid_argument);
}

TEST_CASE("generalized equality examples") {
  CHECK(generalized_equality_product(make_matrix({{1, 1}}), make_matrix({{5, 2}}), make_matrix({{1}, {1}}),
                                     make_matrix({{0}, {10}}), {1}, 10) == make_matrix({{5}}));
  CHECK(generalized_equality_product(make_matrix({{1}}), make_matrix({{3}}), make_matrix({{2}}), make_matrix({{4}}),
                                     {1}, 10) == make_matrix({{INF}}));
  CHECK_THROWS_AS(generalized_equality_product(make_matrix({{1}}), make_matrix({{11}}), make_matrix({{1}}),
                                               make_matrix({{0}}), {1}, 10),
                  std::invalid_argument);
  Rng rng(6);
  Matrix A = random_matrix(rng, 6, 6, 0, 3), B = random_matrix(rng, 6, 6, 0, 3);
  Matrix Ap = random_matrix(rng, 6, 6, -8, 8, 10), Bp = random_matrix(rng, 6, 6, -8, 8, 10);
  Matrix expect = oracle::brute_gen_equality(A, Ap, B, Bp);
  for (std::size_t r = 1; r <= 6; ++r) CHECK(generalized_equality_product(A, Ap, B, Bp, {r}, 8) == expect);
}

TEST_CASE("frequency-split products are r-invariant and match brute force") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::size_t n1 = rng.range(1, 12), n2 = rng.range(1, 12), n3 = rng.range(1, 12);
    ExtInt hi = rng.range(0, 40);
    Matrix A = random_matrix(rng, n1, n2, 0, hi), B = random_matrix(rng, n2, n3, 0, hi);
    auto dom = oracle::brute_dominance(A, B);
    Matrix Ae = random_matrix(rng, n1, n2, 0, std::min<ExtInt>(hi, 4), 5);
    Matrix Be = random_matrix(rng, n2, n3, 0, std::min<ExtInt>(hi, 4), 5);
    auto eq = oracle::brute_equality(Ae, Be);
    ExtInt ell = rng.range(0, 40);
    Matrix Ap = random_matrix(rng, n1, n2, -ell, ell, 10), Bp = random_matrix(rng, n2, n3, -ell, ell, 10);
    auto geq = oracle::brute_gen_equality(Ae, Ap, Be, Bp);
    for (std::size_t r = 1; r <= n2 + 1; ++r) {
      REQUIRE(dominance_product(A, B, {r}) == dom);
      REQUIRE(equality_product(Ae, Be, {r}) == eq);
      REQUIRE(generalized_equality_product(Ae, Ap, Be, Bp, {r}, ell) == geq);
    }
    REQUIRE(dominance_product_naive(A, B) == dom);
  }
}

TEST_CASE("dominance product with ties across buckets") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    std::size_t n = rng.range(2, 40);
    Matrix A = random_matrix(rng, n, n, 0, 2), B = random_matrix(rng, n, n, 0, 2);
    auto expect = oracle::brute_dominance(A, B);
    for (std::size_t r : {1ul, 2ul, 3ul, 7ul, n})
      REQUIRE(dominance_product(A, B, {r}) == expect);
  }
}

TEST_CASE("witness and equality brute products") {
  auto A = BoolMatrix::from({{0, 1}, {1, 1}});
  auto B = BoolMatrix::from({{1, 0}, {1, 1}});
  CHECK(min_witness_product(A, B) == make_matrix({{1, 1}, {0, 1}}));
  CHECK(min_witness_product(BoolMatrix::from({{1}}), BoolMatrix::from({{1}})) == make_matrix({{0}}));
  CHECK(min_witness_product(BoolMatrix::from({{0}}), BoolMatrix::from({{1}})) == make_matrix({{INF}}));
  CHECK(min_equality_product(make_matrix({{3, 1}}), make_matrix({{1}, {1}})) == make_matrix({{1}}));
  CHECK(min_equality_product(make_matrix({{3, 1}}), make_matrix({{3}, {2}})) == make_matrix({{3}}));
  CHECK(min_equality_product(make_matrix({{3}}), make_matrix({{4}})) == make_matrix({{INF}}));
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    std::size_t n1 = rng.range(1, 70), n2 = rng.range(1, 64), n3 = rng.range(1, 10);
    BoolMatrix X(n1, n2), Y(n2, n3);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t k = 0; k < n2; ++k) X.set(i, k, rng.coin(1, 6));
    for (std::size_t k = 0; k < n2; ++k)
      for (std::size_t j = 0; j < n3; ++j) Y.set(k, j, rng.coin(1, 6));
    if (n1 <= 64) REQUIRE(min_witness_product(X, Y) == oracle::brute_min_witness(X, Y));
    Matrix P = random_matrix(rng, std::min<std::size_t>(n1, 64), n2, 0, 5, 10), Q = random_matrix(rng, n2, n3, 0, 5, 10);
    REQUIRE(min_equality_product(P, Q) == oracle::brute_min_equality(P, Q));
  }
}

TEST_CASE("convolution examples") {
  CHECK(min_equal_convolution({1, 2, 3}, {9, 1, 2}) == std::vector<ExtInt>{INF, INF, 1});
  CHECK(min_equal_convolution({1, 2, 3}, {4, 5, 6}) == std::vector<ExtInt>{INF, INF, INF});
  CHECK(min_equal_convolution({5}, {5}) == std::vector<ExtInt>{INF});
  CHECK(minplus_convolution_naive({1, 2}, {3, 4}) == std::vector<ExtInt>{INF, 4});
  CHECK(minplus_convolution_naive({0}, {0}) == std::vector<ExtInt>{INF});
  CHECK(threesum_convolution_counts({0, 0}, {0, 0}, {0, 0})[1] == 1);
  CHECK_THROWS_AS(minplus_convolution_naive({1}, {1, 2}), std::invalid_argument);
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = rng.range(1, 64);
    auto a = random_array(rng, n, -5, 5, 10), b = random_array(rng, n, -5, 5, 10), c = random_array(rng, n, -8, 8, 10);
    REQUIRE(minplus_convolution_naive(a, b) == oracle::brute_minplus_conv(a, b));
    REQUIRE(min_equal_convolution(a, b) == oracle::brute_min_equal_conv(a, b));
    REQUIRE(threesum_convolution_counts(a, b, c) == oracle::brute_3sum_conv_counts(a, b, c));
  }
}

TEST_CASE("sumset examples and fft path") {
  Rng rng(1);
  CHECK(sumset({1, 2}, {10, 20}, rng) == std::vector<std::int64_t>{11, 12, 21, 22});
  CHECK(sumset({1, 2}, {10, 20}, rng, {0, true}) == std::vector<std::int64_t>{11, 12, 21, 22});
  CHECK(sumset({3, -4, 9}, {0}, rng, {0, true}) == std::vector<std::int64_t>{-4, 3, 9});
  CHECK(sumset({5}, {7}, rng, {0, true}) == std::vector<std::int64_t>{12});
  CHECK(sumset({}, {7}, rng).empty());
  CHECK_THROWS_AS(sumset({INF - 1}, {7}, rng), OverflowError);
  for (int t = 0; t < 60; ++t) {
    auto A = random_set(rng, rng.range(1, 96), -5000, 20000), B = random_set(rng, rng.range(1, 96), 0, 20000);
    REQUIRE(sumset(A, B, rng, {0, true}) == oracle::brute_sumset(A, B));
  }
  // structured sets: progressions collide heavily in every residue class
  std::vector<std::int64_t> P, Q;
  for (int i = 0; i < 200; ++i) P.push_back(3 * i - 100), Q.push_back(7 * i);
  CHECK(sumset(P, Q, rng, {0, true}) == oracle::brute_sumset(P, Q));
}

TEST_CASE("fredman identity on random data") {
  Rng rng(9);
  for (int t = 0; t < 1000; ++t) {
    ExtInt a = rng.range(-50, 50), b = rng.range(-50, 50), a2 = rng.range(-50, 50), b2 = rng.range(-50, 50);
    CHECK((a + b <= a2 + b2) == (a - a2 <= b2 - b));
  }
}

TEST_CASE("key reduction examples") {
  Rng rng(3);
  Matrix A = random_matrix(rng, 4, 4, 0, 8, 10), B = random_matrix(rng, 4, 4, 0, 8, 10);
  Rng r3(3);
  CHECK(minplus_key_reduction(A, B, 8, {2, 3, 2}, r3) == oracle::brute_minplus(A, B));
  CHECK(minplus_key_reduction(A, B, 8, {2, 8, 2}, r3) == oracle::brute_minplus(A, B));
  Matrix A8 = random_matrix(rng, 8, 8, 0, 16, 5), B8 = random_matrix(rng, 8, 8, 0, 16, 5);
  Matrix expect = oracle::brute_minplus(A8, B8);
  for (std::size_t s : {1, 2, 4})
    for (std::size_t t : {1, 2, 4})
      for (std::size_t r : {1, 2, 4}) CHECK(minplus_key_reduction(A8, B8, 16, {s, t, r}, rng) == expect);
  CHECK_THROWS_AS(minplus_key_reduction(make_matrix({{17}}), make_matrix({{1}}), 16, {1, 1, 1}, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(minplus_key_reduction(A, B, 8, {5, 1, 1}, rng), std::invalid_argument);
}

TEST_CASE("key reduction equals naive across parameters") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    std::size_t n1 = rng.range(1, 16), n2 = rng.range(1, 16), n3 = rng.range(1, 16);
    ExtInt ell = rng.range(1, 32);
    Matrix A = random_matrix(rng, n1, n2, 0, ell, 10), B = random_matrix(rng, n2, n3, 0, ell, 10);
    // low-entropy entries create many-witness cells
    if (t % 3 == 0) {
      A = random_matrix(rng, n1, n2, 0, std::min<ExtInt>(ell, 2));
      B = random_matrix(rng, n2, n3, 0, std::min<ExtInt>(ell, 2));
    }
    KeyReductionParams p{static_cast<std::size_t>(rng.range(1, n2)), static_cast<std::size_t>(rng.range(1, ell)),
                         static_cast<std::size_t>(rng.range(1, 8))};
    REQUIRE(minplus_key_reduction(A, B, ell, p, rng) == oracle::brute_minplus(A, B));
  }
}
