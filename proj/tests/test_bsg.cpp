#include <doctest.h>

#include "fmtk/bsg.hpp"
#include "fmtk/counters.hpp"
#include "fmtk/oracles.hpp"
#include "support.hpp"

#include <cmath>
#include <set>

using namespace fmtk;
using namespace fmtk::testing;

namespace {

IndexedSet random_indexed(Rng& rng, std::size_t n, ExtInt lo, ExtInt hi, unsigned inf_pct = 0) {
  return IndexedSet(random_array(rng, n, lo, hi, inf_pct));
}

// C over offsets [-(n-1), n-1]; about half the entries copy a realized difference.
IndexedSet random_targets(Rng& rng, const IndexedSet& A, ExtInt lo, ExtInt hi) {
  const std::int64_t n = A.n();
  std::vector<ExtInt> v(2 * n - 1, INF);
  for (std::int64_t k = -(n - 1); k <= n - 1; ++k) {
    if (rng.coin(1, 2)) {
      std::int64_t i = rng.range(std::max<std::int64_t>(0, -k), std::min<std::int64_t>(n - 1, n - 1 - k));
      if (A.has(i) && A.has(i + k)) v[k + n - 1] = A.at(i + k) - A.at(i);
    } else if (rng.coin(1, 2)) {
      v[k + n - 1] = rng.range(lo - hi, hi - lo);
    }
  }
  return IndexedSet(v, -(n - 1));
}

void check_cover(const BsgCover& cov, const std::vector<oracle::Pair>& need, const IndexedSet& A) {
  auto miss = oracle::brute_cover_check(cov.subsets, cov.remainder, need);
  if (miss) FAIL("uncovered pair (" << miss->first << ", " << miss->second << ")");
  CHECK(cov.remainder.size() <= cov.pair_budget);
  CHECK(cov.subsets.size() <= cov.subset_budget);
  CHECK(std::is_sorted(cov.remainder.begin(), cov.remainder.end()));
  CHECK(std::adjacent_find(cov.remainder.begin(), cov.remainder.end()) == cov.remainder.end());
  for (const auto& S : cov.subsets) {
    REQUIRE(!S.empty());
    CHECK(std::is_sorted(S.begin(), S.end()));
    for (auto i : S) CHECK(A.has(i));
  }
}

// Each subset is one A^(h,f): some offset h gives the same difference to every member.
bool has_common_difference(const IndexedSet& A, const std::vector<std::int64_t>& S) {
  for (std::int64_t h = -(static_cast<std::int64_t>(A.n()) - 1); h < static_cast<std::int64_t>(A.n()); ++h) {
    if (h == 0) continue;
    bool ok = true;
    for (auto i : S) ok = ok && A.has(i + h) && A.at(i + h) - A.at(i) == A.at(S[0] + h) - A.at(S[0]);
    if (ok) return true;
  }
  return false;
}

std::uint64_t brute_diff_size(const IndexedSet& A, const std::vector<std::int64_t>& S) {
  std::set<std::pair<std::int64_t, ExtInt>> d;
  for (auto x : S)
    for (auto y : S) d.insert({x - y, A.at(x) - A.at(y)});
  return d.size();
}

}  // namespace

TEST_CASE("popularity") {
  IndexedSet A({INF, 0, 0}, 0);
  CHECK(popularity(A, 1, 0) == 1);
  CHECK(popularity(A, 0, 0) == 2);
  CHECK(popularity(A, 5, 0) == 0);
  Rng rng(11);
  for (int it = 0; it < 50; ++it) {
    auto B = random_indexed(rng, 40, -3, 3, 20);
    std::int64_t dx = rng.range(-45, 45);
    ExtInt dv = rng.range(-7, 7);
    CHECK(popularity(B, dx, dv) == oracle::brute_popularity(B, dx, dv));
  }
}

TEST_CASE("difference set size matches brute force") {
  Rng rng(3);
  for (int it = 0; it < 20; ++it) {
    auto A = random_indexed(rng, 60, -20, 20, 10);
    std::vector<std::int64_t> S;
    for (std::int64_t i = 0; i < 60; ++i)
      if (A.has(i) && rng.coin(1, 2)) S.push_back(i);
    CHECK(difference_set_size(A, S, rng) == brute_diff_size(A, S));
  }
}

TEST_CASE("simple cover: all-zero instance") {
  Rng rng(1);
  IndexedSet A({0, 0, 0, 0});
  IndexedSet C(std::vector<ExtInt>(7, 0), -3);
  for (std::size_t s : {1, 2}) {
    auto cov = bsg_cover_simple(A, C, s, rng);
    auto need = oracle::brute_qualifying_pairs(A, C);
    CHECK(need.size() == 16);
    check_cover(cov, need, A);
    CHECK(cov.trivial == (s * s * s * s >= 4));
  }
  // s = 1 on a larger all-zero set builds real subsets
  IndexedSet Z(std::vector<ExtInt>(64, 0));
  IndexedSet CZ(std::vector<ExtInt>(127, 0), -63);
  auto cov = bsg_cover_simple(Z, CZ, 2, rng);
  CHECK_FALSE(cov.trivial);
  CHECK_FALSE(cov.subsets.empty());
  check_cover(cov, oracle::brute_qualifying_pairs(Z, CZ), Z);
}

TEST_CASE("simple cover: unattainable targets") {
  Rng rng(2);
  auto A = random_indexed(rng, 64, 0, 10);
  IndexedSet C(std::vector<ExtInt>(127, 1000), -63);
  auto cov = bsg_cover_simple(A, C, 2, rng);
  CHECK(oracle::brute_qualifying_pairs(A, C).empty());
  check_cover(cov, {}, A);
}

TEST_CASE("simple cover: random n=256") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    for (std::size_t s : {2, 4, 8}) {
      CAPTURE(seed);
      CAPTURE(s);
      Rng rng(seed);
      auto A = random_indexed(rng, 256, 0, 12, 5);
      auto C = random_targets(rng, A, 0, 12);
      auto cov = bsg_cover_simple(A, C, s, rng);
      check_cover(cov, oracle::brute_qualifying_pairs(A, C), A);
      CHECK(cov.attempts <= 10);
      CHECK(cov.trivial == (s >= 4));
      std::uint64_t total = 0;
      for (const auto& S : cov.subsets) {
        CHECK(has_common_difference(A, S));
        total += brute_diff_size(A, S);
      }
      CHECK(total == cov.sumset_total);
      CHECK(total <= cov.sumset_budget);
    }
}

TEST_CASE("simple cover: nontrivial s at n=512") {
  Rng rng(9);
  auto A = random_indexed(rng, 512, 0, 6);
  auto C = random_targets(rng, A, 0, 6);
  auto need = oracle::brute_qualifying_pairs(A, C);
  auto c2 = bsg_cover_simple(A, C, 2, rng);
  auto c4 = bsg_cover_simple(A, C, 4, rng);
  CHECK_FALSE(c4.trivial);
  check_cover(c2, need, A);
  check_cover(c4, need, A);
  // doubling s keeps |R| within the halved-rate budget
  CHECK(c4.remainder.size() <= c4.pair_budget);
  CHECK(c4.pair_budget * 2 <= c2.pair_budget + 1);
}

TEST_CASE("simple cover: 200-instance coverage property") {
  Rng rng(77);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 8 + rng.below(56);
    auto A = random_indexed(rng, n, 0, 1 + rng.below(6), 10);
    auto C = random_targets(rng, A, 0, 6);
    auto cov = bsg_cover_simple(A, C, 1 + rng.below(2), rng);
    auto miss = oracle::brute_cover_check(cov.subsets, cov.remainder, oracle::brute_qualifying_pairs(A, C));
    REQUIRE_FALSE(miss.has_value());
  }
}

TEST_CASE("gowers cover") {
  Rng rng(5);
  IndexedSet Z(std::vector<ExtInt>(64, 0));
  IndexedSet CZ(std::vector<ExtInt>(127, 0), -63);
  check_cover(bsg_cover_gowers(Z, CZ, 2, rng), oracle::brute_qualifying_pairs(Z, CZ), Z);

  auto A = random_indexed(rng, 256, 0, 8, 5);
  auto C = random_targets(rng, A, 0, 8);
  auto cov = bsg_cover_gowers(A, C, 2, rng);
  check_cover(cov, oracle::brute_qualifying_pairs(A, C), A);
  for (const auto& S : cov.subsets) CHECK(brute_diff_size(A, S) <= cov.sumset_budget);
  CHECK(cov.sumset_max <= cov.sumset_budget);

  for (int it = 0; it < 50; ++it) {
    auto B = random_indexed(rng, 16 + rng.below(48), 0, 4, 10);
    auto CB = random_targets(rng, B, 0, 4);
    auto need = oracle::brute_qualifying_pairs(B, CB);
    auto g = bsg_cover_gowers(B, CB, 1, rng);
    auto s = bsg_cover_simple(B, CB, 1, rng);
    REQUIRE_FALSE(oracle::brute_cover_check(g.subsets, g.remainder, need).has_value());
    REQUIRE_FALSE(oracle::brute_cover_check(s.subsets, s.remainder, need).has_value());
  }
}

TEST_CASE("popular cover") {
  Rng rng(8);
  SUBCASE("all zero") {
    IndexedSet Z(std::vector<ExtInt>(64, 0));
    auto cov = bsg_cover_popular_fast(Z, 2, 2, rng);
    auto need = oracle::brute_popular_pairs(Z, 32);
    CHECK(need.size() > 0);
    check_cover(cov, need, Z);
  }
  SUBCASE("no popular pairs") {
    auto A = random_indexed(rng, 64, 0, 1000000);
    auto cov = bsg_cover_popular_fast(A, 1, 2, rng);
    CHECK(oracle::brute_popular_pairs(A, 64).empty());
    check_cover(cov, {}, A);
  }
  SUBCASE("random n=512") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Rng r(seed);
      std::vector<ExtInt> v(512);
      for (auto& x : v) x = r.coin(1, 10);
      IndexedSet A(v);
      auto cov = bsg_cover_popular_fast(A, 2, 2, r);
      CHECK_FALSE(cov.subsets.empty());
      check_cover(cov, oracle::brute_popular_pairs(A, 256), A);
      CHECK(cov.pair_checks <= cov.op_budget);
      CHECK(cov.op_budget > 0);
    }
  }
}

TEST_CASE("extract single") {
  Rng rng(4);
  std::vector<std::int64_t> A = {0, 1, 2, 3, 4, 5, 6, 7};
  auto out = bsg_extract_single(A, {-1, 0, 1}, 4, rng);
  CHECK(out.subset.size() >= 1);
  CHECK(out.diff_size <= out.budget);
  for (auto a : out.subset) CHECK(std::binary_search(A.begin(), A.end(), a - out.h));
  std::set<std::int64_t> d;
  for (auto x : out.subset)
    for (auto y : out.subset) d.insert(x - y);
  CHECK(d.size() == out.diff_size);

  CHECK_THROWS_AS(bsg_extract_single(A, {0}, 4, rng), std::invalid_argument);

  std::vector<std::int64_t> P;
  for (int i = 0; i < 32; ++i) P.push_back(5 + 3 * i);
  std::vector<std::int64_t> D;
  for (int i = -31; i <= 31; ++i) D.push_back(3 * i);
  auto ap = bsg_extract_single(P, D, 1, rng);
  CHECK(ap.diff_size <= 2 * ap.subset.size() - 1);
  CHECK(2 * ap.subset.size() >= P.size());
}

TEST_CASE("randomized preprocessed 3SUM") {
  Rng rng(6);
  auto h = preprocessed_3sum_rand_build({1, 2}, {3, 4}, rng);
  auto f = preprocessed_3sum_rand_query(h, {2}, {3}, {5, 9}, rng);
  CHECK(f == std::vector<char>{1, 0});
  CHECK(preprocessed_3sum_rand_query(h, {}, {3, 4}, {5, 6}, rng) == std::vector<char>{0, 0});
  CHECK_THROWS_AS(preprocessed_3sum_rand_query(h, {7}, {3}, {5}, rng), std::invalid_argument);

  auto U = random_set(rng, 128, -400, 400);
  auto V = random_set(rng, 128, -400, 400);
  auto H = preprocessed_3sum_rand_build(U, V, rng);
  for (int q = 0; q < 20; ++q) {
    std::vector<std::int64_t> Ap, Bp;
    for (auto x : U)
      if (rng.below(4)) Ap.push_back(x);
    for (auto x : V)
      if (rng.below(4)) Bp.push_back(x);
    auto Cq = random_set(rng, 64, -800, 800);
    auto got = preprocessed_3sum_rand_query(H, Ap, Bp, Cq, rng);
    auto ref = oracle::brute_3sum_counts(Ap, Bp, Cq);
    for (std::size_t i = 0; i < Cq.size(); ++i) CHECK(static_cast<bool>(got[i]) == (ref[i] > 0));
  }
  CHECK(H.covers_built > 0);
}
