#include <doctest.h>

#include "fmtk/foundation.hpp"

#include <cstdio>

using namespace fmtk;

namespace {
BigNat schoolbook_add(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                      std::vector<std::uint32_t>& out) {
  out.assign(std::max(a.size(), b.size()) + 1, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t s = carry + (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    out[i] = static_cast<std::uint32_t>(s);
    carry = s >> 32;
  }
  BigNat r = 0;
  for (std::size_t i = out.size(); i-- > 0;) r = (r << 32) + out[i];
  return r;
}

BigNat schoolbook_mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint64_t> acc(a.size() + b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint64_t cur = acc[i + j] + static_cast<std::uint64_t>(a[i]) * b[j] + carry;
      acc[i + j] = cur & 0xffffffffu;
      carry = cur >> 32;
    }
    for (std::size_t k = i + b.size(); carry; ++k) {
      std::uint64_t cur = acc[k] + carry;
      acc[k] = cur & 0xffffffffu;
      carry = cur >> 32;
    }
  }
  BigNat r = 0;
  for (std::size_t i = acc.size(); i-- > 0;) r = (r << 32) + acc[i];
  return r;
}

BigNat from_limbs(const std::vector<std::uint32_t>& a) {
  BigNat r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = (r << 32) + a[i];
  return r;
}

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}
}  // namespace

TEST_CASE("ext int arithmetic saturates at INF and throws on overflow") {
  CHECK(add(INF, 5) == INF);
  CHECK(add(-3, INF) == INF);
  CHECK(add(2, 3) == 5);
  CHECK(INF > std::numeric_limits<ExtInt>::max() - 1);
  CHECK_THROWS_AS(add(INF - 1, 1), OverflowError);
  CHECK_THROWS_AS(add(std::numeric_limits<ExtInt>::min(), -1), OverflowError);
  CHECK_THROWS_AS(mul(INF / 2 + 1, 2), OverflowError);
  CHECK(floor_div(-3, 2) == -2);
  CHECK(ceil_div_signed(-3, 2) == -1);
  CHECK(ceil_div_signed(3, 2) == 2);
  CHECK(mod_pos(-1, 5) == 4);
}

TEST_CASE("read matrix examples") {
  CHECK(parse_matrix("1 1\n0\n") == make_matrix({{0}}));
  CHECK(parse_matrix("1 2\ninf 3\n") == make_matrix({{INF, 3}}));
  CHECK(parse_matrix("2 2\n0 2\n1 3\n") == make_matrix({{0, 2}, {1, 3}}));
}

TEST_CASE("read matrix errors name line and column") {
  auto msg = [](const std::string& s) {
    try {
      parse_matrix(s);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg("2 2\n0 x\n1 3\n").find("line 2, column 3") != std::string::npos);
  CHECK(msg("2 2\n0 1\n1\n").find("dimension mismatch") != std::string::npos);
  CHECK(msg("1 1\n99999999999999999999\n").find("line 2, column 1") != std::string::npos);
  CHECK(msg("1 1\n9223372036854775807\n").find("range") != std::string::npos);
  CHECK(msg("0 1\n").find("positive") != std::string::npos);
  CHECK(msg("1 2\n1 2 3\n").find("line 2, column 5") != std::string::npos);
}

TEST_CASE("matrix round trip on random matrices") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    Matrix M(rng.range(1, 16), rng.range(1, 16));
    for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = rng.coin(1, 10) ? INF : rng.range(-99, 99);
    CHECK(parse_matrix(format_matrix(M)) == M);
  }
  Matrix M = make_matrix({{1, INF}, {-4, 0}});
  std::string path = "fmtk_roundtrip.mat";
  write_matrix(path, M);
  CHECK(read_matrix(path) == M);
  std::remove(path.c_str());
}

TEST_CASE("graph json round trip") {
  TripartiteGraph G(make_matrix({{1, INF}}), make_matrix({{2}, {3}}), make_matrix({{-3}}));
  TripartiteGraph H = parse_graph(format_graph(G));
  CHECK(H.ux == G.ux);
  CHECK(H.xv == G.xv);
  CHECK(H.uv == G.uv);
  CHECK(G.has(0, 0, 0));
  CHECK_FALSE(G.has(0, 1, 0));
  CHECK(G.weight(0, 0, 0) == 0);
  CHECK_THROWS_AS(parse_graph(R"({"n1":1,"n2":1,"n3":1,"ux":[[1]],"xv":[[1]]})"), ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"n1":1,"n2":1,"n3":1,"ux":[[1]],"xv":[["x"]],"uv":[[1]]})"), ParseError);
}

TEST_CASE("rng determinism and splitting") {
  Rng a(5, 3), b(5, 3), c(5, 4);
  bool differs = false;
  for (int i = 0; i < 10000; ++i) {
    auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);
  Rng p(9);
  Rng c1 = p.split(1), c2 = p.split(1), c3 = p.split(2);
  CHECK(c1.next() == c2.next());
  CHECK(c1.next() != c3.next());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    auto v = r.range(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
  auto s = r.sample(100, 10);
  CHECK(s.size() == 10);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  CHECK(r.sample(5, 9).size() == 5);
}

TEST_CASE("random prime examples") {
  Rng r1(1);
  auto p = random_prime_in(8, 16, r1);
  CHECK((p == 11 || p == 13));
  Rng r2(3);
  CHECK(random_prime_in(3, 3, r2) == 3);
  Rng r3(7);
  auto q = random_prime_in(200, 400, r3);
  CHECK(q >= 200);
  CHECK(q <= 400);
  CHECK(trial_prime(q));
  Rng r4(1);
  CHECK_THROWS(random_prime_in(24, 28, r4));
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(is_prime(n) == trial_prime(n));
  CHECK(is_prime(18446744073709551557ull));
}

TEST_CASE("bignat agrees with schoolbook reference") {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::uint32_t> a(rng.range(1, 8)), b(rng.range(1, 8)), s;
    for (auto& x : a) x = static_cast<std::uint32_t>(rng.next());
    for (auto& x : b) x = static_cast<std::uint32_t>(rng.next());
    BigNat A = from_limbs(a), B = from_limbs(b);
    CHECK(A + B == schoolbook_add(a, b, s));
    CHECK(A * B == schoolbook_mul(a, b));
    CHECK((A < B) == (A != B && !(B < A)));
  }
}

TEST_CASE("bool matrix packing and products") {
  BoolMatrix A(3, 70);
  A.set(0, 69);
  A.set(2, 0);
  A.set(2, 69);
  CHECK(A.padding_clear());
  CHECK(A.count() == 3);
  CHECK(A.transpose().get(69, 2));
  BoolMatrix B(70, 2);
  B.set(69, 1);
  B.set(0, 1);
  auto C = bool_count_product(A, B);
  CHECK(C(0, 1) == 1);
  CHECK(C(2, 1) == 2);
  CHECK(C(1, 1) == 0);
  auto P = bool_product(A, B);
  CHECK(P.get(2, 1));
  CHECK_FALSE(P.get(2, 0));
}

TEST_CASE("indexed set membership") {
  IndexedSet S({5, INF, 7}, -1);
  CHECK(S.has(-1));
  CHECK_FALSE(S.has(0));
  CHECK(S.contains(1, 7));
  CHECK_FALSE(S.contains(2, 7));
  CHECK(S.size() == 2);
}
