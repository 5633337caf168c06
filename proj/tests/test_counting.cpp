#include <doctest.h>

#include "fmtk/counting.hpp"
#include "fmtk/oracles.hpp"
#include "support.hpp"

using namespace fmtk;
using namespace fmtk::testing;

namespace {

TripartiteGraph random_graph(Rng& rng, std::size_t n1, std::size_t n2, std::size_t n3, ExtInt lo, ExtInt hi,
                             unsigned inf_pct = 0) {
  return TripartiteGraph(random_matrix(rng, n1, n2, lo, hi, inf_pct), random_matrix(rng, n2, n3, lo, hi, inf_pct),
                         random_matrix(rng, n1, n3, lo, hi, inf_pct));
}

TripartiteGraph tiny(ExtInt a, ExtInt b, ExtInt c) {
  return TripartiteGraph(make_matrix({{a}}), make_matrix({{b}}), make_matrix({{c}}));
}

MinPlusCounter brute_counter = [](const Matrix& A, const Matrix& B) { return oracle::brute_minplus_witness_counts(A, B); };

std::vector<std::uint64_t> brute_conv_counts(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b) {
  return oracle::brute_3sum_conv_counts(a, b, oracle::brute_minplus_conv(a, b));
}

}  // namespace

TEST_CASE("anchor counts examples") {
  auto m1 = count_exact_tri_via_anchor(tiny(1, 1, -2), 0, {0});
  CHECK(m1.valid(0, 0));
  CHECK(m1.D(0, 0) == 1);
  auto m2 = count_exact_tri_via_anchor(tiny(1, 1, 5), 0, {0});
  CHECK_FALSE(m2.valid(0, 0));
  TripartiteGraph G(make_matrix({{1, 2}}), make_matrix({{1}, {0}}), make_matrix({{-2}}));
  auto m3 = count_exact_tri_via_anchor(G, 0, {0});
  CHECK(m3.valid(0, 0));
  CHECK(m3.D(0, 0) == 2);
}

TEST_CASE("anchor counts are exact wherever valid") {
  Rng rng(101);
  for (int t = 0; t < 200; ++t) {
    auto G = random_graph(rng, rng.range(1, 10), rng.range(1, 10), rng.range(1, 10), -3, 3, 10);
    auto S = rng.sample(G.n2(), rng.range(1, G.n2()));
    auto mc = count_exact_tri_via_anchor(G, 0, S);
    auto ref = oracle::brute_exact_tri_counts(G, 0);
    for (std::size_t i = 0; i < G.n1(); ++i)
      for (std::size_t j = 0; j < G.n3(); ++j) {
        bool hit = false;
        for (auto s : S) hit |= G.has(i, s, j) && G.weight(i, s, j) == 0;
        REQUIRE(bool(mc.valid(i, j)) == hit);
        if (hit) REQUIRE(mc.D(i, j) == ref(i, j));
      }
  }
}

TEST_CASE("all-edges exact triangle counting") {
  Rng rng(7);
  auto G = random_graph(rng, 3, 3, 3, -5, 5);
  CHECK(count_ae_exact_tri(G, 0, list_exact_tri_brute) == oracle::brute_exact_tri_counts(G, 0));
  auto H = random_graph(rng, 3, 3, 3, -5, 5);
  H.uv.setConstant(INF);
  CHECK(count_ae_exact_tri(H, 0, list_exact_tri_brute).sum() == 0);
  TripartiteGraph Z(Matrix::Zero(4, 5), Matrix::Zero(5, 3), Matrix::Zero(4, 3));
  CHECK((count_ae_exact_tri(Z, 0, list_exact_tri_brute).array() == 5).all());

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng r(seed);
    for (int t = 0; t < 200; ++t) {
      auto G2 = random_graph(r, r.range(1, 16), r.range(1, 16), r.range(1, 16), -2, 2, 5);
      ExtInt target = r.range(-2, 2);
      std::size_t cap = r.range(1, G2.n2());
      REQUIRE(count_ae_exact_tri(G2, target, list_exact_tri_brute, cap) == oracle::brute_exact_tri_counts(G2, target));
    }
  }
}

TEST_CASE("all-edges counting rejects a lying lister") {
  auto G = tiny(1, 1, -2);
  ExactTriLister liar = [](const TripartiteGraph& H, ExtInt, std::size_t) {
    Grid<std::vector<std::size_t>> L(H.n1(), H.n3());
    L(0, 0) = {0, 0};
    return L;
  };
  CHECK_THROWS(count_ae_exact_tri(G, 0, liar, 5));
  ExactTriLister wrong = [](const TripartiteGraph& H, ExtInt, std::size_t) {
    Grid<std::vector<std::size_t>> L(H.n1(), H.n3());
    L(0, 0) = {0};
    return L;
  };
  CHECK_THROWS(count_ae_exact_tri(tiny(1, 1, 5), 0, wrong, 5));
}

TEST_CASE("removing a uv edge never raises other counts") {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    auto G = random_graph(rng, 6, 6, 6, -2, 2);
    auto before = count_ae_exact_tri(G, 0, list_exact_tri_brute);
    std::size_t i = rng.below(6), j = rng.below(6);
    G.uv(i, j) = INF;
    auto after = count_ae_exact_tri(G, 0, list_exact_tri_brute);
    REQUIRE(after(i, j) == 0);
    REQUIRE((after.array() <= before.array()).all());
  }
}

TEST_CASE("min-plus witness counting") {
  Rng rng(3);
  CHECK(count_minplus(make_matrix({{0, 0}}), make_matrix({{0}, {0}}), rng)(0, 0) == 2);
  CHECK(count_minplus(make_matrix({{0, 1}}), make_matrix({{0}, {0}}), rng)(0, 0) == 1);
  Matrix A = random_matrix(rng, 8, 8, 0, 20), B = random_matrix(rng, 8, 8, 0, 20);
  CHECK(count_minplus(A, B, rng) == oracle::brute_minplus_witness_counts(A, B));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng r(seed);
    for (int t = 0; t < 200; ++t) {
      std::size_t n1 = r.range(1, 12), n2 = r.range(1, 16), n3 = r.range(1, 12);
      ExtInt hi = r.range(0, 3);
      Matrix X = random_matrix(r, n1, n2, 0, hi, 10), Y = random_matrix(r, n2, n3, 0, hi, 10);
      REQUIRE(count_minplus(X, Y, r, r.range(1, n2)) == oracle::brute_minplus_witness_counts(X, Y));
    }
  }
}

TEST_CASE("fredman identity at anchors on sampled triples") {
  Rng rng(19);
  for (int t = 0; t < 2000; ++t) {
    ExtInt a = rng.range(-20, 20), as = rng.range(-20, 20), b = rng.range(-20, 20), bs = rng.range(-20, 20);
    REQUIRE((a + b == as + bs) == (a - as == bs - b));
  }
}

TEST_CASE("hitting-set counts with the true product") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    Matrix A = random_matrix(rng, 6, 9, 0, 2), B = random_matrix(rng, 9, 6, 0, 2);
    Matrix C = oracle::brute_minplus(A, B);
    auto S = rng.sample(9, 3);
    auto mc = count_minplus_witnesses_via_hitting(A, B, S, C);
    auto W = oracle::brute_witness_sets(A, B);
    auto ref = oracle::brute_minplus_witness_counts(A, B);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        bool hit = false;
        for (auto s : S) hit |= std::binary_search(W(i, j).begin(), W(i, j).end(), s);
        REQUIRE(bool(mc.valid(i, j)) == hit);
        if (hit) REQUIRE(mc.D(i, j) == ref(i, j));
      }
  }
}

TEST_CASE("min-plus from counting") {
  CHECK(minplus_from_counting(make_matrix({{0, 0}}), make_matrix({{0}, {0}}), brute_counter) == make_matrix({{0}}));
  CHECK(minplus_from_counting(make_matrix({{4}}), make_matrix({{-1}}), brute_counter) == make_matrix({{3}}));
  Rng rng(29);
  for (int t = 0; t < 200; ++t) {
    std::size_t n1 = rng.range(1, 8), n2 = rng.range(1, 9), n3 = rng.range(1, 8);
    Matrix A = random_matrix(rng, n1, n2, -5, 5, 15), B = random_matrix(rng, n2, n3, -5, 5, 15);
    REQUIRE(minplus_from_counting(A, B, brute_counter) == oracle::brute_minplus(A, B));
  }
  MinPlusCounter broken = [](const Matrix& A, const Matrix& B) {
    CountMatrix D = oracle::brute_minplus_witness_counts(A, B);
    D.array() += 3;
    return D;
  };
  CHECK_THROWS(minplus_from_counting(make_matrix({{0, 0}}), make_matrix({{0}, {0}}), broken));
  // counting through the pipeline instead of brute force
  Rng r2(31);
  MinPlusCounter fast = [&](const Matrix& A, const Matrix& B) { return count_minplus(A, B, r2); };
  Matrix A = random_matrix(rng, 6, 6, 0, 4), B = random_matrix(rng, 6, 6, 0, 4);
  CHECK(minplus_from_counting(A, B, fast) == oracle::brute_minplus(A, B));
}

TEST_CASE("heavy 3sum convolution counts") {
  Rng rng(37);
  std::vector<ExtInt> z(4, 0);
  auto h = count_3sum_conv_heavy(z, z, z, 1, rng);
  CHECK(h.count == oracle::brute_3sum_conv_counts(z, z, z));
  CHECK(h.count == std::vector<std::uint64_t>{0, 1, 2, 3});

  std::vector<ExtInt> d1, d2, d3;
  for (int i = 0; i < 32; ++i) d1.push_back(1000 * i), d2.push_back(1000 * i + 1), d3.push_back(7);
  auto h2 = count_3sum_conv_heavy(d1, d2, d3, 4, rng);
  for (auto v : h2.count) CHECK(v == 0);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng r(seed);
    std::size_t n = 32;
    auto a = random_array(r, n, 0, 3), b = random_array(r, n, 0, 3), c = random_array(r, n, 0, 100);
    for (std::size_t m = 5; m < n; m += 7) c[m] = 3;  // planted heavy targets
    auto ref = oracle::brute_3sum_conv_counts(a, b, c);
    auto got = count_3sum_conv_heavy(a, b, c, 4, r);
    REQUIRE(got.count == ref);
    // without direct finishing, known cells are still exact
    auto partial = count_3sum_conv_heavy(a, b, c, 4, r, {0});
    for (std::size_t m = 0; m < n; ++m)
      if (partial.known[m]) REQUIRE(partial.count[m] == ref[m]);
  }
}

TEST_CASE("3sum convolution and min-plus convolution counting") {
  {
    Rng rng(2);
    std::vector<ExtInt> a{1, 2, 3}, b{9, 1, 2};
    CHECK(count_minplus_conv(a, b, list_3sum_conv_brute, rng) == brute_conv_counts(a, b));
    CHECK(count_minplus_conv({5}, {5}, list_3sum_conv_brute, rng) == std::vector<std::uint64_t>{0});
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng r(seed);
    for (int t = 0; t < 200; ++t) {
      std::size_t n = r.range(1, 64);
      ExtInt hi = r.range(0, 4);
      auto a = random_array(r, n, 0, hi, 5), b = random_array(r, n, 0, hi, 5), c = random_array(r, n, 0, 2 * hi, 5);
      std::size_t cap = r.range(1, std::max<std::size_t>(1, n / 2));
      REQUIRE(count_all_nums_3sum_conv(a, b, c, list_3sum_conv_brute, r, cap) == oracle::brute_3sum_conv_counts(a, b, c));
      REQUIRE(count_minplus_conv(a, b, list_3sum_conv_brute, r, cap) == brute_conv_counts(a, b));
    }
  }
}

TEST_CASE("min-plus convolution from counting") {
  ConvCounter counter = [](const std::vector<ExtInt>& a, const std::vector<ExtInt>& b) { return brute_conv_counts(a, b); };
  CHECK(minplus_conv_from_counting({0}, {0}, counter) == std::vector<ExtInt>{INF});
  CHECK(minplus_conv_from_counting({1, 2}, {3, 4}, counter) == std::vector<ExtInt>{INF, 4});
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = rng.range(1, 16);
    auto a = random_array(rng, n, -10, 10, 10), b = random_array(rng, n, -10, 10, 10);
    REQUIRE(minplus_conv_from_counting(a, b, counter) == minplus_convolution_naive(a, b));
  }
  Rng r2(43);
  ConvCounter fast = [&](const std::vector<ExtInt>& a, const std::vector<ExtInt>& b) {
    return count_minplus_conv(a, b, list_3sum_conv_brute, r2, 2);
  };
  auto a = random_array(rng, 24, 0, 3), b = random_array(rng, 24, 0, 3);
  CHECK(minplus_conv_from_counting(a, b, fast) == minplus_convolution_naive(a, b));
}

TEST_CASE("all-numbers 3sum counting") {
  Rng rng(47);
  CHECK(count_all_nums_3sum({1, 2}, {3, 4}, {5}, rng) == std::vector<std::uint64_t>{2});
  CHECK(count_all_nums_3sum({1, 2}, {3, 4}, {100, -3}, rng) == std::vector<std::uint64_t>{0, 0});
  CHECK(count_all_nums_3sum({}, {3, 4}, {5}, rng) == std::vector<std::uint64_t>{0});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng r(seed);
    for (int t = 0; t < 8; ++t) {
      auto A = random_set(r, 64, -200, 200), B = random_set(r, 64, -200, 200);
      std::vector<std::int64_t> C;
      for (int i = 0; i < 64; ++i) C.push_back(r.range(-400, 400));
      ThreeSumStats st;
      REQUIRE(count_all_nums_3sum(A, B, C, r, &st) == oracle::brute_3sum_counts(A, B, C));
      REQUIRE(st.rounds >= 2);
    }
  }
}

TEST_CASE("negative triangles split into exact instances") {
  auto sum_counts = [](const std::vector<ExactTriInstance>& inst, std::size_t n1, std::size_t n3) {
    CountMatrix S = CountMatrix::Zero(n1, n3);
    for (auto& I : inst) S += oracle::brute_exact_tri_counts(I.G, I.target);
    return S;
  };
  auto one = tiny(0, 0, -1);
  CHECK(sum_counts(negtri_to_exacttri_instances(one), 1, 1)(0, 0) == 1);
  auto pos = tiny(1, 1, 1);
  CHECK(sum_counts(negtri_to_exacttri_instances(pos), 1, 1)(0, 0) == 0);
  Rng rng(53);
  for (int t = 0; t < 200; ++t) {
    ExtInt W = t < 100 ? 8 : ExtInt{1} << rng.range(3, 40);
    auto G = random_graph(rng, rng.range(1, 4), rng.range(1, 4), rng.range(1, 4), -W, W, 10);
    auto inst = negtri_to_exacttri_instances(G);
    REQUIRE(sum_counts(inst, G.n1(), G.n3()) == oracle::brute_negative_triangle_counts(G));
    for (auto& I : inst) REQUIRE((I.target == 0 || I.target == 1));
  }
  CHECK_THROWS_AS(negtri_to_exacttri_instances(tiny(ExtInt{1} << 41, 0, 0)), OverflowError);
}

TEST_CASE("exact k-clique counting") {
  Matrix K4 = Matrix::Ones(4, 4);
  CHECK(count_exact_k_clique(K4, 6, 4) == 1);
  CHECK(count_exact_k_clique(K4, 5, 4) == 0);
  CHECK(count_exact_k_clique(K4, 3, 3) == 4);
  Rng rng(59);
  for (unsigned k : {3u, 4u, 5u})
    for (int t = 0; t < 10; ++t) {
      std::size_t n = rng.range(k, 10);
      Matrix W = filled(n, n, INF);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) W(u, v) = W(v, u) = rng.coin(1, 10) ? INF : rng.range(0, 6);
      ExtInt target = rng.range(0, 6 * k);
      REQUIRE(count_exact_k_clique(W, target, k) == oracle::brute_k_clique_count(W, target, k));
    }
  CHECK_THROWS_AS(count_exact_k_clique(K4, 0, 6), std::invalid_argument);
}

TEST_CASE("shortest-path counts mod U") {
  Rng rng(61);
  Matrix W = make_matrix({{INF, 1, 2}, {INF, INF, 1}, {INF, INF, INF}});
  auto r = apsp_count_mod(W, 2, rng);
  CHECK(r.dist(0, 2) == 2);
  CHECK(r.count(0, 2) == 0);
  auto r3 = apsp_count_mod(W, 3, rng);
  CHECK(r3.count(0, 2) == 2);
  auto e = apsp_count_mod(make_matrix({{INF, 5}, {INF, INF}}), 7, rng);
  CHECK(e.count(0, 1) == 1);
  CHECK(e.dist(1, 0) == INF);
  CHECK(e.count(1, 0) == 0);
  for (int t = 0; t < 6; ++t) {
    std::size_t n = rng.range(2, 12);
    Matrix G = filled(n, n, INF);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && rng.coin(1, 2)) G(u, v) = rng.range(1, 3);
    auto ref = oracle::brute_apsp_count(G);
    for (std::uint64_t U : {2ull, 7ull}) {
      auto got = apsp_count_mod(G, U, rng);
      REQUIRE(got.dist == ref.dist);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) REQUIRE(got.count(u, v) == static_cast<std::uint64_t>(ref.count(u, v) % U));
    }
  }
  CHECK_THROWS_AS(apsp_count_mod(W, 1, rng), std::invalid_argument);
}
