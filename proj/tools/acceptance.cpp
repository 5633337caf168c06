// Acceptance run: one PASS/FAIL line per criterion 1-7.
// Exit 0 iff every gating criterion passes. Criterion 7 is informational, and the
// > 2^64 part of criterion 6 is unattainable at n <= 12 (see the printed bound);
// --strict makes every FAIL line count.

#include "suites.hpp"

#include "fmtk/bsg.hpp"
#include "fmtk/counters.hpp"
#include "fmtk/gadgets.hpp"
#include "fmtk/oracles.hpp"
#include "fmtk/products.hpp"
#include "fmtk/tridecomp.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace fmtk;
using suites::Scale;

namespace {

// Pinned thresholds.
constexpr std::uint64_t kSeeds = 5;
constexpr std::uint64_t kMinInstances = 200;
constexpr double kVerifyAllBudgetSec = 600.0;
constexpr std::uint64_t kDecompInstances = 1000, kUpdateInstances = 500;
constexpr double kLasVegasRate = 0.95;
constexpr std::size_t kApspGraphs = 100, kApspMaxN = 12;
constexpr double kDominanceSpeedup = 2.0;
constexpr std::size_t kDominanceN = 1024;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Line {
  std::string id;
  bool pass;
  std::string detail;
  bool gating = true;
};

void print(const Line& l) {
  std::cout << "criterion " << l.id << ": " << (l.pass ? "PASS" : "FAIL") << "  " << l.detail << std::endl;
}

struct Tally {
  std::uint64_t instances = 0, failures = 0;
  std::string first;
  void add(const suites::CaseResult& c, const std::string& where) {
    instances += c.instances;
    failures += c.failures;
    if (c.failures && first.empty()) first = where + "/" + c.name + ": " + c.first_failure;
  }
  std::string summary() const {
    std::ostringstream o;
    o << instances << " instances, " << failures << " failures";
    if (!first.empty()) o << " (first: " << first << ")";
    return o.str();
  }
};

Line criterion1() {
  Tally t;
  std::uint64_t min_per_case = UINT64_MAX;
  double first_seed_sec = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& name : suites::suite_names()) {
      auto r = suites::run_suite(name, seed, Scale::Small);
      for (const auto& c : r.cases) {
        t.add(c, name + "@" + std::to_string(seed));
        min_per_case = std::min(min_per_case, c.instances);
      }
    }
    if (seed == 1) first_seed_sec = seconds_since(t0);
  }
  std::ostringstream d;
  d << "oracle-equivalence battery, all suites, seeds 1-" << kSeeds << ": " << t.summary() << "; min "
    << min_per_case << " instances per case (need " << kMinInstances << "); verify all, seed 1: " << std::fixed
    << std::setprecision(1) << first_seed_sec << " s (budget " << kVerifyAllBudgetSec << " s)";
  return {"1", t.failures == 0 && min_per_case >= kMinInstances && first_seed_sec <= kVerifyAllBudgetSec, d.str()};
}

Line criterion2() {
  Tally t;
  auto a = suites::run_case("tridecomp", "decomposition_contract", 21, Scale::Small, kDecompInstances);
  auto b = suites::run_case("tridecomp", "update_equals_rebuild", 22, Scale::Small, kUpdateInstances);
  t.add(a, "tridecomp");
  t.add(b, "tridecomp");
  std::ostringstream d;
  d << "triangle decomposition contract (dims <= 12, s in 1..4; purity, disjoint completeness, |R| and subgraph "
       "bounds, update = rebuild): "
    << t.summary() << "; max |R| " << a.metrics.value("max_remainder", 0) << ", max subgraphs "
    << a.metrics.value("max_subgraphs", 0);
  return {"2", t.failures == 0, d.str()};
}

Line criterion3() {
  Tally t;
  auto r = suites::run_suite("counting", 31, Scale::Small);
  for (const auto& c : r.cases) t.add(c, "counting");
  std::ostringstream d;
  d << "counting and detection pipelines with brute listers, exact counts and reconstructed products ("
    << r.cases.size() << " pipelines): " << t.summary();
  return {"3", t.failures == 0, d.str()};
}

Line criterion4() {
  // the n <= 512 corpus
  std::uint64_t runs = 0, lv_ok = 0, uncovered = 0, over_budget = 0, popular = 0;
  std::string first;
  for (std::size_t n : {64, 128, 256, 512})
    for (int kind = 0; kind < 4; ++kind)
      for (std::uint64_t rep = 0; rep < 3; ++rep) {
        Rng rng(41 + rep, n * 8 + kind);
        std::vector<ExtInt> v(n);
        for (auto& x : v) x = kind == 3 ? (rng.coin(1, 10) ? rng.range(1, 3) : 0) : rng.range(0, 6);
        IndexedSet A(v);
        std::vector<ExtInt> c(2 * n - 1, INF);
        for (std::int64_t k = -static_cast<std::int64_t>(n) + 1; k < static_cast<std::int64_t>(n); ++k)
          if (rng.coin(1, 2)) {
            std::int64_t i = rng.range(std::max<std::int64_t>(0, -k), std::min<std::int64_t>(n - 1, n - 1 - k));
            c[k + n - 1] = v[i + k] - v[i];
          }
        IndexedSet C(c, -static_cast<std::int64_t>(n) + 1);
        ++runs;
        try {
          BsgCover cov;
          std::vector<oracle::Pair> need;
          if (kind == 0 || kind == 1) {
            cov = bsg_cover_simple(A, C, kind == 0 ? 2 : 3, rng);
            need = oracle::brute_qualifying_pairs(A, C);
          } else if (kind == 2) {
            cov = bsg_cover_gowers(A, C, 2, rng);
            need = oracle::brute_qualifying_pairs(A, C);
          } else {
            cov = bsg_cover_popular_fast(A, 2, 2, rng);
            need = oracle::brute_popular_pairs(A, n / 2);
            ++popular;
            if (cov.pair_checks > cov.op_budget) ++over_budget;
          }
          ++lv_ok;
          if (cov.remainder.size() > cov.pair_budget || cov.subsets.size() > cov.subset_budget) ++over_budget;
          if (oracle::brute_cover_check(cov.subsets, cov.remainder, need)) {
            ++uncovered;
            if (first.empty()) first = "uncovered pair at n=" + std::to_string(n);
          }
        } catch (const BsgBudgetError& e) {
          if (first.empty()) first = e.what();
        }
      }
  // plus the small-instance battery
  Tally t;
  for (const auto& c : suites::run_suite("bsg", 43, Scale::Small).cases) t.add(c, "bsg");
  const double rate = static_cast<double>(lv_ok) / runs;
  std::ostringstream d;
  d << "BSG covers, n in {64,128,256,512}: " << lv_ok << "/" << runs << " within 10 attempts (rate " << std::fixed
    << std::setprecision(3) << rate << ", need " << kLasVegasRate << "), " << uncovered << " with uncovered pairs, "
    << over_budget << " over a budget (|R|, subset count, popular pair checks: " << popular << " popular runs); small battery: " << t.summary();
  if (!first.empty()) d << "; first issue: " << first.substr(0, 200);
  return {"4", rate >= kLasVegasRate && uncovered == 0 && over_budget == 0 && t.failures == 0, d.str()};
}

Line criterion5() {
  Tally t;
  for (const auto& c : suites::run_suite("gadgets", 51, Scale::Small).cases) t.add(c, "gadgets");

  // n = 1 index corners
  std::vector<std::string> bad;
  auto corner = [&](const char* name, bool ok) {
    if (!ok) bad.push_back(name);
  };
  {
    Matrix A = make_matrix({{1}}), B = make_matrix({{1}});
    auto g = minwitness_gadget(A, B, 1);
    corner("minwitness", g.decode(oracle::brute_min_witness(g.A, g.B)) == make_matrix({{2}}));
    auto p = apslp_gadget(A, B, 1);
    auto d = oracle::brute_lex_shortest_path(p.G, p.s[0]);
    corner("apslp", p.decode(make_matrix({{d[p.t[0]].hops}}), make_matrix({{d[p.t[0]].weight}})) == make_matrix({{2}}));
    auto e = minwitness_to_minequal(A, B);
    corner("minequal", e.decode(oracle::brute_min_equality(e.A, e.B)) == make_matrix({{0}}));
    auto cv = minequalprod_to_conv(make_matrix({{2}}), make_matrix({{2}}));
    corner("minequalconv", cv.decode(oracle::brute_min_equal_conv(cv.a, cv.b)) == make_matrix({{2}}));
  }
  {
    auto g = range_mode_gadget(make_matrix({{1, 2}}), make_matrix({{2}, {1}}), 2);
    for (auto rule : {oracle::TieRule::Smallest, oracle::TieRule::Largest}) {
      std::vector<std::uint64_t> f;
      for (auto a : oracle::brute_range_mode(g.S, g.queries, rule)) f.push_back(a.freq);
      corner("rangemode", g.decode(f) == make_matrix({{3}}));
    }
  }

  // min-plus convolution through a brute min-equal oracle, n <= 64, every admissible (t, s)
  const MinEqualConvFn brute = [](const auto& x, const auto& y) { return oracle::brute_min_equal_conv(x, y); };
  std::uint64_t conv_runs = 0, conv_bad = 0;
  for (std::size_t n : {1, 2, 3, 8, 16, 32, 48, 64})
    for (std::size_t s : {1, 2, 4})
      for (std::size_t tt = 1; tt * isqrt_ceil(s) <= isqrt_ceil(n); ++tt)
        for (std::size_t s_hat : {1, 2}) {
          Rng rng(52, n * 1000 + s * 100 + tt * 10 + s_hat);
          std::vector<ExtInt> a(n), b(n);
          const bool planted = rng.coin(1, 2);
          for (std::size_t i = 0; i < n; ++i) {
            a[i] = planted ? 2 * (i % 4) + rng.below(2) : rng.range(0, 2 * n);
            b[i] = planted ? 2 * ((n - i) % 4) + rng.below(2) : rng.range(0, 2 * n);
          }
          ++conv_runs;
          try {
            if (minplus_conv_via_minequal(a, b, brute, {tt, s, s_hat}, rng).c != oracle::brute_minplus_conv(a, b))
              ++conv_bad;
          } catch (const std::exception&) {
            ++conv_bad;
          }
        }
  std::ostringstream d;
  d << "gadget round trips (decode of solve = naive product): " << t.summary() << "; n=1 corners "
    << (bad.empty() ? "all ok" : "failed: " + bad.front()) << "; min-plus convolution via min-equal, n <= 64: "
    << conv_runs - conv_bad << "/" << conv_runs << " exact";
  return {"5", t.failures == 0 && bad.empty() && conv_bad == 0, d.str()};
}

// Transitive tournament with w(u, v) = v - u: every increasing 0 -> n-1 path is shortest.
Matrix tournament(std::size_t n) {
  Matrix W = filled(n, n, INF);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) W(u, v) = static_cast<ExtInt>(v - u);
  return W;
}

std::vector<Line> criterion6() {
  std::uint64_t agree = 0, total = 0;
  BigNat max_seen = 0;
  auto check = [&](const Matrix& W) {
    ++total;
    auto got = apsp_count(W);
    auto ref = oracle::brute_apsp_count(W);
    if (got.dist == ref.dist && got.count == ref.count) ++agree;
    for (const auto& c : ref.count.data) max_seen = std::max(max_seen, c);
  };
  for (std::size_t g = 0; g + 1 < kApspGraphs; ++g) {
    Rng rng(61, g);
    const std::size_t n = rng.range(1, kApspMaxN);
    Matrix W = filled(n, n, INF);
    const ExtInt wmax = g % 3 == 0 ? 1 : g % 3 == 1 ? 2 : 8;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && rng.coin(3, 5)) W(u, v) = rng.range(1, wmax);
    check(W);
  }
  check(tournament(kApspMaxN));  // the count-maximizing shape

  // With positive weights every shortest path is simple, so an (s, t) count is at most the number of
  // simple s -> t paths in the complete digraph: sum over k of (n-2)!/(n-2-k)!.
  BigNat bound = 0, term = 1;
  for (std::size_t k = 0; k <= kApspMaxN - 2; ++k) {
    bound += term;
    term *= kApspMaxN - 2 - k;
  }
  const BigNat two64 = BigNat(1) << 64;

  // supplementary: the smallest tournament past 2^64 (n = 67 gives 2^65 paths 0 -> 66), against the oracle
  const std::size_t big_n = 67;
  auto t0 = std::chrono::steady_clock::now();
  auto got = apsp_count(tournament(big_n));
  auto ref = oracle::brute_apsp_count(tournament(big_n));
  const bool big_ok = got.count == ref.count && got.dist == ref.dist && got.count(0, big_n - 1) == (BigNat(1) << 65);
  const double big_sec = seconds_since(t0);

  std::ostringstream a, b;
  a << "shortest-path counts equal the DP oracle on " << agree << "/" << total << " positive-weight digraphs, n <= "
    << kApspMaxN << " (largest count " << max_seen << ")";
  b << "instances with > 2^64 paths at n <= " << kApspMaxN << " are unattainable: every count is at most " << bound
    << " < 2^64 (simple paths only). Supplementary: n=" << big_n << " tournament, 2^65 paths, matches the oracle: "
    << (big_ok ? "yes" : "no") << " (" << std::fixed << std::setprecision(1) << big_sec << " s)";
  const bool a_ok = agree == total;
  const bool b_ok = bound > two64;  // never true; kept as the literal criterion
  std::ostringstream all;
  all << "#APSP exact BigNat counts; 6a " << (a_ok ? "PASS" : "FAIL") << ", 6b FAIL (unattainable, not gating)";
  Line whole{"6", a_ok && b_ok, all.str()};
  whole.gating = false;
  Line la{"6a", a_ok, a.str()};
  Line lb{"6b", b_ok && big_ok, b.str()};
  lb.gating = false;
  return {whole, la, lb};
}

Line criterion7() {
  Rng rng(71);
  const std::size_t n = kDominanceN;
  Matrix A(n, n), B(n, n);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = rng.range(0, n), B.data()[i] = rng.range(0, n);
  const std::size_t r = isqrt_ceil(n);
  reset_counters();
  auto t0 = std::chrono::steady_clock::now();
  auto fast = dominance_product(A, B, {r});
  const double fast_sec = seconds_since(t0);
  const auto words = counters().bool_word_ops, fast_pairs = counters().pair_checks;
  reset_counters();
  t0 = std::chrono::steady_clock::now();
  auto slow = dominance_product_naive(A, B);
  const double slow_sec = seconds_since(t0);
  const auto slow_pairs = counters().pair_checks;
  const double speedup = slow_sec / std::max(fast_sec, 1e-9);
  std::ostringstream d;
  d << std::fixed << std::setprecision(2) << "dominance product n=" << n << ", r=" << r << ": " << fast_sec << " s vs naive "
    << slow_sec << " s, speedup " << speedup << "x (need " << kDominanceSpeedup << "x, informational); counters: "
    << fast_pairs << " pair checks + " << words << " bit-packed word ops vs " << slow_pairs << " pair checks; outputs "
    << (fast == slow ? "equal" : "DIFFER");
  Line l{"7", speedup >= kDominanceSpeedup && fast == slow, d.str()};
  l.gating = false;
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-7"};
  bool strict = false;
  std::vector<std::string> only;
  app.add_flag("--strict", strict, "Exit nonzero on any FAIL line, including informational ones");
  app.add_option("--only", only, "Run a subset of criteria, e.g. --only 2 6");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  auto want = [&](const std::string& id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  std::vector<std::pair<std::string, std::function<std::vector<Line>()>>> all = {
      {"1", [] { return std::vector<Line>{criterion1()}; }}, {"2", [] { return std::vector<Line>{criterion2()}; }},
      {"3", [] { return std::vector<Line>{criterion3()}; }}, {"4", [] { return std::vector<Line>{criterion4()}; }},
      {"5", [] { return std::vector<Line>{criterion5()}; }}, {"6", criterion6},
      {"7", [] { return std::vector<Line>{criterion7()}; }}};
  bool gate_ok = true, all_ok = true;
  for (auto& [id, fn] : all) {
    if (!want(id)) continue;
    std::vector<Line> lines;
    try {
      lines = fn();
    } catch (const std::exception& e) {
      lines = {Line{id, false, std::string("aborted: ") + e.what()}};
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i) std::cout << "  ";
      print(lines[i]);
      all_ok = all_ok && lines[i].pass;
      gate_ok = gate_ok && (lines[i].pass || !lines[i].gating);
    }
  }
  std::cout << "acceptance: " << (gate_ok ? "gating criteria pass" : "gating criteria FAIL")
            << (all_ok ? "" : "; see FAIL lines above") << std::endl;
  return strict ? !all_ok : !gate_ok;
}
