// fmtk command-line harness: verify, bench, decompose, cover, gadget, count.
// Exit codes: 0 pass, 1 failure, 2 usage or input error.

#include "suites.hpp"

#include "fmtk/bsg.hpp"
#include "fmtk/counters.hpp"
#include "fmtk/counting.hpp"
#include "fmtk/gadgets.hpp"
#include "fmtk/oracles.hpp"
#include "fmtk/products.hpp"
#include "fmtk/tridecomp.hpp"
#include "fmtk/witnesses.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

using namespace fmtk;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("FMTK_SEED");
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("FMTK_SEED is not an unsigned integer: '") + env + "'");
}

std::string utc_now() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

json ext_json(ExtInt v) { return v == INF ? json("inf") : json(v); }

json matrix_json(const Matrix& M) {
  json a = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(ext_json(M(i, j)));
    a.push_back(row);
  }
  return a;
}

json counts_json(const CountMatrix& M) {
  json a = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    a.push_back(row);
  }
  return a;
}

// BigNat cells as decimal strings; they routinely exceed 64 bits.
json big_json(const BigMatrix& M) {
  json a = json::array();
  for (std::size_t i = 0; i < M.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < M.cols; ++j) row.push_back(M(i, j).str());
    a.push_back(row);
  }
  return a;
}

json counters_json() {
  const auto& c = counters();
  return {{"pair_checks", c.pair_checks},     {"matmul_cells", c.matmul_cells}, {"big_digit_ops", c.big_digit_ops},
          {"bool_word_ops", c.bool_word_ops}, {"heavy_path", c.heavy_path},     {"resamples", c.resamples}};
}

json bool_cells(const BoolMatrix& M) {
  json a = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (M.get(i, j)) a.push_back({i, j});
  return a;
}

BoolMatrix cells_bool(const json& j, std::size_t r, std::size_t c, const std::string& where) {
  BoolMatrix M(r, c);
  if (!j.is_array()) throw ParseError(where + ": expected an array of [row, col] pairs");
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
      throw ParseError(where + ": malformed cell");
    std::size_t a = e[0], b = e[1];
    if (a >= r || b >= c) throw ParseError(where + ": cell [" + std::to_string(a) + "," + std::to_string(b) + "] out of range");
    M.set(a, b);
  }
  return M;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void emit(const json& j, const std::string& out) {
  std::string text = j.dump() + "\n";
  std::cout << text;
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write '" + out + "'");
    f << text;
  }
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& scale_s, const std::string& out) {
  suites::Scale scale;
  if (!suites::parse_scale(scale_s, scale)) throw UsageError("unknown scale '" + scale_s + "'");
  if (suite != "all" && !suites::is_suite(suite)) throw UsageError("unknown suite '" + suite + "'");
  std::vector<suites::SuiteResult> results;
  for (const auto& name : suites::suite_names())
    if (suite == "all" || suite == name) results.push_back(suites::run_suite(name, seed, scale));
  json j = suites::report_json(results, seed, scale);
  j["suite"] = suite;
  emit(j, out);
  return j["pass"].get<bool>() ? 0 : 1;
}

// ----------------------------------------------------------------- bench

struct Params {
  std::map<std::string, std::int64_t> kv;
  std::int64_t get(const std::string& k, std::int64_t dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  }
  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
  }
};

Params parse_params(const std::vector<std::string>& raw) {
  Params p;
  for (const auto& s : raw) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("param '" + s + "' is not k=v");
    try {
      std::size_t used = 0;
      std::int64_t v = std::stoll(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument("trailing");
      p.kv[s.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw UsageError("param '" + s + "' needs an integer value");
    }
  }
  return p;
}

Matrix rmat(Rng& rng, std::size_t r, std::size_t c, ExtInt lo, ExtInt hi) {
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = rng.range(lo, hi);
  return M;
}

std::vector<ExtInt> rarr(Rng& rng, std::size_t n, ExtInt lo, ExtInt hi) {
  std::vector<ExtInt> v(n);
  for (auto& x : v) x = rng.range(lo, hi);
  return v;
}

const std::vector<std::string>& bench_algos() {
  static const std::vector<std::string> v = {
      "apsp_count",          "bsg_cover_gowers",     "bsg_cover_popular_fast",    "bsg_cover_simple",
      "dominance_product",   "dominance_product_naive", "equality_product",      "minplus_conv_via_minequal",
      "minplus_key_reduction", "minplus_naive",       "sumset",                    "triangle_decomposition"};
  return v;
}

json cover_json(const BsgCover& c);

int cmd_bench(const std::string& algo, std::size_t n, const std::vector<std::string>& raw, std::uint64_t seed,
              const std::string& out) {
  if (std::find(bench_algos().begin(), bench_algos().end(), algo) == bench_algos().end())
    throw UsageError("unknown algo '" + algo + "'");
  if (n < 1) throw UsageError("--n must be positive");
  Params p = parse_params(raw);
  Rng rng(seed);
  json result = json::object();
  const auto sq = static_cast<std::int64_t>(isqrt_ceil(n));
  // inputs are generated before the clock starts
  std::function<void()> run;
  Matrix A, B;
  CountMatrix counts;
  std::vector<ExtInt> a, b;
  if (algo == "dominance_product" || algo == "dominance_product_naive" || algo == "equality_product") {
    ExtInt range = p.get("range", static_cast<std::int64_t>(n));
    A = rmat(rng, n, n, 0, range), B = rmat(rng, n, n, 0, range);
    std::size_t r = p.get("r", sq);
    if (r < 1) throw UsageError("r must be positive");
    if (algo == "dominance_product_naive") {
      run = [&] { counts = dominance_product_naive(A, B); };
    } else {
      result["r"] = r;
      if (algo == "dominance_product")
        run = [&, r] { counts = dominance_product(A, B, {r}); };
      else
        run = [&, r] { counts = equality_product(A, B, {r}); };
    }
  } else if (algo == "minplus_naive") {
    A = rmat(rng, n, n, 0, p.get("range", 100)), B = rmat(rng, n, n, 0, p.get("range", 100));
    run = [&] { minplus_naive(A, B); };
  } else if (algo == "minplus_key_reduction") {
    ExtInt ell = p.get("ell", 16);
    A = rmat(rng, n, n, 0, ell), B = rmat(rng, n, n, 0, ell);
    KeyReductionParams kp{static_cast<std::size_t>(p.get("s", 1)), static_cast<std::size_t>(p.get("t", 1)),
                          static_cast<std::size_t>(p.get("r", sq))};
    run = [&, ell, kp] { minplus_key_reduction(A, B, ell, kp, rng); };
  } else if (algo == "triangle_decomposition") {
    ExtInt w = p.get("w", 4);
    TripartiteGraph G(rmat(rng, n, n, -w, w), rmat(rng, n, n, -w, w), rmat(rng, n, n, -w, w));
    std::size_t s = p.get("s", 2);
    run = [&, G, s] {
      auto D = triangle_decomposition(G, p.get("target", 0), s);
      const double N = n, lnN = std::log(N * N);
      result["s"] = s;
      result["remainder"] = D.remainder.size();
      result["subgraphs"] = D.subgraph_count();
      result["hitting_set"] = D.H.size();
      result["budgets"] = {{"remainder", static_cast<std::uint64_t>((2 + lnN) * N * N * N / s)},
                           {"subgraphs", static_cast<std::uint64_t>((std::ceil(s * lnN) + 1) * s * s)}};
      result["within_budget"] = D.remainder.size() <= result["budgets"]["remainder"].get<std::uint64_t>() &&
                                D.subgraph_count() <= result["budgets"]["subgraphs"].get<std::uint64_t>();
    };
  } else if (algo.rfind("bsg_cover_", 0) == 0) {
    ExtInt range = p.get("range", 6);
    std::size_t s = p.get("s", 2), s_hat = p.get("s_hat", 2);
    std::vector<ExtInt> v(n);
    for (auto& x : v) x = algo == "bsg_cover_popular_fast" ? (rng.coin(1, 10) ? rng.range(1, range) : 0) : rng.range(0, range);
    IndexedSet S(v);
    // targets: every realized difference, the hardest qualifying set
    std::vector<ExtInt> c(2 * n - 1, INF);
    for (std::int64_t k = -static_cast<std::int64_t>(n) + 1; k < static_cast<std::int64_t>(n); ++k) {
      std::int64_t i = rng.range(std::max<std::int64_t>(0, -k), std::min<std::int64_t>(n - 1, n - 1 - k));
      c[k + n - 1] = v[i + k] - v[i];
    }
    IndexedSet C(c, -static_cast<std::int64_t>(n) + 1);
    run = [&, S, C, s, s_hat] {
      BsgCover cov = algo == "bsg_cover_simple"   ? bsg_cover_simple(S, C, s, rng)
                     : algo == "bsg_cover_gowers" ? bsg_cover_gowers(S, C, s, rng)
                                                  : bsg_cover_popular_fast(S, s, s_hat, rng, p.get("verify", 1) != 0);
      result = cover_json(cov);
      result.erase("subsets");
      result.erase("remainder");
      result["subset_count"] = cov.subsets.size();
      result["remainder_size"] = cov.remainder.size();
    };
  } else if (algo == "apsp_count") {
    Matrix W = filled(n, n, INF);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && rng.coin(1, 2)) W(u, v) = rng.range(1, p.get("w", 3));
    run = [&, W] {
      auto r = apsp_count(W, p.get("s", 0));
      unsigned bits = 0;
      for (const auto& x : r.count.data) bits = std::max<unsigned>(bits, x == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(x)) + 1);
      result["max_count_bits"] = bits;
    };
  } else if (algo == "sumset") {
    std::int64_t range = p.get("range", 100 * static_cast<std::int64_t>(n));
    std::vector<std::int64_t> X, Y;
    for (std::size_t i = 0; i < n; ++i) X.push_back(rng.range(-range, range)), Y.push_back(rng.range(-range, range));
    run = [&, X, Y] { result["size"] = sumset(X, Y, rng, {0, p.get("fft", 1) != 0}).size(); };
  } else if (algo == "minplus_conv_via_minequal") {
    a = rarr(rng, n, 0, p.get("range", 4 * static_cast<std::int64_t>(n)));
    b = rarr(rng, n, 0, p.get("range", 4 * static_cast<std::int64_t>(n)));
    MinPlusConvParams mp{static_cast<std::size_t>(p.get("t", 2)), static_cast<std::size_t>(p.get("s", 2)),
                         static_cast<std::size_t>(p.get("s_hat", 2))};
    run = [&, mp] {
      const MinEqualConvFn oracle = [](const auto& x, const auto& y) { return min_equal_convolution(x, y); };
      auto r = minplus_conv_via_minequal(a, b, oracle, mp, rng);
      result["heavy_hits"] = r.heavy_hits;
      result["light_hits"] = r.light_hits;
      result["oracle_calls"] = r.oracle_calls;
      result["rounds"] = r.rounds;
    };
  }
  reset_counters();
  auto t0 = std::chrono::steady_clock::now();
  run();
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  json j;
  j["kind"] = "bench";
  j["algo"] = algo;
  j["n"] = n;
  j["seed"] = seed;
  j["params"] = p.to_json();
  j["counters"] = counters_json();
  j["result"] = result;
  j["timestamp"] = {{"utc", utc_now()}, {"wall_ms", std::llround(ms)}};
  emit(j, out);
  return 0;
}

// ------------------------------------------------------------- decompose

json decomposition_json(const TripartiteGraph& G, const TriangleDecomposition& D) {
  json j;
  j["kind"] = "decomposition";
  j["n1"] = G.n1(), j["n2"] = G.n2(), j["n3"] = G.n3();
  j["s"] = D.s, j["r"] = D.r, j["target"] = D.target;
  j["H"] = D.H;
  j["remainder"] = json::array();
  for (const auto& t : D.remainder) j["remainder"].push_back({t[0], t[1], t[2]});
  j["categories"] = json::array();
  std::size_t in_sub = 0;
  for (const auto& c : D.categories) {
    json cj;
    cj["k0"] = c.k0;
    cj["uv"] = bool_cells(c.uv);
    cj["subgraphs"] = json::array();
    for (std::size_t p = 0; p < c.subgraphs.size(); ++p) {
      cj["subgraphs"].push_back({{"ux", bool_cells(c.subgraphs[p].ux)}, {"xv", bool_cells(c.subgraphs[p].xv)}});
      in_sub += subgraph_triangles(c, p).size();
    }
    j["categories"].push_back(cj);
  }
  j["triangles"] = {{"remainder", D.remainder.size()}, {"subgraphs", in_sub}, {"total", D.remainder.size() + in_sub}};
  return j;
}

std::vector<Triangle> loaded_triangles(const json& j, std::size_t n1, std::size_t n2, std::size_t n3,
                                       std::vector<Triangle>& remainder) {
  for (const auto& t : j.at("remainder")) {
    if (!t.is_array() || t.size() != 3) throw ParseError("remainder: malformed triangle");
    Triangle tri{t[0].get<std::size_t>(), t[1].get<std::size_t>(), t[2].get<std::size_t>()};
    if (tri[0] >= n1 || tri[1] >= n2 || tri[2] >= n3) throw ParseError("remainder: triangle out of range");
    remainder.push_back(tri);
  }
  std::vector<Triangle> sub;
  std::size_t ci = 0;
  for (const auto& cj : j.at("categories")) {
    std::string where = "categories[" + std::to_string(ci++) + "]";
    TriCategory c;
    c.k0 = cj.at("k0").get<std::size_t>();
    c.uv = cells_bool(cj.at("uv"), n1, n3, where + ".uv");
    for (const auto& sj : cj.at("subgraphs"))
      c.subgraphs.push_back({cells_bool(sj.at("ux"), n1, n2, where + ".ux"), cells_bool(sj.at("xv"), n2, n3, where + ".xv")});
    for (std::size_t p = 0; p < c.subgraphs.size(); ++p)
      for (const auto& t : subgraph_triangles(c, p)) sub.push_back(t);
  }
  return sub;
}

// Purity of subgraph triangles plus disjoint completeness against the brute list.
json check_triangles(const TripartiteGraph& G, ExtInt target, const std::vector<Triangle>& remainder,
                     const std::vector<Triangle>& sub) {
  std::map<Triangle, int> seen;
  bool pure = true;
  for (const auto& t : remainder) ++seen[t];
  for (const auto& t : sub) {
    pure = pure && G.has(t[0], t[1], t[2]) && G.weight(t[0], t[1], t[2]) == target;
    ++seen[t];
  }
  auto ref = oracle::brute_zero_triangle_list(G, target);
  bool complete = seen.size() == ref.size(), disjoint = true;
  for (const auto& t : ref) {
    auto it = seen.find({t[0], t[1], t[2]});
    complete = complete && it != seen.end();
    disjoint = disjoint && (it == seen.end() || it->second == 1);
  }
  return {{"pure", pure}, {"complete", complete}, {"disjoint", disjoint}, {"brute_triangles", ref.size()},
          {"ok", pure && complete && disjoint}};
}

int cmd_decompose(const std::string& graph, ExtInt target, std::size_t s, const std::string& load, bool verify,
                  const std::string& out) {
  TripartiteGraph G = read_graph(graph);
  json j;
  std::vector<Triangle> remainder, sub;
  if (!load.empty()) {
    j = parse_json_file(load);
    try {
      if (j.at("n1") != G.n1() || j.at("n2") != G.n2() || j.at("n3") != G.n3())
        throw ParseError("dimensions do not match the graph");
      target = j.at("target").get<ExtInt>();
      sub = loaded_triangles(j, G.n1(), G.n2(), G.n3(), remainder);
    } catch (const json::exception& e) {
      throw ParseError(load + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError(load + ": " + e.what());
    }
    verify = true;
  } else {
    if (s < 1 || s > G.n2()) throw UsageError("--s must lie in [1, n2]");
    auto D = triangle_decomposition(G, target, s);
    j = decomposition_json(G, D);
    remainder = D.remainder;
    for (const auto& c : D.categories)
      for (std::size_t p = 0; p < c.subgraphs.size(); ++p)
        for (const auto& t : subgraph_triangles(c, p)) sub.push_back(t);
  }
  bool ok = true;
  if (verify) {
    j["verify"] = check_triangles(G, target, remainder, sub);
    ok = j["verify"]["ok"];
  }
  emit(j, out);
  return ok ? 0 : 1;
}

// ----------------------------------------------------------------- cover

IndexedSet read_indexed(const std::string& path) {
  json j = parse_json_file(path);
  try {
    std::vector<ExtInt> v;
    for (const auto& e : j.at("vals")) {
      if (e.is_string() && e.get<std::string>() == "inf")
        v.push_back(INF);
      else if (e.is_number_integer())
        v.push_back(e.get<ExtInt>());
      else
        throw ParseError("vals[" + std::to_string(v.size()) + "]: not an integer or \"inf\"");
    }
    return IndexedSet(v, j.value("lo", std::int64_t{0}));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json cover_json(const BsgCover& c) {
  json j;
  j["kind"] = "cover";
  j["subsets"] = c.subsets;
  j["remainder"] = json::array();
  for (const auto& [x, y] : c.remainder) j["remainder"].push_back({x, y});
  j["budgets"] = {{"pairs", c.pair_budget}, {"sumset", c.sumset_budget}, {"subsets", c.subset_budget},
                  {"ops", c.op_budget}};
  j["sumset_total"] = c.sumset_total;
  j["sumset_max"] = c.sumset_max;
  j["pair_checks"] = c.pair_checks;
  j["attempts"] = c.attempts;
  j["trivial"] = c.trivial;
  return j;
}

int cmd_cover(const std::string& algo, const std::string& a_path, const std::string& c_path, std::size_t s,
              std::size_t s_hat, std::uint64_t seed, const std::string& load, bool verify, const std::string& out) {
  if (algo != "simple" && algo != "gowers" && algo != "popular") throw UsageError("unknown cover algo '" + algo + "'");
  IndexedSet A = read_indexed(a_path);
  IndexedSet C;
  if (algo != "popular") {
    if (c_path.empty()) throw UsageError("--c is required for the " + algo + " cover");
    C = read_indexed(c_path);
  }
  if (s < 1 || s_hat < 1) throw UsageError("--s and --s-hat must be positive");
  std::vector<std::vector<std::int64_t>> subsets;
  std::vector<oracle::Pair> remainder;
  json j;
  if (!load.empty()) {
    j = parse_json_file(load);
    try {
      subsets = j.at("subsets").get<std::vector<std::vector<std::int64_t>>>();
      for (const auto& p : j.at("remainder")) remainder.push_back({p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()});
    } catch (const json::exception& e) {
      throw ParseError(load + ": " + e.what());
    }
    verify = true;
  } else {
    Rng rng(seed);
    BsgCover cov = algo == "simple"   ? bsg_cover_simple(A, C, s, rng)
                   : algo == "gowers" ? bsg_cover_gowers(A, C, s, rng)
                                      : bsg_cover_popular_fast(A, s, s_hat, rng);
    j = cover_json(cov);
    j["algo"] = algo;
    j["seed"] = seed;
    subsets = cov.subsets;
    remainder.assign(cov.remainder.begin(), cov.remainder.end());
  }
  bool ok = true;
  if (verify) {
    auto need = algo == "popular" ? oracle::brute_popular_pairs(A, A.n() / s) : oracle::brute_qualifying_pairs(A, C);
    bool members = true;
    for (const auto& S : subsets)
      for (auto i : S) members = members && A.has(i);
    auto miss = oracle::brute_cover_check(subsets, remainder, need);
    json v = {{"pairs", need.size()}, {"members_in_A", members}, {"covered", !miss.has_value()}};
    if (miss) v["first_uncovered"] = {miss->first, miss->second};
    ok = members && !miss;
    v["ok"] = ok;
    j["verify"] = v;
  }
  emit(j, out);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- gadget

int cmd_gadget(const std::string& kind, const std::string& a_path, const std::string& b_path, ExtInt y,
               const std::string& tie, bool dump, const std::string& out) {
  Matrix A = read_matrix(a_path), B = read_matrix(b_path);
  if (A.cols() != B.rows()) throw UsageError("inner dimensions of A and B differ");
  json j;
  j["kind"] = "gadget";
  j["gadget"] = kind;
  Matrix decoded, expected;
  if (kind == "minwitness" || kind == "apslp" || kind == "rangemode") {
    if (y < 1) throw UsageError("--y must be positive");
    j["y"] = y;
    expected = minplus_naive(A, B);
    if (kind == "minwitness") {
      auto g = minwitness_gadget(A, B, y);
      j["size"] = {{"inner", g.triples.size()}, {"rows", g.A.rows()}, {"cols", g.B.cols()}};
      if (dump) j["construction"] = {{"A", bool_cells(g.A)}, {"B", bool_cells(g.B)}, {"triples", g.triples}};
      decoded = g.decode(oracle::brute_min_witness(g.A, g.B));
    } else if (kind == "apslp") {
      auto g = apslp_gadget(A, B, y);
      const std::size_t n = g.s.size();
      j["size"] = {{"nodes", g.G.n}, {"edges", g.G.edges.size()}};
      if (dump) {
        json e = json::array();
        for (const auto& ed : g.G.edges) e.push_back({ed.u, ed.v, ed.w});
        j["construction"] = {{"edges", e}, {"s", g.s}, {"t", g.t}};
      }
      Matrix hops(n, n), w(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        auto d = oracle::brute_lex_shortest_path(g.G, g.s[i]);
        for (std::size_t k = 0; k < n; ++k) hops(i, k) = d[g.t[k]].hops, w(i, k) = d[g.t[k]].weight;
      }
      decoded = g.decode(hops, w);
    } else {
      if (tie != "smallest" && tie != "largest") throw UsageError("--tie must be smallest or largest");
      auto g = range_mode_gadget(A, B, y);
      j["size"] = {{"length", g.S.size()}, {"queries", g.queries.size()}};
      j["tie"] = tie;
      if (dump) j["construction"] = {{"S", g.S}, {"queries", g.queries}};
      std::vector<std::uint64_t> f;
      for (auto ans : oracle::brute_range_mode(g.S, g.queries,
                                               tie == "smallest" ? oracle::TieRule::Smallest : oracle::TieRule::Largest))
        f.push_back(ans.freq);
      decoded = g.decode(f);
    }
  } else if (kind == "minequal") {
    auto inst = minwitness_to_minequal(A, B);
    j["size"] = {{"m", inst.m}};
    if (dump) j["construction"] = {{"A", matrix_json(inst.A)}, {"B", matrix_json(inst.B)}};
    decoded = inst.decode(oracle::brute_min_equality(inst.A, inst.B));
    expected = filled(A.rows(), B.cols(), INF);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index k2 = 0; k2 < B.cols(); ++k2)
        for (Eigen::Index k = 0; k < A.cols() && expected(i, k2) == INF; ++k)
          if (A(i, k) != INF && A(i, k) == B(k, k2)) expected(i, k2) = k;
  } else if (kind == "minequalconv") {
    auto inst = minequalprod_to_conv(A, B);
    j["size"] = {{"length", inst.a.size()}};
    if (dump) {
      json aa = json::array(), bb = json::array();
      for (auto v : inst.a) aa.push_back(ext_json(v));
      for (auto v : inst.b) bb.push_back(ext_json(v));
      j["construction"] = {{"a", aa}, {"b", bb}};
    }
    decoded = inst.decode(oracle::brute_min_equal_conv(inst.a, inst.b));
    expected = oracle::brute_min_equality(A, B);
  } else {
    throw UsageError("unknown gadget '" + kind + "'");
  }
  j["decoded"] = matrix_json(decoded);
  j["expected"] = matrix_json(expected);
  j["match"] = decoded == expected;
  emit(j, out);
  return decoded == expected ? 0 : 1;
}

// ----------------------------------------------------------------- count

std::vector<ExtInt> row_of(const Matrix& M, const std::string& name) {
  if (M.rows() != 1) throw UsageError(name + " must be a single-row matrix");
  return std::vector<ExtInt>(M.data(), M.data() + M.cols());
}

std::vector<std::int64_t> finite_row(const Matrix& M, const std::string& name) {
  auto v = row_of(M, name);
  for (auto x : v)
    if (x == INF) throw UsageError(name + " may not contain inf");
  return v;
}

int cmd_count(const std::string& kind, const std::string& a_path, const std::string& b_path,
              const std::string& c_path, const std::string& graph, ExtInt target, std::uint64_t seed, bool verify,
              const std::string& out) {
  Rng rng(seed);
  json j;
  j["kind"] = "count";
  j["problem"] = kind;
  bool ok = true;
  auto need = [](const std::string& path, const char* flag) {
    if (path.empty()) throw UsageError(std::string(flag) + " is required");
    return path;
  };
  if (kind == "minplus") {
    Matrix A = read_matrix(need(a_path, "--a")), B = read_matrix(need(b_path, "--b"));
    if (A.cols() != B.rows()) throw UsageError("inner dimensions of A and B differ");
    auto cnt = count_minplus(A, B, rng);
    j["product"] = matrix_json(minplus_naive(A, B));
    j["counts"] = counts_json(cnt);
    if (verify) ok = cnt == oracle::brute_minplus_witness_counts(A, B);
  } else if (kind == "exact-tri" || kind == "negtri") {
    TripartiteGraph G = read_graph(need(graph, "--graph"));
    CountMatrix cnt;
    if (kind == "exact-tri") {
      j["target"] = target;
      cnt = count_ae_exact_tri(G, target, list_exact_tri_brute);
      if (verify) ok = cnt == oracle::brute_exact_tri_counts(G, target);
    } else {
      cnt = CountMatrix::Zero(G.n1(), G.n3());
      for (const auto& I : negtri_to_exacttri_instances(G)) cnt += count_ae_exact_tri(I.G, I.target, list_exact_tri_brute);
      if (verify) ok = cnt == oracle::brute_negative_triangle_counts(G);
    }
    j["counts"] = counts_json(cnt);
  } else if (kind == "3sum") {
    auto A = finite_row(read_matrix(need(a_path, "--a")), "A"), B = finite_row(read_matrix(need(b_path, "--b")), "B");
    auto C = finite_row(read_matrix(need(c_path, "--c")), "C");
    auto cnt = count_all_nums_3sum(A, B, C, rng);
    j["counts"] = cnt;
    if (verify) ok = cnt == oracle::brute_3sum_counts(A, B, C);
  } else if (kind == "minplus-conv") {
    auto a = row_of(read_matrix(need(a_path, "--a")), "a"), b = row_of(read_matrix(need(b_path, "--b")), "b");
    if (a.size() != b.size()) throw UsageError("a and b must have the same length");
    auto cnt = count_minplus_conv(a, b, list_3sum_conv_brute, rng);
    auto c = minplus_convolution_naive(a, b);
    json cj = json::array();
    for (auto v : c) cj.push_back(ext_json(v));
    j["convolution"] = cj;
    j["counts"] = cnt;
    if (verify) ok = cnt == oracle::brute_3sum_conv_counts(a, b, oracle::brute_minplus_conv(a, b));
  } else if (kind == "apsp") {
    Matrix W = read_matrix(need(a_path, "--a"));
    if (W.rows() != W.cols()) throw UsageError("the weight matrix must be square");
    auto r = apsp_count(W);
    j["dist"] = matrix_json(r.dist);
    j["counts"] = big_json(r.count);
    if (verify) {
      auto ref = oracle::brute_apsp_count(W);
      ok = r.dist == ref.dist && r.count == ref.count;
    }
  } else {
    throw UsageError("unknown count problem '" + kind + "'");
  }
  if (verify) j["verified"] = ok;
  emit(j, out);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fmtk: fine-grained matrix product toolkit"};
  app.require_subcommand(1);
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sc) {
    sc->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { seed = v, seed_given = true; }, "RNG seed (default: FMTK_SEED or 1)");
  };

  std::string suite, scale = "small";
  auto* verify = app.add_subcommand("verify", "Run an oracle-equivalence suite");
  verify->add_option("--suite", suite, "products|witnesses|counting|tridecomp|bsg|gadgets|all")->required();
  verify->add_option("--scale", scale, "small|medium");
  add_seed(verify);
  verify->add_option("--json", out, "Also write the report here");

  std::string algo;
  std::size_t n = 0;
  std::vector<std::string> params;
  auto* bench = app.add_subcommand("bench", "Run one algorithm with counters and wall-clock");
  bench->add_option("--algo", algo, "Algorithm name")->required();
  bench->add_option("--n", n, "Instance size")->required();
  bench->add_option("--params", params, "k=v pairs");
  add_seed(bench);
  bench->add_option("--json", out, "Also write the report here");

  std::string graph, load;
  ExtInt target = 0;
  std::size_t s = 1, s_hat = 2;
  bool check = false;
  auto* decompose = app.add_subcommand("decompose", "Triangle decomposition of a tripartite graph");
  decompose->add_option("--graph", graph, "Graph JSON")->required();
  decompose->add_option("--target", target, "Triangle weight");
  decompose->add_option("--s", s, "Decomposition parameter");
  decompose->add_option("--load", load, "Re-check a dumped decomposition instead of building one");
  decompose->add_flag("--verify", check, "Check purity and completeness against brute force");
  decompose->add_option("--json", out, "Also write the dump here");

  std::string a_path, b_path, c_path, cover_algo = "simple";
  auto* cover = app.add_subcommand("cover", "BSG cover of an indexed set");
  cover->add_option("--algo", cover_algo, "simple|gowers|popular");
  cover->add_option("--a", a_path, "Indexed set JSON")->required();
  cover->add_option("--c", c_path, "Target indexed set JSON");
  cover->add_option("--s", s, "Cover parameter");
  cover->add_option("--s-hat", s_hat, "Second parameter of the popular cover");
  cover->add_option("--load", load, "Re-check a dumped cover instead of building one");
  cover->add_flag("--verify", check, "Check coverage against brute force");
  add_seed(cover);
  cover->add_option("--json", out, "Also write the dump here");

  std::string kind, tie = "smallest";
  ExtInt y = 0;
  bool dump = false;
  auto* gadget = app.add_subcommand("gadget", "Build a reduction gadget, solve it by brute force, decode");
  gadget->add_option("kind", kind, "minwitness|apslp|rangemode|minequal|minequalconv")->required();
  gadget->add_option("--a", a_path, "A matrix")->required();
  gadget->add_option("--b", b_path, "B matrix")->required();
  gadget->add_option("--y", y, "Entry bound");
  gadget->add_option("--tie", tie, "Range-mode tie rule: smallest|largest");
  gadget->add_flag("--dump", dump, "Include the constructed instance");
  gadget->add_option("--json", out, "Also write the result here");

  auto* count = app.add_subcommand("count", "Witness and solution counts");
  count->add_option("problem", kind, "minplus|exact-tri|negtri|3sum|minplus-conv|apsp")->required();
  count->add_option("--a", a_path, "A matrix (or row vector, or arc weights)");
  count->add_option("--b", b_path, "B matrix or row vector");
  count->add_option("--c", c_path, "C row vector");
  count->add_option("--graph", graph, "Graph JSON");
  count->add_option("--target", target, "Triangle weight");
  count->add_flag("--verify", check, "Compare with brute force");
  add_seed(count);
  count->add_option("--json", out, "Also write the result here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (verify->parsed()) return cmd_verify(suite, seed, scale, out);
    if (bench->parsed()) return cmd_bench(algo, n, params, seed, out);
    if (decompose->parsed()) return cmd_decompose(graph, target, s, load, check, out);
    if (cover->parsed()) return cmd_cover(cover_algo, a_path, c_path, s, s_hat, seed, load, check, out);
    if (gadget->parsed()) return cmd_gadget(kind, a_path, b_path, y, tie, dump, out);
    if (count->parsed()) return cmd_count(kind, a_path, b_path, c_path, graph, target, seed, check, out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
