#include "fmtk/foundation.hpp"
#include "fmtk/counters.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace fmtk {

Matrix make_matrix(std::initializer_list<std::initializer_list<ExtInt>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  Matrix M(r, c);
  std::size_t i = 0;
  for (auto& row : rows) {
    require_shape(row.size() == c, "ragged matrix literal");
    std::size_t j = 0;
    for (ExtInt v : row) M(i, j++) = v;
    ++i;
  }
  return M;
}

Matrix filled(Eigen::Index r, Eigen::Index c, ExtInt v) { return Matrix::Constant(r, c, v); }

void require_shape(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("shape error: ") + what);
}

// ---- BoolMatrix

BoolMatrix::BoolMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * ((cols + 63) / 64), 0) {}

BoolMatrix BoolMatrix::from(std::initializer_list<std::initializer_list<int>> rows) {
  BoolMatrix M(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (auto& row : rows) {
    require_shape(row.size() == M.cols_, "ragged bool literal");
    std::size_t j = 0;
    for (int v : row) M.set(i, j++, v != 0);
    ++i;
  }
  return M;
}

void BoolMatrix::set(std::size_t i, std::size_t j, bool v) {
  std::uint64_t m = std::uint64_t{1} << (j & 63);
  if (v)
    row(i)[j >> 6] |= m;
  else
    row(i)[j >> 6] &= ~m;
}

BoolMatrix BoolMatrix::transpose() const {
  BoolMatrix T(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const std::uint64_t* r = row(i);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t x = r[w];
      while (x) {
        std::size_t j = w * 64 + std::countr_zero(x);
        T.set(j, i);
        x &= x - 1;
      }
    }
  }
  return T;
}

std::size_t BoolMatrix::count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += std::popcount(w);
  return c;
}

bool BoolMatrix::padding_clear() const {
  if (cols_ % 64 == 0) return true;
  std::uint64_t mask = ~((std::uint64_t{1} << (cols_ % 64)) - 1);
  for (std::size_t i = 0; i < rows_; ++i)
    if (row(i)[words_ - 1] & mask) return false;
  return true;
}

CountMatrix bool_count_product(const BoolMatrix& A, const BoolMatrix& B) {
  require_shape(A.cols() == B.rows(), "bool product inner dims");
  BoolMatrix Bt = B.transpose();
  CountMatrix C = CountMatrix::Zero(A.rows(), B.cols());
  std::size_t W = A.words();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const std::uint64_t* a = A.row(i);
    for (std::size_t j = 0; j < B.cols(); ++j) {
      const std::uint64_t* b = Bt.row(j);
      std::uint64_t c = 0;
      for (std::size_t w = 0; w < W; ++w) c += std::popcount(a[w] & b[w]);
      counters().bool_word_ops += W;
      C(i, j) = c;
    }
  }
  return C;
}

BoolMatrix bool_product(const BoolMatrix& A, const BoolMatrix& B) {
  require_shape(A.cols() == B.rows(), "bool product inner dims");
  BoolMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const std::uint64_t* a = A.row(i);
    std::uint64_t* c = C.row(i);
    for (std::size_t w = 0; w < A.words(); ++w) {
      std::uint64_t x = a[w];
      while (x) {
        const std::uint64_t* b = B.row(w * 64 + std::countr_zero(x));
        for (std::size_t v = 0; v < C.words(); ++v) c[v] |= b[v];
        x &= x - 1;
      }
    }
  }
  return C;
}

// ---- Rng

namespace {
std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), eng_(splitmix(seed ^ splitmix(stream + 0x632be59bd9b4e019ull))) {}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = eng_();
  while (x >= limit);
  return x % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::range empty");
  std::uint64_t w = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (w == 0) return static_cast<std::int64_t>(eng_());
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(w));
}

Rng Rng::split(std::uint64_t k) const { return Rng(seed_, splitmix(stream_ * 0x100000001b3ull + k + 1)); }

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  if (k >= n) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  std::unordered_set<std::size_t> seen;
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t t = below(j + 1);
    if (!seen.insert(t).second) seen.insert(j);
  }
  out.assign(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t IndexedSet::size() const {
  return static_cast<std::size_t>(std::count_if(vals.begin(), vals.end(), [](ExtInt v) { return v != INF; }));
}

TripartiteGraph::TripartiteGraph(Matrix a, Matrix b, Matrix c) : ux(std::move(a)), xv(std::move(b)), uv(std::move(c)) {
  require_shape(ux.cols() == xv.rows() && ux.rows() == uv.rows() && xv.cols() == uv.cols(), "tripartite graph parts");
}

// ---- primes

namespace {
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}
}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while (!(d & 1)) d >>= 1, ++r;
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < r && comp; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) comp = false;
    }
    if (comp) return false;
  }
  return true;
}

std::uint64_t random_prime_in(std::uint64_t lo, std::uint64_t hi, Rng& rng) {
  if (lo < 3 || hi < lo) throw std::invalid_argument("random_prime_in: need hi >= lo >= 3");
  std::uint64_t width = hi - lo + 1;
  std::uint64_t off = rng.below(width);
  for (std::uint64_t i = 0; i < width; ++i) {
    std::uint64_t c = lo + (off + i) % width;
    if (is_prime(c)) return c;
  }
  throw std::logic_error("random_prime_in: no prime in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// ---- text formats

std::string format_ext(ExtInt v) { return v == INF ? "inf" : std::to_string(v); }

ExtInt parse_ext(const std::string& tok) {
  if (tok == "inf") return INF;
  ExtInt v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec == std::errc::result_out_of_range || (ec == std::errc() && v == INF))
    throw ParseError("integer out of 64-bit range: " + tok);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError("malformed token: '" + tok + "'");
  return v;
}

namespace {
struct Token {
  std::string text;
  std::size_t line, col;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line, col = 1, ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++col, ++i;
    } else {
      Token t{"", line, col};
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) t.text += s[i++], ++col;
      out.push_back(std::move(t));
    }
  }
  return out;
}

ExtInt token_value(const Token& t) {
  try {
    return parse_ext(t.text);
  } catch (const ParseError& e) {
    throw ParseError("line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ": " + e.what());
  }
}
}  // namespace

Matrix parse_matrix(const std::string& text) {
  auto toks = tokenize(text);
  if (toks.size() < 2) throw ParseError("line 1, column 1: missing 'rows cols' header");
  if (toks[0].line != 1 || toks[1].line != 1) throw ParseError("line 1, column 1: header must be 'rows cols'");
  ExtInt r = token_value(toks[0]), c = token_value(toks[1]);
  if (r < 1 || c < 1 || r == INF || c == INF)
    throw ParseError("line 1, column 1: dimensions must be positive integers");
  std::size_t need = static_cast<std::size_t>(r) * static_cast<std::size_t>(c);
  if (toks.size() - 2 != need) {
    const Token& at = toks.size() - 2 > need ? toks[2 + need] : toks.back();
    throw ParseError("line " + std::to_string(at.line) + ", column " + std::to_string(at.col) +
                     ": dimension mismatch, expected " + std::to_string(need) + " entries, found " +
                     std::to_string(toks.size() - 2));
  }
  Matrix M(r, c);
  for (std::size_t t = 0; t < need; ++t) M(t / c, t % c) = token_value(toks[2 + t]);
  return M;
}

std::string format_matrix(const Matrix& M) {
  std::string s = std::to_string(M.rows()) + " " + std::to_string(M.cols()) + "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) s += ' ';
      s += format_ext(M(i, j));
    }
    s += '\n';
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Matrix read_matrix(const std::string& path) {
  try {
    return parse_matrix(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_matrix(const std::string& path, const Matrix& M) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_matrix(M);
}

namespace {
nlohmann::json matrix_json(const Matrix& M) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (M(i, j) == INF)
        row.push_back("inf");
      else
        row.push_back(M(i, j));
    }
    a.push_back(row);
  }
  return a;
}

Matrix json_matrix(const nlohmann::json& j, std::size_t r, std::size_t c, const char* name) {
  std::string where = std::string("field '") + name + "'";
  if (!j.is_array() || j.size() != r) throw ParseError(where + ": expected " + std::to_string(r) + " rows");
  Matrix M(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c)
      throw ParseError(where + " row " + std::to_string(i) + ": expected " + std::to_string(c) + " entries");
    for (std::size_t k = 0; k < c; ++k) {
      const auto& e = j[i][k];
      if (e.is_string() && e.get<std::string>() == "inf")
        M(i, k) = INF;
      else if (e.is_number_integer() && e.get<ExtInt>() != INF)
        M(i, k) = e.get<ExtInt>();
      else
        throw ParseError(where + " [" + std::to_string(i) + "][" + std::to_string(k) + "]: not an integer or \"inf\"");
    }
  }
  return M;
}
}  // namespace

std::string format_graph(const TripartiteGraph& G) {
  nlohmann::json j;
  j["n1"] = G.n1();
  j["n2"] = G.n2();
  j["n3"] = G.n3();
  j["ux"] = matrix_json(G.ux);
  j["xv"] = matrix_json(G.xv);
  j["uv"] = matrix_json(G.uv);
  return j.dump() + "\n";
}

TripartiteGraph parse_graph(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("graph json: ") + e.what());
  }
  for (const char* k : {"n1", "n2", "n3", "ux", "xv", "uv"})
    if (!j.contains(k)) throw ParseError(std::string("graph json: missing field '") + k + "'");
  auto dim = [&](const char* k) {
    if (!j[k].is_number_unsigned() || j[k].get<std::size_t>() < 1)
      throw ParseError(std::string("graph json: field '") + k + "' must be a positive integer");
    return j[k].get<std::size_t>();
  };
  std::size_t n1 = dim("n1"), n2 = dim("n2"), n3 = dim("n3");
  return TripartiteGraph(json_matrix(j["ux"], n1, n2, "ux"), json_matrix(j["xv"], n2, n3, "xv"),
                         json_matrix(j["uv"], n1, n3, "uv"));
}

TripartiteGraph read_graph(const std::string& path) {
  try {
    return parse_graph(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::uint64_t ceil_log2(std::uint64_t n) {
  std::uint64_t b = 0;
  while ((std::uint64_t{1} << b) < n) ++b;
  return b;
}

std::uint64_t isqrt_ceil(std::uint64_t n) {
  std::uint64_t lo = 0, hi = std::uint64_t{1} << 32;
  while (lo < hi) {
    std::uint64_t m = (lo + hi) / 2;
    if (m * m >= n)
      hi = m;
    else
      lo = m + 1;
  }
  return lo;
}

}  // namespace fmtk
