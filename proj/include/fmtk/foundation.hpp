#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmtk {

using ExtInt = std::int64_t;
inline constexpr ExtInt INF = std::numeric_limits<ExtInt>::max();

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool finite(ExtInt x) { return x != INF; }

// INF absorbs; finite results that leave the 64-bit range throw.
inline ExtInt add(ExtInt a, ExtInt b) {
  if (a == INF || b == INF) return INF;
  ExtInt r;
  if (__builtin_add_overflow(a, b, &r) || r == INF) throw OverflowError("ExtInt add overflow");
  return r;
}
inline ExtInt add(ExtInt a, ExtInt b, ExtInt c) { return add(add(a, b), c); }
inline ExtInt sub(ExtInt a, ExtInt b) {
  if (a == INF) return INF;
  if (b == INF) throw OverflowError("ExtInt sub of INF");
  ExtInt r;
  if (__builtin_sub_overflow(a, b, &r) || r == INF) throw OverflowError("ExtInt sub overflow");
  return r;
}
inline ExtInt mul(ExtInt a, ExtInt b) {
  if (a == INF || b == INF) return INF;
  ExtInt r;
  if (__builtin_mul_overflow(a, b, &r) || r == INF) throw OverflowError("ExtInt mul overflow");
  return r;
}
inline ExtInt neg(ExtInt a) {
  if (a == INF || a == std::numeric_limits<ExtInt>::min()) throw OverflowError("ExtInt neg");
  return -a;
}

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Matrix = Mat<ExtInt>;
using CountMatrix = Mat<std::uint64_t>;
using IndexMatrix = Mat<std::int64_t>;
using BigNat = boost::multiprecision::cpp_int;

Matrix make_matrix(std::initializer_list<std::initializer_list<ExtInt>> rows);
Matrix filled(Eigen::Index r, Eigen::Index c, ExtInt v);
void require_shape(bool ok, const char* what);

// Row-major dense grid for element types Eigen should not touch.
template <class T>
struct Grid {
  std::size_t rows = 0, cols = 0;
  std::vector<T> data;
  Grid() = default;
  Grid(std::size_t r, std::size_t c, const T& v = T()) : rows(r), cols(c), data(r * c, v) {}
  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  bool operator==(const Grid&) const = default;
};
using BigMatrix = Grid<BigNat>;

class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols);
  static BoolMatrix from(std::initializer_list<std::initializer_list<int>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words() const { return words_; }
  bool get(std::size_t i, std::size_t j) const { return (row(i)[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t i, std::size_t j, bool v = true);
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
  BoolMatrix transpose() const;
  std::size_t count() const;
  bool padding_clear() const;
  bool operator==(const BoolMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// C[i,j] = |row_i(A) & col_j(B)|, bit-packed.
CountMatrix bool_count_product(const BoolMatrix& A, const BoolMatrix& B);
BoolMatrix bool_product(const BoolMatrix& A, const BoolMatrix& B);

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t next() { return eng_(); }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n);
  // uniform in [lo, hi]
  std::int64_t range(std::int64_t lo, std::int64_t hi);
  bool coin(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
  Rng split(std::uint64_t k) const;
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
  // k distinct values from [0, n), sorted.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::uint64_t seed_, stream_;
  std::mt19937_64 eng_;
};

struct IndexedSet {
  std::int64_t lo = 0;  // index of vals[0]
  std::vector<ExtInt> vals;

  IndexedSet() = default;
  explicit IndexedSet(std::vector<ExtInt> v, std::int64_t origin = 0) : lo(origin), vals(std::move(v)) {}
  std::size_t n() const { return vals.size(); }
  std::int64_t hi() const { return lo + static_cast<std::int64_t>(vals.size()); }
  bool has(std::int64_t i) const { return i >= lo && i < hi() && vals[i - lo] != INF; }
  ExtInt at(std::int64_t i) const { return i >= lo && i < hi() ? vals[i - lo] : INF; }
  bool contains(std::int64_t i, ExtInt v) const { return v != INF && at(i) == v; }
  std::size_t size() const;
};

struct TripartiteGraph {
  Matrix ux, xv, uv;
  TripartiteGraph() = default;
  TripartiteGraph(Matrix a, Matrix b, Matrix c);
  std::size_t n1() const { return ux.rows(); }
  std::size_t n2() const { return ux.cols(); }
  std::size_t n3() const { return xv.cols(); }
  bool has(std::size_t i, std::size_t k, std::size_t j) const {
    return finite(ux(i, k)) && finite(xv(k, j)) && finite(uv(i, j));
  }
  ExtInt weight(std::size_t i, std::size_t k, std::size_t j) const { return add(ux(i, k), xv(k, j), uv(i, j)); }
};

// Undirected weighted multigraph as an edge list.
struct UGraph {
  struct Edge {
    std::size_t u, v;
    ExtInt w;
  };
  std::size_t n = 0;
  std::vector<Edge> edges;
};

bool is_prime(std::uint64_t n);
std::uint64_t random_prime_in(std::uint64_t lo, std::uint64_t hi, Rng& rng);

std::string format_ext(ExtInt v);
ExtInt parse_ext(const std::string& tok);

Matrix parse_matrix(const std::string& text);
std::string format_matrix(const Matrix& M);
Matrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Matrix& M);

std::string format_graph(const TripartiteGraph& G);
TripartiteGraph parse_graph(const std::string& text);
TripartiteGraph read_graph(const std::string& path);

std::string read_file(const std::string& path);

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
inline std::int64_t ceil_div_signed(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }
inline std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
std::uint64_t ceil_log2(std::uint64_t n);
std::uint64_t isqrt_ceil(std::uint64_t n);

}  // namespace fmtk
