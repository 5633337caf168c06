#include "fmtk/products.hpp"

#include "fmtk/counters.hpp"

#include <algorithm>
#include <bit>

namespace fmtk {

namespace {
void check_inner(const Matrix& A, const Matrix& B, const char* who) {
  if (A.cols() != B.rows())
    throw std::invalid_argument(std::string(who) + ": inner dimensions " + std::to_string(A.cols()) + " and " +
                                std::to_string(B.rows()) + " differ");
}
}  // namespace

Matrix minplus_naive(const Matrix& A, const Matrix& B) {
  check_inner(A, B, "minplus_naive");
  Matrix C = filled(A.rows(), B.cols(), INF);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index k = 0; k < A.cols(); ++k) {
      ExtInt a = A(i, k);
      if (a == INF) continue;
      for (Eigen::Index j = 0; j < B.cols(); ++j) {
        ExtInt b = B(k, j);
        if (b != INF) C(i, j) = std::min(C(i, j), add(a, b));
      }
    }
  counters().matmul_cells += static_cast<std::uint64_t>(A.rows() * A.cols() * B.cols());
  return C;
}

Matrix minplus_bounded(const Matrix& A, const Matrix& B, ExtInt M) {
  check_inner(A, B, "minplus_bounded");
  if (M < 0) throw std::invalid_argument("minplus_bounded: M < 0");
  auto check = [M](const Matrix& X, const char* name) {
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = 0; j < X.cols(); ++j)
        if (X(i, j) != INF && (X(i, j) < 0 || X(i, j) > M))
          throw std::invalid_argument(std::string("minplus_bounded: ") + name + "[" + std::to_string(i) + "," +
                                      std::to_string(j) + "] = " + std::to_string(X(i, j)) + " outside [0, " +
                                      std::to_string(M) + "]");
  };
  check(A, "A");
  check(B, "B");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  const BigNat x = n2 + 1;
  std::vector<BigNat> pw(2 * M + 1);
  pw[0] = 1;
  for (ExtInt e = 1; e <= 2 * M; ++e) pw[e] = pw[e - 1] * x;

  Grid<BigNat> Ae(n1, n2), Be(n2, n3);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k)
      if (A(i, k) != INF) Ae(i, k) = pw[M - A(i, k)];
  for (std::size_t k = 0; k < n2; ++k)
    for (std::size_t j = 0; j < n3; ++j)
      if (B(k, j) != INF) Be(k, j) = pw[M - B(k, j)];

  Matrix C = filled(n1, n3, INF);
  std::uint64_t mults = 0;
  BigNat P;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      P = 0;
      for (std::size_t k = 0; k < n2; ++k) {
        if (A(i, k) == INF || B(k, j) == INF) continue;
        P += Ae(i, k) * Be(k, j);
        ++mults;
      }
      if (P == 0) continue;
      // largest e with x^e <= P
      auto it = std::upper_bound(pw.begin(), pw.end(), P);
      ExtInt d = (it - pw.begin()) - 1;
      C(i, j) = 2 * M - d;
    }
  counters().matmul_cells += n1 * n2 * n3;
  counters().big_digit_ops += mults * static_cast<std::uint64_t>(2 * M + 1);
  return C;
}

CountMatrix dominance_product_naive(const Matrix& A, const Matrix& B) {
  check_inner(A, B, "dominance_product_naive");
  CountMatrix C = CountMatrix::Zero(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      std::uint64_t c = 0;
      for (Eigen::Index k = 0; k < A.cols(); ++k) c += A(i, k) <= B(k, j);
      C(i, j) = c;
    }
  counters().pair_checks += static_cast<std::uint64_t>(A.rows() * A.cols() * B.cols());
  return C;
}

CountMatrix dominance_product(const Matrix& A, const Matrix& B, FreqSplitParams p) {
  check_inner(A, B, "dominance_product");
  if (p.r < 1) throw std::invalid_argument("dominance_product: r < 1");
  if ((A.array() == INF).any() || (B.array() == INF).any())
    throw std::invalid_argument("dominance_product: entries must be finite");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  const std::size_t total = n1 + n3;
  const std::size_t r = std::min(p.r, total);
  const std::size_t bs = ceil_div(total, r);
  const std::size_t W = (n2 + 63) / 64;
  const std::size_t stride = r * W;

  CountMatrix C = CountMatrix::Zero(n1, n3);
  std::vector<std::uint64_t> X(n1 * stride, 0), Y(n3 * stride, 0);
  struct Item {
    ExtInt v;
    std::uint32_t side, id;
  };
  std::vector<Item> items(total);
  std::vector<std::uint32_t> as, bs_list;
  std::uint64_t checks = 0;

  for (std::size_t k = 0; k < n2; ++k) {
    for (std::size_t i = 0; i < n1; ++i) items[i] = {A(i, k), 0, static_cast<std::uint32_t>(i)};
    for (std::size_t j = 0; j < n3; ++j) items[n1 + j] = {B(k, j), 1, static_cast<std::uint32_t>(j)};
    // equal values: A entries first, so a cross-bucket A above B is strictly larger
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.v != b.v) return a.v < b.v;
      if (a.side != b.side) return a.side < b.side;
      return a.id < b.id;
    });
    const std::uint64_t bit = std::uint64_t{1} << (k & 63);
    const std::size_t w = k >> 6;
    for (std::size_t start = 0; start < total; start += bs) {
      std::size_t end = std::min(total, start + bs), bucket = start / bs;
      as.clear();
      bs_list.clear();
      for (std::size_t t = start; t < end; ++t) {
        if (items[t].side == 0) {
          as.push_back(items[t].id);
          X[items[t].id * stride + bucket * W + w] |= bit;
        } else {
          bs_list.push_back(items[t].id);
          std::uint64_t* y = &Y[items[t].id * stride + w];
          for (std::size_t q = 0; q < bucket; ++q) y[q * W] |= bit;
        }
      }
      for (auto i : as)
        for (auto j : bs_list) C(i, j) += A(i, k) <= B(k, j);
      checks += as.size() * bs_list.size();
    }
  }
  for (std::size_t i = 0; i < n1; ++i) {
    const std::uint64_t* x = &X[i * stride];
    for (std::size_t j = 0; j < n3; ++j) {
      const std::uint64_t* y = &Y[j * stride];
      std::uint64_t c = 0;
      for (std::size_t q = 0; q < stride; ++q) c += std::popcount(x[q] & y[q]);
      C(i, j) += c;
    }
  }
  counters().pair_checks += checks;
  counters().bool_word_ops += n1 * n3 * stride;
  return C;
}

namespace {
// Per inner index k: the finite entries of row k of B grouped by value, and the
// high-frequency values (frequency above n3/r).
struct RowGroups {
  std::vector<std::pair<ExtInt, std::uint32_t>> entries;  // sorted (value, j)
  std::vector<ExtInt> heavy;                             // sorted
  std::pair<std::size_t, std::size_t> range(ExtInt v) const {
    auto lo = std::lower_bound(entries.begin(), entries.end(), std::make_pair(v, std::uint32_t{0}));
    auto hi = std::lower_bound(lo, entries.end(), std::make_pair(v, std::uint32_t{0xffffffffu}));
    return {static_cast<std::size_t>(lo - entries.begin()), static_cast<std::size_t>(hi - entries.begin())};
  }
  bool is_heavy(ExtInt v) const { return std::binary_search(heavy.begin(), heavy.end(), v); }
};

std::vector<RowGroups> group_rows(const Matrix& B, std::size_t r) {
  const std::size_t n2 = B.rows(), n3 = B.cols();
  std::vector<RowGroups> g(n2);
  for (std::size_t k = 0; k < n2; ++k) {
    auto& e = g[k].entries;
    for (std::size_t j = 0; j < n3; ++j)
      if (B(k, j) != INF) e.push_back({B(k, j), static_cast<std::uint32_t>(j)});
    std::sort(e.begin(), e.end());
    for (std::size_t s = 0; s < e.size();) {
      std::size_t t = s;
      while (t < e.size() && e[t].first == e[s].first) ++t;
      if ((t - s) * r > n3) g[k].heavy.push_back(e[s].first);
      s = t;
    }
  }
  return g;
}

// Expanded middle index (k, value) over the heavy values of each row.
struct Expanded {
  std::vector<std::size_t> base;  // base[k] = first column of k's block
  std::size_t size = 0;
};
Expanded expand(const std::vector<RowGroups>& g) {
  Expanded x;
  x.base.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    x.base[k] = x.size;
    x.size += g[k].heavy.size();
  }
  return x;
}

std::size_t heavy_slot(const RowGroups& g, ExtInt v) {
  return static_cast<std::size_t>(std::lower_bound(g.heavy.begin(), g.heavy.end(), v) - g.heavy.begin());
}
}  // namespace

CountMatrix equality_product(const Matrix& A, const Matrix& B, FreqSplitParams p) {
  check_inner(A, B, "equality_product");
  if (p.r < 1) throw std::invalid_argument("equality_product: r < 1");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  auto g = group_rows(B, p.r);
  auto ex = expand(g);
  CountMatrix C = CountMatrix::Zero(n1, n3);
  BoolMatrix X(n1, ex.size), Y(ex.size, n3);
  std::uint64_t checks = 0;
  for (std::size_t k = 0; k < n2; ++k) {
    for (std::size_t i = 0; i < n1; ++i) {
      ExtInt a = A(i, k);
      if (a == INF) continue;
      if (g[k].is_heavy(a)) {
        X.set(i, ex.base[k] + heavy_slot(g[k], a));
        continue;
      }
      auto [lo, hi] = g[k].range(a);
      for (std::size_t t = lo; t < hi; ++t) ++C(i, g[k].entries[t].second);
      checks += hi - lo;
    }
    for (auto [v, j] : g[k].entries)
      if (g[k].is_heavy(v)) Y.set(ex.base[k] + heavy_slot(g[k], v), j);
  }
  if (ex.size) C += bool_count_product(X, Y);
  counters().pair_checks += checks;
  return C;
}

Matrix generalized_equality_product(const Matrix& A, const Matrix& Ap, const Matrix& B, const Matrix& Bp,
                                    FreqSplitParams p, ExtInt ell) {
  check_inner(A, B, "generalized_equality_product");
  require_shape(Ap.rows() == A.rows() && Ap.cols() == A.cols(), "generalized_equality_product: A' shape");
  require_shape(Bp.rows() == B.rows() && Bp.cols() == B.cols(), "generalized_equality_product: B' shape");
  if (p.r < 1) throw std::invalid_argument("generalized_equality_product: r < 1");
  if (ell < 0) throw std::invalid_argument("generalized_equality_product: ell < 0");
  auto check = [ell](const Matrix& X, const char* name) {
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = 0; j < X.cols(); ++j)
        if (X(i, j) != INF && (X(i, j) < -ell || X(i, j) > ell))
          throw std::invalid_argument(std::string("generalized_equality_product: ") + name + "[" + std::to_string(i) +
                                      "," + std::to_string(j) + "] outside [-" + std::to_string(ell) + ", " +
                                      std::to_string(ell) + "]");
  };
  check(Ap, "A'");
  check(Bp, "B'");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  auto g = group_rows(B, p.r);
  auto ex = expand(g);
  Matrix E = filled(n1, n3, INF);
  Matrix Ah = filled(n1, ex.size, INF), Bh = filled(ex.size, n3, INF);
  std::uint64_t checks = 0;
  for (std::size_t k = 0; k < n2; ++k) {
    for (std::size_t i = 0; i < n1; ++i) {
      ExtInt a = A(i, k);
      if (a == INF) continue;
      if (g[k].is_heavy(a)) {
        if (Ap(i, k) != INF) Ah(i, ex.base[k] + heavy_slot(g[k], a)) = Ap(i, k) + ell;
        continue;
      }
      auto [lo, hi] = g[k].range(a);
      for (std::size_t t = lo; t < hi; ++t) {
        std::size_t j = g[k].entries[t].second;
        E(i, j) = std::min(E(i, j), add(Ap(i, k), Bp(k, j)));
      }
      checks += hi - lo;
    }
    for (auto [v, j] : g[k].entries)
      if (g[k].is_heavy(v) && Bp(k, j) != INF) Bh(ex.base[k] + heavy_slot(g[k], v), j) = Bp(k, j) + ell;
  }
  if (ex.size) {
    Matrix H = minplus_bounded(Ah, Bh, 2 * ell);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j)
        if (H(i, j) != INF) E(i, j) = std::min(E(i, j), H(i, j) - 2 * ell);
  }
  counters().pair_checks += checks;
  return E;
}

Matrix min_witness_product(const BoolMatrix& A, const BoolMatrix& B) {
  require_shape(A.cols() == B.rows(), "min_witness_product inner dims");
  BoolMatrix Bt = B.transpose();
  Matrix C = filled(A.rows(), B.cols(), INF);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j)
      for (std::size_t w = 0; w < A.words(); ++w) {
        std::uint64_t x = A.row(i)[w] & Bt.row(j)[w];
        if (x) {
          C(i, j) = static_cast<ExtInt>(w * 64 + std::countr_zero(x));
          break;
        }
      }
  return C;
}

Matrix min_equality_product(const Matrix& A, const Matrix& B) {
  check_inner(A, B, "min_equality_product");
  Matrix C = filled(A.rows(), B.cols(), INF);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index k = 0; k < A.cols(); ++k) {
      ExtInt a = A(i, k);
      if (a == INF) continue;
      for (Eigen::Index j = 0; j < B.cols(); ++j)
        if (B(k, j) == a) C(i, j) = std::min(C(i, j), a);
    }
  return C;
}

namespace {
void check_lengths(std::size_t a, std::size_t b, const char* who) {
  if (a != b)
    throw std::invalid_argument(std::string(who) + ": lengths " + std::to_string(a) + " and " + std::to_string(b) +
                                " differ");
}
}  // namespace

std::vector<ExtInt> min_equal_convolution(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b) {
  check_lengths(a.size(), b.size(), "min_equal_convolution");
  std::size_t n = a.size();
  std::vector<ExtInt> c(n, INF);
  for (std::size_t p = 0; p < n; ++p) {
    if (a[p] == INF) continue;
    for (std::size_t q = 0; p + q + 1 < n; ++q)
      if (b[q] == a[p]) c[p + q + 1] = std::min(c[p + q + 1], a[p]);
  }
  return c;
}

std::vector<ExtInt> minplus_convolution_naive(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b) {
  check_lengths(a.size(), b.size(), "minplus_convolution_naive");
  std::size_t n = a.size();
  std::vector<ExtInt> c(n, INF);
  for (std::size_t p = 0; p < n; ++p) {
    if (a[p] == INF) continue;
    for (std::size_t q = 0; p + q + 1 < n; ++q)
      if (b[q] != INF) c[p + q + 1] = std::min(c[p + q + 1], add(a[p], b[q]));
  }
  return c;
}

std::vector<std::uint64_t> threesum_convolution_counts(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                       const std::vector<ExtInt>& c) {
  check_lengths(a.size(), b.size(), "threesum_convolution_counts");
  check_lengths(a.size(), c.size(), "threesum_convolution_counts");
  std::size_t n = a.size();
  std::vector<std::uint64_t> w(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    if (a[p] == INF) continue;
    for (std::size_t q = 0; p + q + 1 < n; ++q)
      if (b[q] != INF && c[p + q + 1] != INF && add(a[p], b[q]) == c[p + q + 1]) ++w[p + q + 1];
  }
  return w;
}

}  // namespace fmtk
