#include "fmtk/counters.hpp"
#include "fmtk/products.hpp"
#include "fmtk/witnesses.hpp"

#include <algorithm>
#include <cmath>

namespace fmtk {

namespace {

struct Split {
  Matrix hi, lo;  // entry = hi * g + lo
};

Split digits(const Matrix& X, ExtInt g) {
  Split s{filled(X.rows(), X.cols(), INF), filled(X.rows(), X.cols(), INF)};
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    ExtInt v = X.data()[i];
    if (v == INF) continue;
    s.hi.data()[i] = v / g;
    s.lo.data()[i] = v % g;
  }
  return s;
}

// Min-plus of A and B whose entries all have residue < h mod g.
Matrix solve_small_residue(const Matrix& A, const Matrix& B, ExtInt g, KeyReductionParams p, Rng& rng) {
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  const ExtInt t = p.t;
  Split a = digits(A, g), b = digits(B, g);
  MinPlusFn coarse = [t](const Matrix& X, const Matrix& Y) { return minplus_bounded(X, Y, t); };

  const std::size_t cap = ceil_div(n2, p.s);
  WitnessReport rep = list_witnesses_capped(a.hi, b.hi, cap, rng, coarse);
  const Matrix& Cp = rep.C;
  Matrix Cpp = filled(n1, n3, INF);

  std::vector<std::pair<std::size_t, std::size_t>> many;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      if (Cp(i, j) == INF) continue;
      if (rep.truncated(i, j)) {
        many.push_back({i, j});
        continue;
      }
      for (auto k : rep.lists(i, j)) Cpp(i, j) = std::min(Cpp(i, j), add(a.lo(i, k), b.lo(k, j)));
    }

  if (!many.empty()) {
    const double lnN = std::log(static_cast<double>(std::max<std::size_t>(n1 * n2 * n3, 2)));
    const std::size_t hsize = std::min<std::size_t>(n2, static_cast<std::size_t>(std::ceil(4.0 * p.s * lnN)));
    std::vector<std::size_t> H;
    std::vector<std::size_t> anchor(many.size());
    for (int attempt = 0;; ++attempt) {
      if (attempt == 100) throw std::runtime_error("minplus_key_reduction: hitting set resampling exhausted");
      H = rng.sample(n2, hsize);
      bool ok = true;
      for (std::size_t q = 0; q < many.size() && ok; ++q) {
        auto [i, j] = many[q];
        auto it = std::find_if(H.begin(), H.end(), [&](std::size_t k0) { return add(a.hi(i, k0), b.hi(k0, j)) == Cp(i, j); });
        if (it == H.end())
          ok = false;
        else
          anchor[q] = *it;
      }
      if (ok) break;
      ++counters().resamples;
    }
    for (std::size_t k0 : H) {
      bool used = false;
      for (std::size_t q = 0; q < many.size(); ++q) used |= anchor[q] == k0;
      if (!used) continue;
      // Fredman: A'[i,k] + B'[k,j] = A'[i,k0] + B'[k0,j]  iff  A'[i,k] - A'[i,k0] = B'[k0,j] - B'[k,j]
      Matrix Ad = filled(n1, n2, INF), Bd = filled(n2, n3, INF);
      for (std::size_t i = 0; i < n1; ++i)
        if (a.hi(i, k0) != INF)
          for (std::size_t k = 0; k < n2; ++k)
            if (a.hi(i, k) != INF) Ad(i, k) = a.hi(i, k) - a.hi(i, k0);
      for (std::size_t j = 0; j < n3; ++j)
        if (b.hi(k0, j) != INF)
          for (std::size_t k = 0; k < n2; ++k)
            if (b.hi(k, j) != INF) Bd(k, j) = b.hi(k0, j) - b.hi(k, j);
      Matrix E = generalized_equality_product(Ad, a.lo, Bd, b.lo, FreqSplitParams{p.r}, g);
      for (std::size_t q = 0; q < many.size(); ++q)
        if (anchor[q] == k0) Cpp(many[q].first, many[q].second) = E(many[q].first, many[q].second);
    }
  }

  Matrix C = filled(n1, n3, INF);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j)
      if (Cp(i, j) != INF) C(i, j) = add(mul(Cp(i, j), g), Cpp(i, j));
  return C;
}

}  // namespace

Matrix minplus_key_reduction(const Matrix& A, const Matrix& B, ExtInt ell, KeyReductionParams p, Rng& rng) {
  require_shape(A.cols() == B.rows(), "minplus_key_reduction inner dims");
  const std::size_t n2 = A.cols();
  if (ell < 1) throw std::invalid_argument("minplus_key_reduction: ell < 1");
  if (p.s < 1 || p.s > n2) throw std::invalid_argument("minplus_key_reduction: need 1 <= s <= n2");
  if (p.t < 1 || static_cast<ExtInt>(p.t) > ell) throw std::invalid_argument("minplus_key_reduction: need 1 <= t <= ell");
  if (p.r < 1) throw std::invalid_argument("minplus_key_reduction: r < 1");
  for (const Matrix* X : {&A, &B})
    for (Eigen::Index i = 0; i < X->rows(); ++i)
      for (Eigen::Index j = 0; j < X->cols(); ++j) {
        ExtInt v = (*X)(i, j);
        if (v != INF && (v < 0 || v > ell))
          throw std::invalid_argument(std::string("minplus_key_reduction: ") + (X == &A ? "A" : "B") + "[" +
                                      std::to_string(i) + "," + std::to_string(j) + "] = " + std::to_string(v) +
                                      " outside [0, " + std::to_string(ell) + "]");
      }

  const ExtInt g = ceil_div(ell, p.t);
  if (g == 1) return minplus_bounded(A, B, ell);
  const ExtInt h = ceil_div(g, 2);

  // residue < h stays; residue >= h is shifted down by h
  auto halves = [&](const Matrix& X) {
    std::pair<Matrix, Matrix> r{filled(X.rows(), X.cols(), INF), filled(X.rows(), X.cols(), INF)};
    for (Eigen::Index i = 0; i < X.size(); ++i) {
      ExtInt v = X.data()[i];
      if (v == INF) continue;
      if (v % g < h)
        r.first.data()[i] = v;
      else
        r.second.data()[i] = v - h;
    }
    return r;
  };
  auto [Alo, Ahi] = halves(A);
  auto [Blo, Bhi] = halves(B);
  Matrix C = filled(A.rows(), B.cols(), INF);
  const Matrix* As[2] = {&Alo, &Ahi};
  const Matrix* Bs[2] = {&Blo, &Bhi};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      Matrix part = solve_small_residue(*As[x], *Bs[y], g, p, rng);
      ExtInt off = (x ? h : 0) + (y ? h : 0);
      for (Eigen::Index i = 0; i < C.size(); ++i)
        if (part.data()[i] != INF) C.data()[i] = std::min(C.data()[i], part.data()[i] + off);
    }
  return C;
}

}  // namespace fmtk
