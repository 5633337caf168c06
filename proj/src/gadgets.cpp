#include "fmtk/gadgets.hpp"

#include "fmtk/bsg.hpp"
#include "fmtk/counters.hpp"
#include "fmtk/products.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fmtk {

namespace {

void require_range(const Matrix& M, ExtInt lo, ExtInt hi, const char* what) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (M(i, j) < lo || M(i, j) > hi)
        throw std::invalid_argument(std::string(what) + ": entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") = " + format_ext(M(i, j)) + " outside [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
}

void check_gadget_input(const Matrix& A, const Matrix& B, ExtInt y, const char* what) {
  if (A.cols() != B.rows()) throw std::invalid_argument(std::string(what) + ": inner dims");
  if (y < 1) throw std::invalid_argument(std::string(what) + ": y < 1");
  require_range(A, 1, y, what);
  require_range(B, 1, y, what);
}

}  // namespace

MinWitnessGadget minwitness_gadget(const Matrix& A, const Matrix& B, ExtInt y) {
  check_gadget_input(A, B, y, "minwitness_gadget");
  const std::size_t n1 = A.rows(), x = A.cols(), n3 = B.cols();
  MinWitnessGadget g;
  for (std::size_t k = 0; k < x; ++k)
    for (ExtInt u = 1; u <= y; ++u)
      for (ExtInt v = 1; v <= y; ++v) g.triples.push_back({static_cast<ExtInt>(k), u, v});
  std::stable_sort(g.triples.begin(), g.triples.end(),
                   [](const auto& p, const auto& q) { return p[1] + p[2] < q[1] + q[2]; });
  g.A = BoolMatrix(n1, g.triples.size());
  g.B = BoolMatrix(g.triples.size(), n3);
  for (std::size_t tau = 0; tau < g.triples.size(); ++tau) {
    const auto [k, u, v] = g.triples[tau];
    for (std::size_t i = 0; i < n1; ++i)
      if (A(i, k) == u) g.A.set(i, tau);
    for (std::size_t j = 0; j < n3; ++j)
      if (B(k, j) == v) g.B.set(tau, j);
  }
  return g;
}

Matrix MinWitnessGadget::decode(const Matrix& witness) const {
  Matrix C = filled(witness.rows(), witness.cols(), INF);
  for (Eigen::Index i = 0; i < C.rows(); ++i)
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
      ExtInt w = witness(i, j);
      if (w == INF) continue;
      if (w < 0 || static_cast<std::size_t>(w) >= triples.size())
        throw std::invalid_argument("minwitness_gadget decode: witness out of range");
      C(i, j) = triples[w][1] + triples[w][2];
    }
  return C;
}

std::size_t ApslpGadget::node_count(std::size_t n, std::size_t x, std::size_t y) {
  return 2 * n + 2 * x * y + x + 2 * x * y * (y - 1);
}

std::size_t ApslpGadget::edge_count(std::size_t n, std::size_t x, std::size_t y) { return 2 * n * x + 2 * x * y * y; }

ApslpGadget apslp_gadget(const Matrix& A, const Matrix& B, ExtInt y) {
  check_gadget_input(A, B, y, "apslp_gadget");
  if (A.rows() != B.cols()) throw std::invalid_argument("apslp_gadget: A must be n x x and B x x n");
  const std::size_t n = A.rows(), x = A.cols(), Y = y;
  if (x * Y * Y > n)
    throw std::invalid_argument("apslp_gadget: x*y^2 = " + std::to_string(x * Y * Y) + " > n = " + std::to_string(n));
  ApslpGadget g;
  g.y = y;
  std::size_t next = 0;
  auto node = [&] { return next++; };
  for (std::size_t i = 0; i < n; ++i) g.s.push_back(node());
  std::vector<std::vector<std::size_t>> w1(x, std::vector<std::size_t>(Y)), w3 = w1;
  std::vector<std::size_t> w2(x);
  for (std::size_t k = 0; k < x; ++k) {
    for (std::size_t u = 0; u < Y; ++u) w1[k][u] = node();
    w2[k] = node();
    for (std::size_t v = 0; v < Y; ++v) w3[k][v] = node();
  }
  for (std::size_t j = 0; j < n; ++j) g.t.push_back(node());
  auto path = [&](std::size_t from, std::size_t to, std::size_t heavy) {
    // y edges, the first `heavy` of weight 2
    std::size_t cur = from;
    for (std::size_t e = 0; e < Y; ++e) {
      std::size_t nxt = e + 1 == Y ? to : node();
      g.G.edges.push_back({cur, nxt, e < heavy ? 2 : 1});
      cur = nxt;
    }
  };
  for (std::size_t k = 0; k < x; ++k)
    for (std::size_t u = 1; u <= Y; ++u) {
      path(w1[k][u - 1], w2[k], u);
      path(w2[k], w3[k][u - 1], u);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < x; ++k) g.G.edges.push_back({g.s[i], w1[k][A(i, k) - 1], 1});
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < x; ++k) g.G.edges.push_back({w3[k][B(k, j) - 1], g.t[j], 1});
  g.G.n = next;
  return g;
}

Matrix ApslpGadget::decode(const Matrix& hops, const Matrix& weight) const {
  const ExtInt L = 2 * y + 2;
  Matrix C(hops.rows(), hops.cols());
  for (Eigen::Index i = 0; i < C.rows(); ++i)
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
      if (hops(i, j) != L)
        throw std::invalid_argument("apslp_gadget decode: (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") has " + format_ext(hops(i, j)) + " hops, expected " + std::to_string(L));
      C(i, j) = weight(i, j) - L;
    }
  return C;
}

RangeModeGadget range_mode_gadget(const Matrix& A, const Matrix& B, ExtInt y) {
  check_gadget_input(A, B, y, "range_mode_gadget");
  if (A.rows() != B.cols()) throw std::invalid_argument("range_mode_gadget: A must be n x x and B x x n");
  const std::size_t n = A.rows(), x = A.cols();
  RangeModeGadget g;
  g.n = n;
  g.y = y;
  auto emit = [&](std::size_t k, ExtInt reps) { g.S.insert(g.S.end(), reps, static_cast<std::int64_t>(k)); };
  // sigma'_i starts at start_left[i], tau'_j ends at end_right[j]
  std::vector<std::size_t> start_left(n), end_right(n);
  for (std::size_t l = n; l-- > 0;) {
    for (std::size_t k = 0; k < x; ++k) emit(k, A(l, k));
    start_left[l] = g.S.size();
    for (std::size_t k = 0; k < x; ++k) emit(k, y - A(l, k));
  }
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < x; ++k) emit(k, y - B(k, l));
    end_right[l] = g.S.size();
    for (std::size_t k = 0; k < x; ++k) emit(k, B(k, l));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g.queries.push_back({start_left[i], end_right[j]});
  return g;
}

Matrix RangeModeGadget::decode(const std::vector<std::uint64_t>& mode_freq) const {
  if (mode_freq.size() != n * n) throw std::invalid_argument("range_mode_gadget decode: need n^2 answers");
  Matrix C(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      C(i, j) = static_cast<ExtInt>(i + 1 + j + 1) * y - static_cast<ExtInt>(mode_freq[i * n + j]);
  return C;
}

MinEqualInstance minwitness_to_minequal(const Matrix& A, const Matrix& B) {
  require_shape(A.cols() == B.rows(), "minwitness_to_minequal inner dims");
  MinEqualInstance out;
  out.m = std::max<ExtInt>({1, A.rows(), A.cols(), B.cols()});
  const ExtInt top = 2 * out.m;
  for (const Matrix* M : {&A, &B})
    for (Eigen::Index i = 0; i < M->size(); ++i) {
      ExtInt v = M->data()[i];
      if (v != INF && (v < 1 || v > top))
        throw std::invalid_argument("minwitness_to_minequal: entry " + format_ext(v) + " outside [1, " +
                                    std::to_string(top) + "]");
    }
  out.A = A;
  out.B = B;
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (A(i, k) != INF) out.A(i, k) = A(i, k) + top * k;
    for (Eigen::Index j = 0; j < B.cols(); ++j)
      if (B(k, j) != INF) out.B(k, j) = B(k, j) + top * k;
  }
  return out;
}

Matrix MinEqualInstance::decode(const Matrix& C) const {
  Matrix W = C;
  for (Eigen::Index i = 0; i < W.size(); ++i)
    if (W.data()[i] != INF) W.data()[i] = (W.data()[i] - 1) / (2 * m);
  return W;
}

std::pair<Matrix, Matrix> bool_as_equality(const BoolMatrix& A, const BoolMatrix& B) {
  auto conv = [](const BoolMatrix& M) {
    Matrix out = filled(M.rows(), M.cols(), INF);
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j)
        if (M.get(i, j)) out(i, j) = 1;
    return out;
  };
  return {conv(A), conv(B)};
}

MinEqualConvInstance minequalprod_to_conv(const Matrix& A, const Matrix& B) {
  const std::size_t n = A.rows();
  require_shape(A.cols() == static_cast<Eigen::Index>(n) && B.rows() == static_cast<Eigen::Index>(n) &&
                    B.cols() == static_cast<Eigen::Index>(n),
                "minequalprod_to_conv: square n x n inputs");
  const ExtInt N = n;
  require_range(A, 1, 2 * N * N, "minequalprod_to_conv");
  require_range(B, 1, 2 * N * N, "minequalprod_to_conv");
  MinEqualConvInstance out;
  out.n = n;
  out.a.assign(2 * n * n, INF);
  out.b.assign(2 * n * n, INF);
  // 1-based i, j, k: a at (n+1)(i-1) + k, b at jn - k, shifted to 0-based storage
  for (ExtInt i = 1; i <= N; ++i)
    for (ExtInt k = 1; k <= N; ++k) out.a[(N + 1) * (i - 1) + k - 1] = N * A(i - 1, k - 1) + k - 1;
  for (ExtInt k = 1; k <= N; ++k)
    for (ExtInt j = 1; j <= N; ++j) out.b[j * N - k] = N * B(k - 1, j - 1) + k - 1;
  return out;
}

Matrix MinEqualConvInstance::decode(const std::vector<ExtInt>& c) const {
  const ExtInt N = n;
  if (c.size() != 2 * n * n) throw std::invalid_argument("minequalprod_to_conv decode: length must be 2n^2");
  Matrix C(n, n);
  for (ExtInt i = 1; i <= N; ++i)
    for (ExtInt j = 1; j <= N; ++j) {
      ExtInt v = c[(N + 1) * (i - 1) + j * N];
      C(i - 1, j - 1) = v == INF ? INF : v / N;
    }
  return C;
}

namespace {

struct Digits {
  std::vector<char> has;
  std::vector<ExtInt> hi, lo;  // value = hi * g + lo
};

class MinPlusConvSolver {
 public:
  MinPlusConvSolver(const Digits& A, const Digits& B, std::size_t n, ExtInt t, MinPlusConvParams p,
                    const MinEqualConvFn& oracle, Rng& rng, MinPlusConvReport& rep)
      : A_(A), B_(B), n_(n), t_(t), p_(p), oracle_(oracle), rng_(rng), rep_(rep) {
    std::vector<ExtInt> a(n, INF), b(n, INF);
    for (std::size_t i = 0; i < n; ++i) {
      if (A.has[i]) a[i] = A.hi[i];
      if (B.has[i]) b[i] = B.hi[i];
    }
    coarse_ = minplus_convolution_naive(a, b);
    fine_.assign(n, INF);
  }

  const std::vector<ExtInt>& coarse() const { return coarse_; }
  const std::vector<ExtInt>& fine() const { return fine_; }

  void heavy() {
    const std::int64_t n = n_;
    std::vector<ExtInt> vals(3 * n, INF);
    for (std::int64_t i = 0; i < n; ++i) {
      if (A_.has[i]) vals[i] = A_.hi[i];
      if (B_.has[i]) vals[3 * n - 1 - i] = -B_.hi[i];
    }
    IndexedSet S(vals);
    if (S.size() == 0) return;
    BsgCover cov = bsg_cover_popular_fast(S, 2 * p_.s, p_.s_hat, rng_, true);
    for (const auto& [j, i] : cov.remainder)
      if (j < n && i >= 2 * n) offer(j, 3 * n - 1 - i, true);

    ExtInt M = 0;
    for (auto v : vals)
      if (v != INF) M = std::max(M, v < 0 ? -v : v);
    const ExtInt K = 4 * M + 2;
    for (const auto& sub : cov.subsets) {
      std::map<ExtInt, std::vector<std::int64_t>> X, Y;  // by fine digit
      for (auto idx : sub) {
        if (idx < n) X[A_.lo[idx]].push_back(idx * K + vals[idx]);
        if (idx >= 2 * n) Y[B_.lo[3 * n - 1 - idx]].push_back(-(idx * K + vals[idx]));
      }
      for (const auto& [alpha, xs] : X)
        for (const auto& [beta, ys] : Y)
          for (auto d : sumset(xs, ys, rng_)) {
            std::int64_t idx = floor_div(d + K / 2, K);
            ExtInt val = d - idx * K;
            std::int64_t m = idx + 3 * n;
            if (m >= 1 && m < n && coarse_[m] == val) improve(m, alpha + beta, true);
          }
    }
  }

  void light() {
    const std::size_t n = n_;
    const double ns = static_cast<double>(n) / p_.s;
    const std::size_t rounds = static_cast<std::size_t>(
        std::ceil(2.0 * std::numbers::e * ns * std::log(static_cast<double>(n) * n + 2.0)));
    const double keep = std::min(1.0, std::sqrt(static_cast<double>(p_.s) / n));
    const std::uint64_t den = 1u << 20;
    const std::uint64_t num = static_cast<std::uint64_t>(std::llround(keep * den));
    F_.assign((t_ + 1) * (t_ + 1), 0);
    for (auto& f : F_) f = rng_.below(n);
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;

    for (std::size_t r = 0; r < rounds; ++r) {
      ++rep_.rounds;
      std::vector<std::size_t> I, J;
      for (std::size_t i = 0; i < n; ++i) {
        if (A_.has[i] && rng_.coin(num, den)) I.push_back(i);
        if (B_.has[i] && rng_.coin(num, den)) J.push_back(i);
      }
      if (I.empty() || J.empty()) continue;
      auto D = sparse(I, J);
      bool useful = false;
      for (std::size_t m = 0; m < n; ++m) useful |= D[m] != INF && D[m] == coarse_[m];
      if (!useful) continue;
      std::vector<std::size_t> found(n, 0);
      for (unsigned b = 0; b < bits; ++b) {
        std::vector<std::size_t> Ib;
        for (auto i : I)
          if ((i >> b) & 1) Ib.push_back(i);
        if (Ib.empty()) continue;
        auto Db = sparse(Ib, J);
        for (std::size_t m = 0; m < n; ++m)
          if (D[m] != INF && Db[m] == D[m]) found[m] |= std::size_t{1} << b;
      }
      for (std::size_t m = 1; m < n; ++m) {
        if (D[m] == INF || D[m] != coarse_[m]) continue;
        const std::size_t i = found[m];
        if (i + 1 > m) continue;
        const std::size_t q = m - 1 - i;
        if (!std::binary_search(I.begin(), I.end(), i) || !std::binary_search(J.begin(), J.end(), q)) continue;
        offer(i, q, false);
      }
    }
  }

 private:
  void offer(std::size_t i, std::size_t q, bool heavy) {
    const std::size_t m = i + q + 1;
    if (m >= n_ || !A_.has[i] || !B_.has[q]) return;
    if (A_.hi[i] + B_.hi[q] == coarse_[m]) improve(m, A_.lo[i] + B_.lo[q], heavy);
  }
  void improve(std::size_t m, ExtInt v, bool heavy) {
    if (v >= fine_[m]) return;
    if (heavy && fine_[m] == INF) {
      ++rep_.heavy_hits;
      ++counters().heavy_path;
    } else if (!heavy && fine_[m] == INF) {
      ++rep_.light_hits;
    }
    fine_[m] = v;
  }

  // D[m] = min over i in I, q in J with i + q + 1 = m of hi_i + hi_q, via the oracle
  std::vector<ExtInt> sparse(const std::vector<std::size_t>& I, const std::vector<std::size_t>& J) {
    const std::size_t n = n_, L = 3 * n;
    const ExtInt T = t_ + 1;
    auto code = [T](ExtInt x, ExtInt y) { return (x + y) * T + x; };
    std::vector<std::vector<ExtInt>> X(L), Y(L);
    for (auto i : I)
      for (ExtInt y = 0; y <= t_; ++y) {
        ExtInt x = A_.hi[i];
        X[i + F_[x * T + y]].push_back(code(x, y));
      }
    for (auto j : J)
      for (ExtInt x = 0; x <= t_; ++x) {
        ExtInt y = B_.hi[j];
        Y[j + n - F_[x * T + y]].push_back(code(x, y));
      }
    std::size_t la = 0, lb = 0;
    for (std::size_t q = 0; q < L; ++q) {
      la = std::max(la, X[q].size());
      lb = std::max(lb, Y[q].size());
    }
    std::vector<ExtInt> D(n, INF);
    for (std::size_t a = 0; a < la; ++a) {
      std::vector<ExtInt> xa(L, INF);
      for (std::size_t q = 0; q < L; ++q)
        if (a < X[q].size()) xa[q] = X[q][a];
      for (std::size_t b = 0; b < lb; ++b) {
        std::vector<ExtInt> yb(L, INF);
        for (std::size_t q = 0; q < L; ++q)
          if (b < Y[q].size()) yb[q] = Y[q][b];
        auto Z = oracle_(xa, yb);
        ++rep_.oracle_calls;
        if (Z.size() != L) throw std::runtime_error("minplus_conv_via_minequal: oracle returned wrong length");
        for (std::size_t m = 0; m < n; ++m)
          if (Z[m + n] != INF) D[m] = std::min(D[m], Z[m + n] / T);
      }
    }
    return D;
  }

  const Digits &A_, &B_;
  std::size_t n_;
  ExtInt t_;
  MinPlusConvParams p_;
  const MinEqualConvFn& oracle_;
  Rng& rng_;
  MinPlusConvReport& rep_;
  std::vector<ExtInt> coarse_, fine_;
  std::vector<std::size_t> F_;
};

}  // namespace

MinPlusConvReport minplus_conv_via_minequal(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                            const MinEqualConvFn& oracle, MinPlusConvParams p, Rng& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("minplus_conv_via_minequal: length mismatch");
  if (p.t < 1 || p.s < 1 || p.s_hat < 1) throw std::invalid_argument("minplus_conv_via_minequal: t, s, s_hat >= 1");
  const std::size_t n = a.size();
  MinPlusConvReport rep;
  rep.c.assign(n, INF);
  if (n == 0) return rep;
  if (p.t * isqrt_ceil(p.s) > isqrt_ceil(n))
    throw std::invalid_argument("minplus_conv_via_minequal: t*ceil(sqrt(s)) = " +
                                std::to_string(p.t * isqrt_ceil(p.s)) + " > ceil(sqrt(n)) = " +
                                std::to_string(isqrt_ceil(n)));
  ExtInt V = 0;
  for (const auto* arr : {&a, &b})
    for (auto v : *arr) {
      if (v == INF) continue;
      if (v < 0) throw std::invalid_argument("minplus_conv_via_minequal: negative entry " + format_ext(v));
      V = std::max(V, v);
    }
  const ExtInt t = p.t;
  const ExtInt g = std::max<ExtInt>(1, ceil_div(V + 1, t));
  const ExtInt h = ceil_div(g, 2);

  auto split = [&](const std::vector<ExtInt>& arr, int cls) {
    Digits d{std::vector<char>(n, 0), std::vector<ExtInt>(n, 0), std::vector<ExtInt>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
      if (arr[i] == INF || (arr[i] % g >= h) != (cls == 1)) continue;
      ExtInt v = arr[i] - cls * h;
      d.has[i] = 1;
      d.hi[i] = v / g;
      d.lo[i] = v % g;
    }
    return d;
  };

  for (int ca = 0; ca < 2; ++ca)
    for (int cb = 0; cb < 2; ++cb) {
      Digits A = split(a, ca), B = split(b, cb);
      MinPlusConvSolver S(A, B, n, t, p, oracle, rng, rep);
      S.heavy();
      S.light();
      for (std::size_t m = 0; m < n; ++m) {
        if (S.coarse()[m] == INF) continue;
        if (S.fine()[m] == INF)
          throw std::runtime_error("minplus_conv_via_minequal: no witness recovered for position " +
                                   std::to_string(m) + "; sampling or oracle failure");
        rep.c[m] = std::min(rep.c[m], S.coarse()[m] * g + S.fine()[m] + (ca + cb) * h);
      }
    }

  // spot verification
  const std::size_t checks = std::min<std::size_t>(n, std::ceil(4.0 * std::log(n + 2.0)));
  for (auto m : rng.sample(n, checks)) {
    ExtInt best = INF;
    for (std::size_t i = 0; i + 1 <= m; ++i)
      if (a[i] != INF && b[m - 1 - i] != INF) best = std::min(best, a[i] + b[m - 1 - i]);
    if (best != rep.c[m])
      throw std::runtime_error("minplus_conv_via_minequal: spot check failed at position " + std::to_string(m));
  }
  return rep;
}

}  // namespace fmtk
