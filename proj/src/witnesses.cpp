#include "fmtk/witnesses.hpp"

#include "fmtk/counters.hpp"
#include "fmtk/products.hpp"

#include <algorithm>
#include <cmath>

namespace fmtk {

namespace {
Matrix run(const MinPlusFn& mp, const Matrix& A, const Matrix& B) { return mp ? mp(A, B) : minplus_naive(A, B); }

// Unique-witness recovery given the product C of (A, B).
IndexMatrix assemble(const Matrix& A, const Matrix& B, const Matrix& C, const MinPlusFn& mp) {
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  IndexMatrix K = IndexMatrix::Zero(n1, n3);
  for (std::uint64_t bit = 0; (std::size_t{1} << bit) < n2; ++bit) {
    std::vector<Eigen::Index> cls;
    for (std::size_t k = 0; k < n2; ++k)
      if ((k >> bit) & 1) cls.push_back(k);
    Matrix Cb = run(mp, A(Eigen::all, cls), B(cls, Eigen::all));
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j)
        if (C(i, j) != INF && Cb(i, j) == C(i, j)) K(i, j) |= std::int64_t{1} << bit;
  }
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      if (C(i, j) == INF) {
        K(i, j) = NO_WITNESS;
        continue;
      }
      std::int64_t k = K(i, j);
      if (k < 0 || static_cast<std::size_t>(k) >= n2 || add(A(i, k), B(k, j)) != C(i, j)) K(i, j) = NOT_UNIQUE;
    }
  return K;
}
}  // namespace

IndexMatrix unique_witness_matrix(const Matrix& A, const Matrix& B, const MinPlusFn& mp) {
  require_shape(A.cols() == B.rows(), "unique_witness_matrix inner dims");
  return assemble(A, B, run(mp, A, B), mp);
}

WitnessReport list_witnesses_capped(const Matrix& A, const Matrix& B, std::size_t cap, Rng& rng,
                                    const MinPlusFn& mp) {
  require_shape(A.cols() == B.rows(), "list_witnesses_capped inner dims");
  if (cap < 1) throw std::invalid_argument("list_witnesses_capped: cap < 1");
  const std::size_t n1 = A.rows(), n2 = A.cols(), n3 = B.cols();
  WitnessReport rep;
  rep.C = run(mp, A, B);
  rep.lists = Grid<std::vector<std::size_t>>(n1, n3);
  rep.truncated = Grid<char>(n1, n3, 0);
  rep.cap = cap;

  const double L = std::log(static_cast<double>(std::max<std::size_t>(n1 * n2 * n3, 2))) + 8.0;
  auto absorb = [&](const std::vector<Eigen::Index>& R) {
    Matrix AR = A(Eigen::all, R), BR = B(R, Eigen::all);
    Matrix CR = run(mp, AR, BR);
    bool any = false;
    for (std::size_t i = 0; i < n1 && !any; ++i)
      for (std::size_t j = 0; j < n3 && !any; ++j) any = CR(i, j) != INF && CR(i, j) == rep.C(i, j);
    ++rep.rounds;
    if (!any) return;
    IndexMatrix K = R.size() == 1 ? IndexMatrix::Zero(n1, n3) : assemble(AR, BR, CR, mp);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n3; ++j) {
        if (CR(i, j) == INF || CR(i, j) != rep.C(i, j) || K(i, j) < 0) continue;
        std::size_t k = R[K(i, j)];
        auto& l = rep.lists(i, j);
        if (std::find(l.begin(), l.end(), k) == l.end()) l.push_back(k);
      }
  };

  // Scale e targets witness sets of size about 2^e: subsets of size n2/2^e make
  // one of them the unique witness with constant probability.
  for (std::size_t e = 0;; ++e) {
    std::size_t z = ceil_div(n2, std::size_t{1} << e);
    std::size_t want = std::min<std::size_t>(std::size_t{1} << e, cap + 1);
    std::size_t rounds = static_cast<std::size_t>(std::ceil(4.0 * static_cast<double>(want) * L));
    if (z == 1 && rounds >= n2) {
      for (std::size_t k = 0; k < n2; ++k) absorb({static_cast<Eigen::Index>(k)});
    } else {
      for (std::size_t t = 0; t < rounds; ++t) {
        auto pick = rng.sample(n2, z);
        absorb(std::vector<Eigen::Index>(pick.begin(), pick.end()));
      }
    }
    if (z == 1) break;
  }

  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n3; ++j) {
      auto& l = rep.lists(i, j);
      std::sort(l.begin(), l.end());
      if (l.size() > cap) {
        l.resize(cap);
        rep.truncated(i, j) = 1;
      }
    }
  return rep;
}

std::vector<std::size_t> greedy_hitting_set(const std::vector<std::vector<std::size_t>>& input) {
  std::vector<std::vector<std::size_t>> sets = input;
  std::size_t n = 0;
  for (auto& s : sets) {
    if (s.empty()) throw std::invalid_argument("greedy_hitting_set: empty set");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (auto x : s) n = std::max(n, x + 1);
  }
  std::vector<std::vector<std::size_t>> owners(n);
  for (std::size_t t = 0; t < sets.size(); ++t)
    for (auto x : sets[t]) owners[x].push_back(t);
  std::vector<std::size_t> deg(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    deg[x] = owners[x].size();
  }
  std::vector<char> hit(sets.size(), 0);
  std::size_t left = sets.size();
  std::vector<std::size_t> H;
  while (left) {
    std::size_t best = static_cast<std::size_t>(std::max_element(deg.begin(), deg.end()) - deg.begin());
    H.push_back(best);
    for (auto t : owners[best]) {
      if (hit[t]) continue;
      hit[t] = 1;
      --left;
      for (auto x : sets[t]) --deg[x];
    }
  }
  std::sort(H.begin(), H.end());
  return H;
}

}  // namespace fmtk
