#pragma once

#include "fmtk/foundation.hpp"

namespace fmtk::testing {

inline Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, ExtInt lo, ExtInt hi, unsigned inf_pct = 0) {
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < M.size(); ++i)
    M.data()[i] = inf_pct && rng.below(100) < inf_pct ? INF : rng.range(lo, hi);
  return M;
}

inline std::vector<ExtInt> random_array(Rng& rng, std::size_t n, ExtInt lo, ExtInt hi, unsigned inf_pct = 0) {
  std::vector<ExtInt> v(n);
  for (auto& x : v) x = inf_pct && rng.below(100) < inf_pct ? INF : rng.range(lo, hi);
  return v;
}

inline std::vector<std::int64_t> random_set(Rng& rng, std::size_t n, std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rng.range(lo, hi));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace fmtk::testing
