#pragma once

#include <cstdint>

namespace fmtk {

// Per-thread operation counters; reset by callers around a measured region.
struct Counters {
  std::uint64_t pair_checks = 0;
  std::uint64_t matmul_cells = 0;
  std::uint64_t big_digit_ops = 0;
  std::uint64_t bool_word_ops = 0;
  std::uint64_t heavy_path = 0;
  std::uint64_t resamples = 0;
};

inline Counters& counters() {
  thread_local Counters c;
  return c;
}
inline void reset_counters() { counters() = Counters{}; }

}  // namespace fmtk
