#pragma once

#include "fmtk/foundation.hpp"

#include <functional>

namespace fmtk {

inline constexpr std::int64_t NOT_UNIQUE = -1;
inline constexpr std::int64_t NO_WITNESS = -2;

using MinPlusFn = std::function<Matrix(const Matrix&, const Matrix&)>;

// One min-plus product per index bit class. Every returned index is a verified
// witness; cells whose bits do not assemble into one get NOT_UNIQUE.
IndexMatrix unique_witness_matrix(const Matrix& A, const Matrix& B, const MinPlusFn& mp = {});

struct WitnessReport {
  Matrix C;                                 // the min-plus product
  Grid<std::vector<std::size_t>> lists;     // sorted witness indices
  Grid<char> truncated;
  std::size_t cap = 0;
  std::size_t rounds = 0;
};

// Random restrictions of the inner index at geometric scales, each followed by
// unique-witness recovery. Lists of length <= cap are complete; longer ones are
// cut to their smallest cap entries and flagged.
WitnessReport list_witnesses_capped(const Matrix& A, const Matrix& B, std::size_t cap, Rng& rng,
                                    const MinPlusFn& mp = {});

// Greedy: repeatedly take the element hitting most remaining sets, smallest on ties.
std::vector<std::size_t> greedy_hitting_set(const std::vector<std::vector<std::size_t>>& sets);

}  // namespace fmtk
