#pragma once

#include "fmtk/foundation.hpp"

#include <map>
#include <memory>
#include <utility>

namespace fmtk {

using IndexPair = std::pair<std::int64_t, std::int64_t>;  // (j, i): element j minus element i

struct BsgCover {
  std::vector<std::vector<std::int64_t>> subsets;  // sorted A-indices
  std::vector<IndexPair> remainder;                // sorted, unique
  std::uint64_t pair_budget = 0;
  std::uint64_t sumset_budget = 0;  // total, or per subset for the Gowers-style covers
  std::uint64_t subset_budget = 0;
  std::uint64_t sumset_total = 0, sumset_max = 0;
  std::uint64_t pair_checks = 0;  // construction work, verification excluded
  std::uint64_t op_budget = 0;    // popular cover only; 0 means unchecked
  std::size_t attempts = 0;
  bool trivial = false;  // s^4 >= n: every required pair sits in R
};

struct BsgBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |{a in A : a - x in A}| with x = (dx, dv).
std::uint64_t popularity(const IndexedSet& A, std::int64_t dx, ExtInt dv);

// Sorted (a_{i+h} - a_i, i) for every offset h, shared by the covers and the
// randomized preprocessed 3SUM.
struct OffsetTable {
  IndexedSet A;
  std::map<std::int64_t, std::vector<std::pair<ExtInt, std::int64_t>>> lists;
  const std::vector<std::pair<ExtInt, std::int64_t>>& at(std::int64_t h) const;
};
std::shared_ptr<const OffsetTable> offset_table(const IndexedSet& A);

BsgCover bsg_cover_simple(const IndexedSet& A, const IndexedSet& C, std::size_t s, Rng& rng);
BsgCover bsg_cover_simple(const OffsetTable& T, const IndexedSet& C, std::size_t s, Rng& rng);
BsgCover bsg_cover_gowers(const IndexedSet& A, const IndexedSet& C, std::size_t s, Rng& rng);
// Covers {(a, b) : pop_A(a - b) > n / s}. verify = false skips the exhaustive
// Las Vegas check (quadratic).
BsgCover bsg_cover_popular_fast(const IndexedSet& A, std::size_t s, std::size_t s_hat, Rng& rng, bool verify = true);

// |X - X| for a set of indices of A, as indexed pairs.
std::uint64_t difference_set_size(const IndexedSet& A, const std::vector<std::int64_t>& idx, Rng& rng);

struct BsgSingle {
  std::vector<std::int64_t> subset;  // sorted values
  std::int64_t h = 0;
  std::uint64_t diff_size = 0, budget = 0;
  std::size_t draws = 0;
};
// A' = {a in A : a - h in A} for a popular h with |A' - A'| within budget.
BsgSingle bsg_extract_single(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& C, std::size_t s,
                             Rng& rng);

struct Preprocessed3SumRand {
  std::vector<std::int64_t> A, B;  // sorted universes
  std::int64_t modulus = 1;
  std::size_t s = 1;
  struct Part {
    std::size_t rho = 0, sigma = 0;
    // A-layer at index u + R, negated B-layer at index R - 1 - v
    std::vector<std::int64_t> elem;  // universe index per slot: A in [R, 2R), B in [0, R); -1 empty
    std::shared_ptr<const OffsetTable> table;
  };
  std::vector<Part> parts;
  std::uint64_t covers_built = 0, subsets_used = 0, remainder_scanned = 0;
};
// s = 0 picks round(n^(1/6)).
Preprocessed3SumRand preprocessed_3sum_rand_build(const std::vector<std::int64_t>& A,
                                                  const std::vector<std::int64_t>& B, Rng& rng, std::size_t s = 0);
// flags[idx]: some a in A', b in B' has a + b = Cq[idx]. Cq is arbitrary.
std::vector<char> preprocessed_3sum_rand_query(Preprocessed3SumRand& h, const std::vector<std::int64_t>& Ap,
                                               const std::vector<std::int64_t>& Bp,
                                               const std::vector<std::int64_t>& Cq, Rng& rng);

}  // namespace fmtk
