#pragma once

// Exhaustive reference implementations. Each one transcribes a problem
// definition directly and shares nothing with the fast paths.

#include "fmtk/foundation.hpp"

#include <array>
#include <optional>
#include <utility>

namespace fmtk::oracle {

inline constexpr std::size_t kMaxMatrixDim = 64;
inline constexpr std::size_t kMaxApspNodes = 128;
inline constexpr std::size_t kMaxArray = 1024;
inline constexpr std::size_t kMaxCliqueNodes = 16;

using Triangle = std::array<std::size_t, 3>;  // (i, k, j)
using Pair = std::pair<std::int64_t, std::int64_t>;

Matrix brute_minplus(const Matrix& A, const Matrix& B);
CountMatrix brute_minplus_witness_counts(const Matrix& A, const Matrix& B);
Grid<std::vector<std::size_t>> brute_witness_sets(const Matrix& A, const Matrix& B);

CountMatrix brute_equality(const Matrix& A, const Matrix& B);
CountMatrix brute_dominance(const Matrix& A, const Matrix& B);
Matrix brute_gen_equality(const Matrix& A, const Matrix& Ap, const Matrix& B, const Matrix& Bp);
Matrix brute_min_witness(const BoolMatrix& A, const BoolMatrix& B);
Matrix brute_min_equality(const Matrix& A, const Matrix& B);

// Arrays use 0-based storage of 1-based sequences: position p holds element p+1,
// so c[m] collects pairs (p, q) with p + q = m - 1.
std::vector<ExtInt> brute_minplus_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b);
std::vector<ExtInt> brute_min_equal_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b);
std::vector<std::uint64_t> brute_3sum_conv_counts(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                  const std::vector<ExtInt>& c);

std::vector<Triangle> brute_zero_triangle_list(const TripartiteGraph& G, ExtInt t);
CountMatrix brute_exact_tri_counts(const TripartiteGraph& G, ExtInt t);
CountMatrix brute_negative_triangle_counts(const TripartiteGraph& G);

// counts[idx] = |{(a,b) in A x B : a + b = C[idx]}|
std::vector<std::uint64_t> brute_3sum_counts(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B,
                                             const std::vector<std::int64_t>& C);
std::vector<std::int64_t> brute_sumset(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B);

struct ApspResult {
  Matrix dist;
  BigMatrix count;
};
ApspResult brute_apsp_count(const Matrix& W);

struct ModeAnswer {
  std::int64_t symbol;  // -1 for an empty range
  std::uint64_t freq;
};
enum class TieRule { Smallest, Largest };
// queries are half-open position ranges [lo, hi)
std::vector<ModeAnswer> brute_range_mode(const std::vector<std::int64_t>& S,
                                         const std::vector<std::pair<std::size_t, std::size_t>>& queries,
                                         TieRule rule);

struct HopWeight {
  ExtInt hops, weight;  // INF when unreachable
};
std::vector<HopWeight> brute_lex_shortest_path(const UGraph& G, std::size_t src);

std::uint64_t brute_popularity(const IndexedSet& A, std::int64_t dx, ExtInt dv);
// Ordered pairs (j, i) of A-indices with (j - i, a_j - a_i) in C.
std::vector<Pair> brute_qualifying_pairs(const IndexedSet& A, const IndexedSet& C);
// Ordered pairs (j, i) with pop_A(a_j - a_i) > threshold.
std::vector<Pair> brute_popular_pairs(const IndexedSet& A, std::uint64_t threshold);
// First pair not in R and not inside any subset square.
std::optional<Pair> brute_cover_check(const std::vector<std::vector<std::int64_t>>& subsets,
                                      const std::vector<Pair>& remainder, const std::vector<Pair>& pairs);

BigNat brute_k_clique_count(const Matrix& W, ExtInt t, unsigned k);

}  // namespace fmtk::oracle
