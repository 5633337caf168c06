#pragma once

#include "fmtk/foundation.hpp"

#include <array>
#include <functional>

namespace fmtk {

// A: n x x, B: x x n, entries in [1, y]. Witness index tau of the Boolean
// product maps back to u + v through the triple list sorted by u + v.
struct MinWitnessGadget {
  BoolMatrix A, B;
  std::vector<std::array<ExtInt, 3>> triples;  // (k, u, v), k 0-based
  Matrix decode(const Matrix& witness) const;
};
MinWitnessGadget minwitness_gadget(const Matrix& A, const Matrix& B, ExtInt y);

// Weights in {1, 2}. Lex (hops, weight) distance from s[i] to t[j] is
// (2y + 2, 2y + 2 + min_k A[i,k] + B[k,j]).
struct ApslpGadget {
  UGraph G;
  std::vector<std::size_t> s, t;
  ExtInt y = 0;
  static std::size_t node_count(std::size_t n, std::size_t x, std::size_t y);
  static std::size_t edge_count(std::size_t n, std::size_t x, std::size_t y);
  // hops(i, j), weight(i, j) of the lex-shortest s[i] -> t[j] path
  Matrix decode(const Matrix& hops, const Matrix& weight) const;
};
ApslpGadget apslp_gadget(const Matrix& A, const Matrix& B, ExtInt y);

// Symbols 0..x-1. queries[i * n + j] is the half-open range of S_ij.
struct RangeModeGadget {
  std::vector<std::int64_t> S;
  std::vector<std::pair<std::size_t, std::size_t>> queries;
  std::size_t n = 0;
  ExtInt y = 0;
  // Uses only the mode's frequency, never its symbol.
  Matrix decode(const std::vector<std::uint64_t>& mode_freq) const;
};
RangeModeGadget range_mode_gadget(const Matrix& A, const Matrix& B, ExtInt y);

// Min-witness equality product (least k with A[i,k] = B[k,j]) as a min-equality
// product. Entries in [1, 2m], m = max dimension; INF entries never match.
struct MinEqualInstance {
  Matrix A, B;
  ExtInt m = 0;
  Matrix decode(const Matrix& C) const;  // 0-based witness indices
};
MinEqualInstance minwitness_to_minequal(const Matrix& A, const Matrix& B);
// Boolean pair as an equality instance: 1 -> 1, 0 -> INF.
std::pair<Matrix, Matrix> bool_as_equality(const BoolMatrix& A, const BoolMatrix& B);

// n x n min-equality product as a min-equal convolution of length 2n^2.
struct MinEqualConvInstance {
  std::vector<ExtInt> a, b;
  std::size_t n = 0;
  Matrix decode(const std::vector<ExtInt>& c) const;
};
MinEqualConvInstance minequalprod_to_conv(const Matrix& A, const Matrix& B);

using MinEqualConvFn = std::function<std::vector<ExtInt>(const std::vector<ExtInt>&, const std::vector<ExtInt>&)>;

struct MinPlusConvParams {
  std::size_t t = 2, s = 2, s_hat = 2;
};
struct MinPlusConvReport {
  std::vector<ExtInt> c;
  std::uint64_t heavy_hits = 0;  // fine digits first found through the cover
  std::uint64_t light_hits = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t rounds = 0;
};
// Min-plus convolution of nonnegative arrays (1-based semantics, same as
// minplus_convolution_naive) through a min-equal convolution oracle.
MinPlusConvReport minplus_conv_via_minequal(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                            const MinEqualConvFn& oracle, MinPlusConvParams p, Rng& rng);

}  // namespace fmtk
