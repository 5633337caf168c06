#pragma once

#include "fmtk/foundation.hpp"

namespace fmtk {

struct FreqSplitParams {
  std::size_t r = 1;
};

struct KeyReductionParams {
  std::size_t s = 1, t = 1, r = 1;
};

Matrix minplus_naive(const Matrix& A, const Matrix& B);
// Encodes a as x^(M-a), x = n2+1, and reads the top digit of one exact product.
Matrix minplus_bounded(const Matrix& A, const Matrix& B, ExtInt M);

CountMatrix dominance_product(const Matrix& A, const Matrix& B, FreqSplitParams p);
// Textbook i-j-k loop, the baseline for benchmarks.
CountMatrix dominance_product_naive(const Matrix& A, const Matrix& B);
CountMatrix equality_product(const Matrix& A, const Matrix& B, FreqSplitParams p);
// E[i,j] = min over {k : A[i,k] = B[k,j]} of A'[i,k] + B'[k,j]
Matrix generalized_equality_product(const Matrix& A, const Matrix& Ap, const Matrix& B, const Matrix& Bp,
                                    FreqSplitParams p, ExtInt ell);

Matrix min_witness_product(const BoolMatrix& A, const BoolMatrix& B);
Matrix min_equality_product(const Matrix& A, const Matrix& B);

// 1-based sequences in 0-based storage: c[m] ranges over p + q = m - 1.
std::vector<ExtInt> min_equal_convolution(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b);
std::vector<ExtInt> minplus_convolution_naive(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b);
std::vector<std::uint64_t> threesum_convolution_counts(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                       const std::vector<ExtInt>& c);

struct SumsetOptions {
  std::size_t direct_threshold = 4096;  // |A|*|B| at or below this uses the direct product
  bool force_fft = false;
};
std::vector<std::int64_t> sumset_direct(std::vector<std::int64_t> A, std::vector<std::int64_t> B);
std::vector<std::int64_t> sumset(std::vector<std::int64_t> A, std::vector<std::int64_t> B, Rng& rng,
                                 SumsetOptions opt = {});

// Entries in [0, ell] or INF.
Matrix minplus_key_reduction(const Matrix& A, const Matrix& B, ExtInt ell, KeyReductionParams params, Rng& rng);

}  // namespace fmtk
