#pragma once

#include "fmtk/foundation.hpp"
#include "fmtk/products.hpp"

#include <functional>

namespace fmtk {

// Counts that are only meaningful where valid(i, j) is set.
struct MaskedCounts {
  CountMatrix D;
  Grid<char> valid;
};

// Lists up to cap witnesses of each uv edge (middle nodes of triangles of weight t).
using ExactTriLister = std::function<Grid<std::vector<std::size_t>>(const TripartiteGraph&, ExtInt t, std::size_t cap)>;
// Exact witness counts of a min-plus instance.
using MinPlusCounter = std::function<CountMatrix(const Matrix&, const Matrix&)>;
// Up to cap witnesses u of every 3SUM-convolution target m (a[u] + b[m-1-u] = c[m]).
using ConvLister = std::function<std::vector<std::vector<std::size_t>>(
    const std::vector<ExtInt>&, const std::vector<ExtInt>&, const std::vector<ExtInt>&, std::size_t cap)>;
// Min-plus convolution witness counts per output position.
using ConvCounter = std::function<std::vector<std::uint64_t>(const std::vector<ExtInt>&, const std::vector<ExtInt>&)>;

// Exhaustive listers, the detectors plugged into the equivalence pipelines.
Grid<std::vector<std::size_t>> list_exact_tri_brute(const TripartiteGraph& G, ExtInt t, std::size_t cap);
std::vector<std::vector<std::size_t>> list_3sum_conv_brute(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                           const std::vector<ExtInt>& c, std::size_t cap);

// Per anchor s, equality product of w(i,k)-w(i,s) against w(s,j)-w(k,j).
// valid(i, j) iff some s in S closes a triangle of weight t on (i, j).
MaskedCounts count_exact_tri_via_anchor(const TripartiteGraph& G, ExtInt t, const std::vector<std::size_t>& S,
                                        FreqSplitParams p = {});

// cap = 0 selects ceil(n2 / 2).
CountMatrix count_ae_exact_tri(const TripartiteGraph& G, ExtInt t, const ExactTriLister& lister, std::size_t cap = 0);

// Anchor per (i, j) is the argmin over S of A[i,s] + B[s,j]; valid where that equals C[i,j].
MaskedCounts count_minplus_witnesses_via_hitting(const Matrix& A, const Matrix& B, const std::vector<std::size_t>& S,
                                                 const Matrix& C, FreqSplitParams p = {});
CountMatrix count_minplus(const Matrix& A, const Matrix& B, Rng& rng, std::size_t cap = 0);

// Uniquifies witnesses with A*M + k + 1, then reads each bit of k from a
// column-duplicated instance whose witness count is 1 or 2.
Matrix minplus_from_counting(const Matrix& A, const Matrix& B, const MinPlusCounter& counter);

struct HeavyCounts {
  std::vector<std::uint64_t> count;
  std::vector<char> known;
  std::size_t prime = 0, intervals = 0, unknown_cells = 0;
};
// Counts |W_m| via a random affine remap mod p in [2n, 4n] and one exact
// triangle instance per interval of F_p. Cells the anchors miss are scanned
// directly when m is in `wanted` (empty = every m).
HeavyCounts count_3sum_conv_heavy(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                  const std::vector<ExtInt>& c, std::size_t L, Rng& rng,
                                  const std::vector<std::size_t>& wanted = {});

std::vector<std::uint64_t> count_all_nums_3sum_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                                    const std::vector<ExtInt>& c, const ConvLister& lister, Rng& rng,
                                                    std::size_t cap = 0);
// Witness counts of the min-plus convolution of a and b.
std::vector<std::uint64_t> count_minplus_conv(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                              const ConvLister& lister, Rng& rng, std::size_t cap = 0);
std::vector<ExtInt> minplus_conv_from_counting(const std::vector<ExtInt>& a, const std::vector<ExtInt>& b,
                                               const ConvCounter& counter);

struct ThreeSumStats {
  std::size_t rounds = 0, resamples = 0, instances = 0;
};
// counts[idx] = |{(a, b) in A x B : a + b = C[idx]}| through almost-linear
// hashing into 3SUM-convolution instances.
std::vector<std::uint64_t> count_all_nums_3sum(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B,
                                               const std::vector<std::int64_t>& C, Rng& rng,
                                               ThreeSumStats* stats = nullptr);

struct ExactTriInstance {
  TripartiteGraph G;
  ExtInt target;
};
// Instances whose per-edge exact-triangle counts sum to the per-edge number of
// negative triangles of G.
std::vector<ExactTriInstance> negtri_to_exacttri_instances(const TripartiteGraph& G);

// W symmetric, INF = no edge, diagonal ignored. k in {3, 4, 5}.
BigNat count_exact_k_clique(const Matrix& W, ExtInt t, unsigned k);

struct ApspModResult {
  Matrix dist;
  CountMatrix count;
};
// Shortest-path counts mod U. W(u, v) is the arc weight, INF for none; diagonal ignored.
ApspModResult apsp_count_mod(const Matrix& W, std::uint64_t U, Rng& rng);

}  // namespace fmtk
