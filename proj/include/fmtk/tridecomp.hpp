#pragma once

#include "fmtk/foundation.hpp"

#include <array>
#include <map>
#include <memory>

namespace fmtk {

using Triangle = std::array<std::size_t, 3>;  // (i, k, j)

struct TriSubgraph {
  BoolMatrix ux, xv;  // edge masks, n1 x n2 and n2 x n3
  bool operator==(const TriSubgraph&) const = default;
};

struct TriCategory {
  std::size_t k0 = 0;
  BoolMatrix uv;  // uv edges anchored at k0, shared by every subgraph
  std::vector<TriSubgraph> subgraphs;
  bool operator==(const TriCategory&) const = default;
};

namespace detail {
struct DecompCache;
}

struct TriangleDecomposition {
  std::size_t s = 1, r = 1;
  ExtInt target = 0;
  std::vector<std::size_t> H;  // sorted hitting set
  std::vector<TriCategory> categories;
  std::vector<Triangle> remainder;  // sorted
  std::shared_ptr<const detail::DecompCache> cache;

  std::size_t subgraph_count() const;
  // Structural equality; the cache is ignored.
  bool operator==(const TriangleDecomposition& o) const {
    return s == o.s && r == o.r && target == o.target && H == o.H && categories == o.categories &&
           remainder == o.remainder;
  }
};

// Triangles (i, k, j) with ux + xv + uv = target. Deterministic.
TriangleDecomposition triangle_decomposition(const TripartiteGraph& G, ExtInt target, std::size_t s);
// Same output as a fresh build on G; only uv (and the target) may differ from the build graph.
TriangleDecomposition decomposition_update_uv(const TriangleDecomposition& D, const TripartiteGraph& G);
TriangleDecomposition decomposition_update_uv(const TriangleDecomposition& D, const TripartiteGraph& G, ExtInt target);

// Triangles of one subgraph, in (i, k, j) order.
std::vector<Triangle> subgraph_triangles(const TriCategory& c, std::size_t p);

struct TriMask {
  BoolMatrix ux, xv, uv;
};
TriMask full_mask(const TripartiteGraph& G);

struct PreprocessedExactTri {
  TripartiteGraph G;
  TriangleDecomposition D;
};
PreprocessedExactTri preprocessed_exact_tri_build(const TripartiteGraph& G, std::size_t s);
// Per uv edge: does it lie on a triangle of weight target inside the mask.
BoolMatrix preprocessed_exact_tri_query(PreprocessedExactTri& h, const TriMask& mask, ExtInt target);
// Number of such triangles per uv edge.
CountMatrix preprocessed_exact_tri_count(PreprocessedExactTri& h, const TriMask& mask, ExtInt target);

struct Preprocessed3Sum {
  std::vector<std::int64_t> A, B, C;  // sorted universes
  std::int64_t modulus = 1;           // bucket of x is x mod modulus
  std::size_t q = 1, N = 0;           // inner dimension, convolution length
  struct Instance {
    std::array<std::size_t, 3> layer;  // (rho, sigma, tau)
    TripartiteGraph G;
    std::vector<std::int64_t> ux_elem, xv_elem, uv_elem;  // universe index per edge, -1 for none
    PreprocessedExactTri tri;
  };
  std::vector<Instance> instances;
};
// q = 0 selects ceil(sqrt(N)); s is the decomposition parameter.
Preprocessed3Sum preprocessed_3sum_build(const std::vector<std::int64_t>& A, const std::vector<std::int64_t>& B,
                                         const std::vector<std::int64_t>& C, std::size_t s = 2, std::size_t q = 0);
// counts[idx] = |{(a, b) in A' x B' : a + b = Cq[idx]}|
std::vector<std::uint64_t> preprocessed_3sum_query(Preprocessed3Sum& h, const std::vector<std::int64_t>& Ap,
                                                   const std::vector<std::int64_t>& Bp,
                                                   const std::vector<std::int64_t>& Cq);

struct FunnyResult {
  Matrix C;
  BigMatrix Cp;
};
// C = A * B and Cp[i,j] = sum over witnesses k of Ap[i,k] Bp[k,j]. s = 0 picks ceil(n^(1/4)).
FunnyResult funny_product(const Matrix& A, const BigMatrix& Ap, const Matrix& B, const BigMatrix& Bp,
                          std::size_t s = 0);

struct ApspCount {
  Matrix dist;
  BigMatrix count;
};
// W(u, v) > 0 is the arc weight, INF for none; diagonal ignored.
ApspCount apsp_count(const Matrix& W, std::size_t s = 0);

// |A[i,k+1] - A[i,k]| <= c0 and |B[k+1,j] - B[k,j]| <= c0, all entries finite.
Matrix minplus_bounded_difference(const Matrix& A, const Matrix& B, ExtInt c0, std::size_t ell, std::size_t s);

}  // namespace fmtk
