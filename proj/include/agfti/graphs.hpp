#pragma once

#include "agfti/common.hpp"

#include <cstdint>
#include <vector>

namespace agfti {

/// Anchors of one view, one row per anchor.
struct AnchorSet {
  Matrix points;  ///< m x d_v
  int view = 0;
  /// Row indices (into the matrix handed to bkhk_anchors) of the samples in
  /// each leaf, in anchor order.
  std::vector<std::vector<Index>> leaves;
};

/// Sample-to-anchor similarity graph of one view. Rows of Z are on the
/// simplex; rows listed in `existing` come from the closed-form construction,
/// rows in `missing` are imputed by the solver.
struct BipartiteGraph {
  RowMatrix Z;  ///< n x m
  int view = 0;
  std::vector<Index> existing;  ///< sorted
  std::vector<Index> missing;   ///< sorted, complement of existing
};

inline constexpr Index kDefaultNeighbors = 7;

/// Balanced hierarchical two-means over the rows of x, to depth log2(m).
///
/// Every internal node is split into halves whose sizes differ by at most one.
/// The two initial centers of a node are the farthest pair among up to 32
/// seeded random candidates; assignments are refined by sorting samples on
/// ||x - c1||^2 - ||x - c2||^2 (ties by position) and cutting at the median,
/// until they stop changing. Leaf centroids are the anchors, returned in
/// left-to-right leaf order. Each node draws from its own stream derived from
/// (seed, node id), so the result depends only on (x, m, seed).
///
/// Throws InvalidArgument if m is not a power of two or exceeds x.rows().
AnchorSet bkhk_anchors(const Matrix& x, Index m, std::uint64_t seed, int view = 0);

/// Closed-form k-nearest-anchor weights for every row of x.
///
/// With squared distances sorted d_(1) <= ... <= d_(m) (ties by anchor index),
/// the weight to the j-th nearest anchor, j <= k, is
///     (d_(k+1) - d_(j)) / (k d_(k+1) - sum_{h<=k} d_(h)),
/// and zero beyond the k-th. If the denominator vanishes (the k + 1 nearest
/// distances coincide) the row falls back to 1/k on the k nearest anchors.
///
/// Requires 1 <= k < m.
RowMatrix build_bipartite(const Matrix& x, const AnchorSet& anchors, Index k);

/// `count` rows of the uniform distribution 1/m.
RowMatrix init_missing_rows(Index count, Index m);

/// Assembles an n x m graph from the rows built for `existing` samples; the
/// remaining rows are initialized uniform.
BipartiteGraph assemble_graph(Index n, const RowMatrix& existing_rows,
                              const std::vector<Index>& existing, int view);

/// Z~ = sum_v alpha_v^2 Z_v T_v.
RowMatrix weighted_fusion_input(const std::vector<RowMatrix>& z, const std::vector<Matrix>& t,
                                const Vector& alpha);

}  // namespace agfti
