#pragma once

#include "agfti/common.hpp"

namespace agfti {

/// Euclidean projection of v onto the probability simplex
/// { x : x >= 0, sum(x) = 1 }.
///
/// Sort-based threshold method, O(m log m). Equal entries are ordered by
/// their original index so the result is platform independent. The kept
/// entries are renormalized by their exact sum afterwards, which keeps row
/// sums at 1 to within a few ulps.
///
/// Throws InvalidArgument for empty or non-finite input.
Vector project_simplex(const Eigen::Ref<const Vector>& v);

/// In-place variant used by the row-wise solvers.
void project_simplex_inplace(Eigen::Ref<Vector> v);

/// Projects every row of target onto the simplex independently.
RowMatrix prox_rows(const RowMatrix& target);

/// True when every entry is >= 0 and the entries sum to 1 within tol.
bool on_simplex(const Eigen::Ref<const Vector>& x, double tol = 1e-10);

/// Row-wise on_simplex over a whole matrix.
bool rows_on_simplex(const RowMatrix& m, double tol = 1e-10);

}  // namespace agfti
