#pragma once

#include "agfti/common.hpp"

#include <vector>

namespace agfti {

/// Column degrees of P below this are floored and reported as disconnected.
inline constexpr double kDegreeFloor = 1e-12;

/// Label-distance matrix H (n x m) with
///     H_ij = || F_i / sqrt(d_i) - Q_j / sqrt(d_{n+j}) ||^2.
/// Sample degrees d_i are 1 because P is row-stochastic; anchor degrees are
/// the column sums of P.
struct LabelDistance {
  RowMatrix H;
  /// Anchors whose column degree was floored at kDegreeFloor.
  std::vector<Index> disconnected_anchors;
};

/// Column sums of P, floored at kDegreeFloor. Indices of floored columns are
/// appended to `floored` when it is non-null.
Vector anchor_degrees(const RowMatrix& p, std::vector<Index>* floored = nullptr);

LabelDistance compute_H(const Matrix& f, const Matrix& q, const RowMatrix& p);

/// Row-wise maximizer of lambda <P, Z~> - beta_lambda ||P||^2 - <H, P> over
/// row-stochastic P: row i is the simplex projection of
/// (lambda Z~_i - H_i) / (2 beta_lambda).
RowMatrix solve_inner_P(const RowMatrix& ztilde, const RowMatrix& h, double lambda,
                        double beta_lambda);

/// Value of the inner objective at a given P. `zt` holds the products Z_v T_v.
double inner_objective(const RowMatrix& p, const std::vector<RowMatrix>& zt, const Vector& alpha,
                       const RowMatrix& h, double lambda, double beta_lambda);

/// h(alpha) together with the maximizing P, for a fixed H.
struct InnerSolution {
  RowMatrix P;
  double value = 0.0;
};

InnerSolution solve_inner(const std::vector<RowMatrix>& zt, const Vector& alpha,
                          const RowMatrix& h, double lambda, double beta_lambda);

/// Z_v T_v for every view.
std::vector<RowMatrix> aligned_graphs(const std::vector<RowMatrix>& z, const std::vector<Matrix>& t);

/// dh/dalpha_v = 2 lambda alpha_v Tr(P*^T Z_v T_v), evaluated at the inner
/// maximizer P*.
Vector grad_h(const Vector& alpha, const RowMatrix& p_star, const std::vector<RowMatrix>& z,
              const std::vector<Matrix>& t, double lambda);

/// Same as grad_h with the products Z_v T_v precomputed.
Vector grad_h_aligned(const Vector& alpha, const RowMatrix& p_star,
                      const std::vector<RowMatrix>& zt, double lambda);

/// Feasible descent direction on the simplex from the partial derivatives.
///
/// With u the index of the largest alpha (lowest index on ties), the reduced
/// gradient is r_v = dh_v - dh_u for v != u. The direction is g_v = -r_v,
/// except g_v = 0 when alpha_v = 0 and r_v > 0; g_u = -sum_{v != u} g_v so the
/// direction keeps sum(alpha) fixed.
Vector reduced_descent_direction(const Vector& grad, const Vector& alpha);

struct AgfConfig {
  double lambda = 1.0;
  double beta_lambda = 4.0;
  double tol = 1e-4;  ///< on max |alpha_{t+1} - alpha_t|
  int max_iters = 50;
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 20;
  bool freeze_alpha = false;  ///< keep alpha fixed, only solve for P
};

/// One pass of the alternating loop.
struct AgfStep {
  double h_before = 0.0;  ///< h(alpha_t) under this pass's H
  double h_after = 0.0;   ///< h(alpha_{t+1}) under the same H
  double step = 0.0;      ///< accepted line-search step, 0 if none
  double max_delta = 0.0;
};

struct AgfResult {
  Vector alpha;
  RowMatrix P;
  double h = 0.0;  ///< h at the returned alpha, under the last H
  int iterations = 0;
  bool converged = false;
  std::vector<AgfStep> trace;
  std::vector<Index> disconnected_anchors;
};

/// Min over alpha, max over P. Each pass recomputes H from (F, Q) and the
/// previous P, solves for P, takes a reduced-gradient step on alpha with
/// Armijo backtracking, and stops once max |delta alpha| <= tol.
AgfResult agf_minmax(const std::vector<RowMatrix>& z, const std::vector<Matrix>& t, Vector alpha,
                     RowMatrix p_prev, const Matrix& f, const Matrix& q, const AgfConfig& config);

}  // namespace agfti
