#pragma once

#include "agfti/agf.hpp"
#include "agfti/common.hpp"
#include "agfti/graphs.hpp"
#include "agfti/tensor3.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace agfti {

/// Entries of the diagonal fitting-weight matrix B^ = diag(B_n, B_m).
struct RegularizerB {
  double labeled = 100.0;
  double unlabeled = 0.0;
  double anchor = 0.0;
};

/// Expands B to its n + m diagonal: samples first (labeled or not), then
/// anchors.
Vector regularizer_diagonal(const RegularizerB& b, const std::vector<char>& labeled, Index m);

/// Soft labels of samples (F, n x c) and of fused anchors (Q, m x c).
struct SoftLabels {
  Matrix F;
  Matrix Q;
  std::vector<Index> floored_anchors;  ///< anchors whose degree hit the floor
};

/// Solves (L~ + B^) [F; Q] = B^ [Y; 0] for the bipartite normalized Laplacian
/// L~ = [I, -P L^-1/2; -L^-1/2 P^T, I], L = diag(column sums of P).
///
/// Uses the blockwise inverse with the Woodbury identity, so the only dense
/// factorization is of the m x m Schur complement
///     C2 = I + B_m - L^-1/2 P^T (I + B_n)^-1 P L^-1/2,
/// giving Q = C2^-1 L^-1/2 P^T (I + B_n)^-1 B_n Y and
///       F = (I + B_n)^-1 (B_n Y + P L^-1/2 Q).
///
/// `b_diag` has length n + m. Throws NumericalError if C2 is singular.
SoftLabels update_labels(const RowMatrix& p, const Vector& b_diag, const Matrix& y);

/// || (L~ + B^) [F; Q] - B^ [Y; 0] ||_F, evaluated blockwise.
double stationarity_residual(const RowMatrix& p, const Vector& b_diag, const Matrix& y,
                             const Matrix& f, const Matrix& q);

/// Performance-gain form of the label loss,
///     Tr(F^T S^ F) + 2 Tr(B^ Y^ F^T) - Tr(F^T (I + B^) F),  F = [F; Q],
/// evaluated blockwise without forming the (n + m)^2 Laplacian.
double performance_gain(const RowMatrix& p, const Vector& b_diag, const Matrix& y,
                        const Matrix& f, const Matrix& q);

/// Stacks per-view graphs into the m x V x n tensor: frontal slice i is the
/// m x V matrix whose column v is row i of Z_v.
Tensor3 stack_graphs(const std::vector<RowMatrix>& z);

/// Row i of view v read back from a stacked tensor.
Vector tensor_row(const Tensor3& t, Index view, Index sample);

/// T_v = U V^T from the SVD Z_v^T P = U S V^T, maximizing Tr(T^T Z_v^T P)
/// over orthogonal T.
Matrix update_alignment(const RowMatrix& z, const RowMatrix& p);

/// Argmax over each requested row; ties go to the lowest class index.
std::vector<int> predict(const Matrix& f, const std::vector<Index>& rows);

/// Problem handed to the solver: per-view graphs with their existing/missing
/// split, one-hot labels (zero rows for unlabeled samples).
struct SslProblem {
  std::vector<BipartiteGraph> graphs;
  Matrix Y;                   ///< n x c
  std::vector<char> labeled;  ///< length n
};

struct Ablation {
  bool freeze_alignment = false;  ///< keep T_v = I
  bool freeze_weights = false;    ///< keep alpha_v = 1 / V
  bool disable_imputation = false;  ///< never update the missing rows
};

/// Norm of Z - G used by the outer stopping rule. The Frobenius norm bounds
/// the max norm from above, so it is the stricter choice.
enum class ResidualNorm { Frobenius, Max };

struct AdmmConfig {
  std::optional<double> lambda;  ///< defaults to V^2
  double beta_lambda = 4.0;
  double rho = 100.0;
  RegularizerB b;
  double eta0 = 1e-2;
  double gamma_eta = 2.0;
  double eta_max = 1e10;
  double tol = 1e-5;
  ResidualNorm stop_norm = ResidualNorm::Frobenius;
  int max_outer_iters = 50;
  double inner_tol = 1e-4;
  int max_inner_iters = 50;
  Ablation ablation;
};

/// All ADMM iterates.
struct AdmmState {
  std::vector<BipartiteGraph> graphs;
  std::vector<Matrix> T;
  Vector alpha;
  RowMatrix P;
  SoftLabels labels;
  Tensor3 G;
  Tensor3 W;
  double eta = 1e-2;
  int iteration = 0;

  std::vector<RowMatrix> graph_matrices() const;
};

/// Creates the initial state: T_v = I, alpha_v = 1/V, G = W = 0, eta = eta0,
/// missing rows uniform, P from the inner solve with H = 0 and F, Q from the
/// label update.
AdmmState initial_state(const SslProblem& problem, const AdmmConfig& config);

/// Closed-form update of every missing row: the simplex projection of
///     G_i - (W_i - lambda alpha_v^2 (P T_v^T)_i) / eta.
/// Existing rows are left untouched.
void update_missing_rows(AdmmState& state, double lambda);

/// G = tubal_shrink(Z + W / eta, rho / eta).
Tensor3 update_G(const Tensor3& z, const Tensor3& w, double eta, double rho);

/// W += eta (Z - G); eta = min(gamma_eta * eta, eta_max).
void update_multiplier(AdmmState& state, const Tensor3& z, double gamma_eta, double eta_max);

struct IterationDiagnostics {
  int iteration = 0;
  double h = 0.0;
  double primal_residual = 0.0;      ///< ||Z - G||_F
  double primal_residual_max = 0.0;  ///< ||Z - G||_inf
  double label_change = 0.0;         ///< ||F_t - F_{t-1}||_F / max(1, ||F_{t-1}||_F)
  double eta = 0.0;
  int inner_iterations = 0;
  bool inner_converged = false;
  Vector alpha;
};

struct AdmmResult {
  SoftLabels labels;
  AdmmState state;
  std::vector<IterationDiagnostics> diagnostics;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;
};

using DiagnosticsSink = std::function<void(const IterationDiagnostics&)>;

/// Runs the full alternating scheme until
///     max(||Z - G||, relative change of F) <= tol
/// (norm per config.stop_norm) or max_outer_iters. Never throws for non-convergence; the result carries
/// the flag instead.
AdmmResult admm_solve(const SslProblem& problem, const AdmmConfig& config,
                      const DiagnosticsSink& sink = {});

}  // namespace agfti
