#include "agfti/ssl.hpp"

#include "agfti/parallel.hpp"
#include "agfti/simplex.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace agfti {
namespace {

constexpr double kMinSchurRcond = 1e-14;

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

}  // namespace

Vector regularizer_diagonal(const RegularizerB& b, const std::vector<char>& labeled, Index m) {
  require(b.labeled >= 0.0 && b.unlabeled >= 0.0 && b.anchor >= 0.0,
          "regularizer_diagonal: entries of B must be nonnegative");
  const auto n = static_cast<Index>(labeled.size());
  Vector d(n + m);
  for (Index i = 0; i < n; ++i) d(i) = labeled[static_cast<std::size_t>(i)] ? b.labeled : b.unlabeled;
  d.tail(m).setConstant(b.anchor);
  return d;
}

SoftLabels update_labels(const RowMatrix& p, const Vector& b_diag, const Matrix& y) {
  const Index n = p.rows();
  const Index m = p.cols();
  require(y.rows() == n, "update_labels: Y must have one row per sample");
  require(b_diag.size() == n + m, "update_labels: B must have n + m diagonal entries");

  SoftLabels out;
  const Vector isq = anchor_degrees(p, &out.floored_anchors).cwiseSqrt().cwiseInverse();
  const Vector b_n = b_diag.head(n);
  const Vector b_m = b_diag.tail(m);

  const Matrix rhs = b_n.asDiagonal() * y;
  if (rhs.isZero(0.0)) {
    out.F = Matrix::Zero(n, y.cols());
    out.Q = Matrix::Zero(m, y.cols());
    return out;
  }

  const Vector d_inv = (Vector::Ones(n) + b_n).cwiseInverse();
  const Matrix a = p * isq.asDiagonal();  // P L^-1/2
  const Matrix dy = d_inv.asDiagonal() * rhs;

  Matrix schur = -(a.transpose() * d_inv.asDiagonal() * a);
  schur.diagonal() += Vector::Ones(m) + b_m;

  Eigen::LDLT<Matrix> ldlt(schur);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > kMinSchurRcond)) {
    throw NumericalError("update_labels: the m x m Schur complement is singular (rcond " +
                         std::to_string(ldlt.rcond()) + ")");
  }
  out.Q = ldlt.solve(a.transpose() * dy);
  out.F = dy + d_inv.asDiagonal() * (a * out.Q);
  return out;
}

double stationarity_residual(const RowMatrix& p, const Vector& b_diag, const Matrix& y,
                             const Matrix& f, const Matrix& q) {
  const Index n = p.rows();
  const Index m = p.cols();
  const Vector isq = anchor_degrees(p).cwiseSqrt().cwiseInverse();
  const Matrix a = p * isq.asDiagonal();
  const Vector b_n = b_diag.head(n);
  const Vector b_m = b_diag.tail(m);
  const Matrix top = (Vector::Ones(n) + b_n).asDiagonal() * f - a * q - b_n.asDiagonal() * y;
  const Matrix bottom = (Vector::Ones(m) + b_m).asDiagonal() * q - a.transpose() * f;
  return std::sqrt(top.squaredNorm() + bottom.squaredNorm());
}

double performance_gain(const RowMatrix& p, const Vector& b_diag, const Matrix& y,
                        const Matrix& f, const Matrix& q) {
  const Index n = p.rows();
  const Index m = p.cols();
  const Vector isq = anchor_degrees(p).cwiseSqrt().cwiseInverse();
  const Matrix a = p * isq.asDiagonal();
  const Vector b_n = b_diag.head(n);
  const Vector b_m = b_diag.tail(m);

  const double smooth = 2.0 * f.cwiseProduct(a * q).sum();
  const double fit = 2.0 * (b_n.asDiagonal() * y).cwiseProduct(f).sum();
  const double mass = ((Vector::Ones(n) + b_n).asDiagonal() * f).cwiseProduct(f).sum() +
                      ((Vector::Ones(m) + b_m).asDiagonal() * q).cwiseProduct(q).sum();
  return smooth + fit - mass;
}

Tensor3 stack_graphs(const std::vector<RowMatrix>& z) {
  require(!z.empty(), "stack_graphs: no views");
  const Index n = z[0].rows();
  const Index m = z[0].cols();
  const auto views = static_cast<Index>(z.size());
  Tensor3 t(m, views, n);
  for (Index v = 0; v < views; ++v) {
    const auto& zv = z[static_cast<std::size_t>(v)];
    require(zv.rows() == n && zv.cols() == m, "stack_graphs: views differ in shape");
    for (Index i = 0; i < n; ++i) {
      for (Index a = 0; a < m; ++a) t(a, v, i) = zv(i, a);
    }
  }
  return t;
}

Vector tensor_row(const Tensor3& t, Index view, Index sample) {
  return t.slice(sample).col(view);
}

Matrix update_alignment(const RowMatrix& z, const RowMatrix& p) {
  require(z.rows() == p.rows() && z.cols() == p.cols(), "update_alignment: Z and P shapes differ");
  const Matrix cross = z.transpose() * p;
  Eigen::BDCSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericalError("update_alignment: SVD failed");
  return svd.matrixU() * svd.matrixV().transpose();
}

std::vector<int> predict(const Matrix& f, const std::vector<Index>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (Index i : rows) {
    require(i >= 0 && i < f.rows(), "predict: row index out of range");
    Index best = 0;
    for (Index j = 1; j < f.cols(); ++j) {
      if (f(i, j) > f(i, best)) best = j;
    }
    out.push_back(static_cast<int>(best));
  }
  return out;
}

std::vector<RowMatrix> AdmmState::graph_matrices() const {
  std::vector<RowMatrix> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(g.Z);
  return out;
}

AdmmState initial_state(const SslProblem& problem, const AdmmConfig& config) {
  require(!problem.graphs.empty(), "initial_state: no views");
  const auto views = static_cast<Index>(problem.graphs.size());
  const Index n = problem.graphs[0].Z.rows();
  const Index m = problem.graphs[0].Z.cols();
  require(problem.Y.rows() == n, "initial_state: Y must have one row per sample");
  require(static_cast<Index>(problem.labeled.size()) == n, "initial_state: labeled mask length");
  require(config.eta0 > 0.0, "initial_state: eta0 must be positive");
  const double lambda = config.lambda.value_or(static_cast<double>(views * views));

  AdmmState s;
  s.graphs = problem.graphs;
  for (auto& g : s.graphs) {
    require(g.Z.rows() == n && g.Z.cols() == m, "initial_state: views differ in shape");
    for (Index i : g.missing) g.Z.row(i).setConstant(1.0 / static_cast<double>(m));
  }
  s.T.assign(static_cast<std::size_t>(views), Matrix::Identity(m, m));
  s.alpha = Vector::Constant(views, 1.0 / static_cast<double>(views));
  s.G = Tensor3(m, views, n);
  s.W = Tensor3(m, views, n);
  s.eta = config.eta0;

  const RowMatrix ztilde = weighted_fusion_input(s.graph_matrices(), s.T, s.alpha);
  s.P = solve_inner_P(ztilde, RowMatrix::Zero(n, m), lambda, config.beta_lambda);
  s.labels = update_labels(s.P, regularizer_diagonal(config.b, problem.labeled, m), problem.Y);
  return s;
}

void update_missing_rows(AdmmState& state, double lambda) {
  for (std::size_t v = 0; v < state.graphs.size(); ++v) {
    auto& graph = state.graphs[v];
    const Matrix t_transposed = state.T[v].transpose();
    const double weight = lambda * state.alpha(static_cast<Index>(v)) *
                          state.alpha(static_cast<Index>(v));
    const auto view = static_cast<Index>(v);
    parallel_for(static_cast<Index>(graph.missing.size()), [&](Index r) {
      const Index i = graph.missing[static_cast<std::size_t>(r)];
      const Vector pull = (state.P.row(i) * t_transposed).transpose();
      Vector target = tensor_row(state.G, view, i) -
                      (tensor_row(state.W, view, i) - weight * pull) / state.eta;
      project_simplex_inplace(target);
      graph.Z.row(i) = target.transpose();
    });
  }
}

Tensor3 update_G(const Tensor3& z, const Tensor3& w, double eta, double rho) {
  require(eta > 0.0, "update_G: eta must be positive");
  require(rho >= 0.0, "update_G: rho must be nonnegative");
  Tensor3 target = w;
  target *= 1.0 / eta;
  target += z;
  return tubal_shrink(target, rho / eta);
}

void update_multiplier(AdmmState& state, const Tensor3& z, double gamma_eta, double eta_max) {
  Tensor3 step = z - state.G;
  step *= state.eta;
  state.W += step;
  state.eta = std::min(gamma_eta * state.eta, eta_max);
}

AdmmResult admm_solve(const SslProblem& problem, const AdmmConfig& config,
                      const DiagnosticsSink& sink) {
  AdmmResult result;
  AdmmState state = initial_state(problem, config);
  const auto views = static_cast<Index>(state.graphs.size());
  const Index m = state.P.cols();
  const double lambda = config.lambda.value_or(static_cast<double>(views * views));
  const Vector b_diag = regularizer_diagonal(config.b, problem.labeled, m);

  std::set<Index> disconnected;
  AgfConfig inner;
  inner.lambda = lambda;
  inner.beta_lambda = config.beta_lambda;
  inner.tol = config.inner_tol;
  inner.max_iters = config.max_inner_iters;
  inner.freeze_alpha = config.ablation.freeze_weights;

  for (int it = 1; it <= config.max_outer_iters; ++it) {
    state.iteration = it;
    if (!config.ablation.disable_imputation) update_missing_rows(state, lambda);

    const std::vector<RowMatrix> z = state.graph_matrices();
    AgfResult fused = agf_minmax(z, state.T, state.alpha, state.P, state.labels.F,
                                 state.labels.Q, inner);
    state.alpha = fused.alpha;
    state.P = std::move(fused.P);
    disconnected.insert(fused.disconnected_anchors.begin(), fused.disconnected_anchors.end());

    const Matrix previous_f = state.labels.F;
    state.labels = update_labels(state.P, b_diag, problem.Y);
    disconnected.insert(state.labels.floored_anchors.begin(), state.labels.floored_anchors.end());

    const Tensor3 stacked = stack_graphs(z);
    state.G = update_G(stacked, state.W, state.eta, config.rho);
    const Tensor3 gap = stacked - state.G;

    if (!config.ablation.freeze_alignment) {
      for (Index v = 0; v < views; ++v) {
        state.T[static_cast<std::size_t>(v)] =
            update_alignment(state.graphs[static_cast<std::size_t>(v)].Z, state.P);
      }
    }
    update_multiplier(state, stacked, config.gamma_eta, config.eta_max);

    IterationDiagnostics d;
    d.iteration = it;
    d.h = fused.h;
    d.primal_residual = gap.frobenius_norm();
    d.primal_residual_max = gap.max_abs();
    d.label_change = (state.labels.F - previous_f).norm() / std::max(1.0, previous_f.norm());
    d.eta = state.eta;
    d.inner_iterations = fused.iterations;
    d.inner_converged = fused.converged;
    d.alpha = state.alpha;
    if (sink) sink(d);
    result.diagnostics.push_back(d);
    result.iterations = it;

    const double residual = config.stop_norm == ResidualNorm::Max ? d.primal_residual_max
                                                                  : d.primal_residual;
    if (std::max(residual, d.label_change) <= config.tol) {
      result.converged = true;
      break;
    }
  }

  for (Index j : disconnected) {
    result.warnings.push_back("anchor " + std::to_string(j) +
                              " has zero degree in the fused graph; degree floored at 1e-12");
  }
  result.labels = state.labels;
  result.state = std::move(state);
  return result;
}

}  // namespace agfti
