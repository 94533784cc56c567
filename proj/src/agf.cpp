#include "agfti/agf.hpp"

#include "agfti/graphs.hpp"
#include "agfti/parallel.hpp"
#include "agfti/simplex.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace agfti {
namespace {

RowMatrix fuse(const std::vector<RowMatrix>& zt, const Vector& alpha) {
  RowMatrix out = RowMatrix::Zero(zt.front().rows(), zt.front().cols());
  for (std::size_t v = 0; v < zt.size(); ++v) {
    const double w = alpha(static_cast<Index>(v)) * alpha(static_cast<Index>(v));
    if (w != 0.0) out += w * zt[v];
  }
  return out;
}

Index pivot_view(const Vector& alpha) {
  Index u = 0;
  for (Index v = 1; v < alpha.size(); ++v) {
    if (alpha(v) > alpha(u)) u = v;
  }
  return u;
}

// Clears rounding-level negatives and restores sum(alpha) = 1.
void renormalize(Vector& alpha) {
  alpha = alpha.cwiseMax(0.0);
  alpha /= alpha.sum();
}

}  // namespace

Vector anchor_degrees(const RowMatrix& p, std::vector<Index>* floored) {
  Vector deg = p.colwise().sum().transpose();
  for (Index j = 0; j < deg.size(); ++j) {
    if (deg(j) < kDegreeFloor) {
      deg(j) = kDegreeFloor;
      if (floored != nullptr) floored->push_back(j);
    }
  }
  return deg;
}

LabelDistance compute_H(const Matrix& f, const Matrix& q, const RowMatrix& p) {
  if (f.rows() != p.rows() || q.rows() != p.cols() || f.cols() != q.cols()) {
    throw InvalidArgument("compute_H: F is n x c, Q is m x c and P is n x m");
  }
  LabelDistance out;
  const Vector deg = anchor_degrees(p, &out.disconnected_anchors);
  const Matrix qs = deg.cwiseSqrt().cwiseInverse().asDiagonal() * q;

  const Vector f_sq = f.rowwise().squaredNorm();
  const Vector q_sq = qs.rowwise().squaredNorm();
  out.H = -2.0 * (f * qs.transpose());
  out.H.colwise() += f_sq;
  out.H.rowwise() += q_sq.transpose();
  out.H = out.H.cwiseMax(0.0);
  return out;
}

RowMatrix solve_inner_P(const RowMatrix& ztilde, const RowMatrix& h, double lambda,
                        double beta_lambda) {
  if (!(beta_lambda > 0.0)) throw InvalidArgument("solve_inner_P: beta_lambda must be positive");
  if (ztilde.rows() != h.rows() || ztilde.cols() != h.cols()) {
    throw InvalidArgument("solve_inner_P: Z~ and H shapes differ");
  }
  RowMatrix target = (lambda * ztilde - h) / (2.0 * beta_lambda);
  return prox_rows(target);
}

double inner_objective(const RowMatrix& p, const std::vector<RowMatrix>& zt, const Vector& alpha,
                       const RowMatrix& h, double lambda, double beta_lambda) {
  double fusion = 0.0;
  for (std::size_t v = 0; v < zt.size(); ++v) {
    const double a = alpha(static_cast<Index>(v));
    fusion += a * a * p.cwiseProduct(zt[v]).sum();
  }
  return lambda * fusion - beta_lambda * p.squaredNorm() - p.cwiseProduct(h).sum();
}

InnerSolution solve_inner(const std::vector<RowMatrix>& zt, const Vector& alpha,
                          const RowMatrix& h, double lambda, double beta_lambda) {
  InnerSolution s;
  s.P = solve_inner_P(fuse(zt, alpha), h, lambda, beta_lambda);
  s.value = inner_objective(s.P, zt, alpha, h, lambda, beta_lambda);
  return s;
}

std::vector<RowMatrix> aligned_graphs(const std::vector<RowMatrix>& z,
                                      const std::vector<Matrix>& t) {
  if (z.size() != t.size()) throw InvalidArgument("aligned_graphs: view counts differ");
  std::vector<RowMatrix> out(z.size());
  for (std::size_t v = 0; v < z.size(); ++v) {
    if (t[v].rows() != z[v].cols() || t[v].cols() != z[v].cols()) {
      throw InvalidArgument("aligned_graphs: T_" + std::to_string(v) + " must be m x m");
    }
    out[v] = z[v] * t[v];
  }
  return out;
}

Vector grad_h_aligned(const Vector& alpha, const RowMatrix& p_star,
                      const std::vector<RowMatrix>& zt, double lambda) {
  Vector g(alpha.size());
  for (Index v = 0; v < alpha.size(); ++v) {
    g(v) = 2.0 * lambda * alpha(v) * p_star.cwiseProduct(zt[static_cast<std::size_t>(v)]).sum();
  }
  return g;
}

Vector grad_h(const Vector& alpha, const RowMatrix& p_star, const std::vector<RowMatrix>& z,
              const std::vector<Matrix>& t, double lambda) {
  if (static_cast<Index>(z.size()) != alpha.size()) {
    throw InvalidArgument("grad_h: alpha length differs from view count");
  }
  return grad_h_aligned(alpha, p_star, aligned_graphs(z, t), lambda);
}

Vector reduced_descent_direction(const Vector& grad, const Vector& alpha) {
  if (grad.size() != alpha.size()) {
    throw InvalidArgument("reduced_descent_direction: size mismatch");
  }
  const Index views = alpha.size();
  const Index u = pivot_view(alpha);
  Vector g = Vector::Zero(views);
  double balance = 0.0;
  for (Index v = 0; v < views; ++v) {
    if (v == u) continue;
    const double reduced = grad(v) - grad(u);
    g(v) = (alpha(v) <= 0.0 && reduced > 0.0) ? 0.0 : -reduced;
    balance += g(v);
  }
  g(u) = -balance;
  return g;
}

AgfResult agf_minmax(const std::vector<RowMatrix>& z, const std::vector<Matrix>& t, Vector alpha,
                     RowMatrix p_prev, const Matrix& f, const Matrix& q, const AgfConfig& config) {
  if (z.empty()) throw InvalidArgument("agf_minmax: no views");
  if (alpha.size() != static_cast<Index>(z.size())) {
    throw InvalidArgument("agf_minmax: alpha length differs from view count");
  }
  const std::vector<RowMatrix> zt = aligned_graphs(z, t);
  const double lambda = config.lambda;
  const double beta = config.beta_lambda;

  AgfResult result;
  RowMatrix h;
  InnerSolution current;

  for (int it = 0; it < std::max(1, config.max_iters); ++it) {
    LabelDistance dist = compute_H(f, q, p_prev);
    for (Index j : dist.disconnected_anchors) {
      if (std::find(result.disconnected_anchors.begin(), result.disconnected_anchors.end(), j) ==
          result.disconnected_anchors.end()) {
        result.disconnected_anchors.push_back(j);
      }
    }
    h = std::move(dist.H);
    current = solve_inner(zt, alpha, h, lambda, beta);

    AgfStep step;
    step.h_before = current.value;
    step.h_after = current.value;

    Vector g = Vector::Zero(alpha.size());
    if (!config.freeze_alpha && alpha.size() > 1) {
      const Vector grad = grad_h_aligned(alpha, current.P, zt, lambda);
      g = reduced_descent_direction(grad, alpha);
      const double slope = grad.dot(g);

      if (slope < 0.0) {
        double cap = std::numeric_limits<double>::infinity();
        for (Index v = 0; v < g.size(); ++v) {
          if (g(v) < 0.0) cap = std::min(cap, -alpha(v) / g(v));
        }
        double theta = std::min(config.initial_step, cap);
        for (int b = 0; b <= config.max_backtracks && theta > 0.0; ++b) {
          Vector trial = alpha + theta * g;
          renormalize(trial);
          InnerSolution probe = solve_inner(zt, trial, h, lambda, beta);
          if (probe.value <= current.value + config.armijo * theta * slope) {
            step.step = theta;
            step.h_after = probe.value;
            step.max_delta = (trial - alpha).cwiseAbs().maxCoeff();
            alpha = trial;
            current = std::move(probe);
            break;
          }
          theta *= config.shrink;
        }
      }
    }

    result.trace.push_back(step);
    result.iterations = it + 1;
    p_prev = current.P;
    if (step.max_delta <= config.tol) {
      result.converged = true;
      break;
    }
  }

  // `current` already holds the maximizer at the final alpha: accepted probes
  // replace it, rejected ones leave alpha untouched.
  result.alpha = alpha;
  result.P = std::move(current.P);
  result.h = current.value;
  return result;
}

}  // namespace agfti
