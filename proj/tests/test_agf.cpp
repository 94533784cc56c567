#include "agfti/agf.hpp"
#include "agfti/graphs.hpp"
#include "agfti/simplex.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace agfti;

namespace {

struct Instance {
  std::vector<RowMatrix> z;
  std::vector<Matrix> t;
  RowMatrix h;
  Vector alpha;
};

Instance random_instance(std::mt19937_64& gen, Index n, Index m, int views) {
  Instance in;
  for (int v = 0; v < views; ++v) {
    in.z.push_back(oracle::random_stochastic(n, m, gen));
    in.t.push_back(oracle::random_orthogonal(m, gen));
  }
  in.h = oracle::random_matrix(n, m, gen).cwiseAbs() * 0.05;
  std::exponential_distribution<double> ex;
  in.alpha.resize(views);
  for (int v = 0; v < views; ++v) in.alpha(v) = 0.2 + ex(gen);
  in.alpha /= in.alpha.sum();
  return in;
}

double h_at(const Instance& in, const Vector& alpha, double lambda, double beta) {
  return solve_inner(aligned_graphs(in.z, in.t), alpha, in.h, lambda, beta).value;
}

}  // namespace

TEST(LabelDistance, ZeroLabelsGiveZero) {
  std::mt19937_64 gen(51);
  const RowMatrix p = oracle::random_stochastic(5, 3, gen);
  const LabelDistance d = compute_H(Matrix::Zero(5, 2), Matrix::Zero(3, 2), p);
  EXPECT_EQ(d.H.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LabelDistance, SingleEdge) {
  Matrix f(1, 2), q(1, 2);
  f << 0.3, 0.7;
  q << 1.0, -0.5;
  const LabelDistance d = compute_H(f, q, RowMatrix::Ones(1, 1));
  EXPECT_NEAR(d.H(0, 0), (f - q).squaredNorm(), 1e-15);
}

TEST(LabelDistance, WeightedSumIsLaplacianTrace) {
  std::mt19937_64 gen(52);
  for (int rep = 0; rep < 5; ++rep) {
    const RowMatrix p = oracle::random_stochastic(30, 5, gen, 0.2);
    const Matrix f = oracle::random_matrix(30, 3, gen);
    const Matrix q = oracle::random_matrix(5, 3, gen);
    const LabelDistance d = compute_H(f, q, p);
    Matrix fhat(35, 3);
    fhat << f, q;
    const double dense = (fhat.transpose() * oracle::dense_laplacian(p) * fhat).trace();
    EXPECT_NEAR(d.H.cwiseProduct(p).sum(), dense, 1e-8 * std::max(1.0, std::abs(dense)));
  }
}

TEST(LabelDistance, DisconnectedAnchorIsReported) {
  RowMatrix p(2, 3);
  p << 0.5, 0.5, 0.0, 1.0, 0.0, 0.0;
  const LabelDistance d = compute_H(Matrix::Zero(2, 2), Matrix::Ones(3, 2), p);
  EXPECT_EQ(d.disconnected_anchors, (std::vector<Index>{2}));
  EXPECT_TRUE(d.H.allFinite());
}

TEST(InnerP, ZeroTargetIsUniform) {
  const RowMatrix p = solve_inner_P(RowMatrix::Zero(3, 4), RowMatrix::Zero(3, 4), 4.0, 2.0);
  EXPECT_TRUE((p.array() == 0.25).all());
  EXPECT_THROW(solve_inner_P(RowMatrix::Zero(3, 4), RowMatrix::Zero(3, 4), 4.0, 0.0),
               InvalidArgument);
}

TEST(InnerP, MatchesSimplexQp) {
  std::mt19937_64 gen(53);
  for (int rep = 0; rep < 50; ++rep) {
    const RowMatrix zt = oracle::random_stochastic(3, 4, gen);
    const RowMatrix h = oracle::random_matrix(3, 4, gen).cwiseAbs();
    const double lambda = 1.0 + rep % 5, beta = 0.25 * (1 + rep % 4);
    const RowMatrix p = solve_inner_P(zt, h, lambda, beta);
    for (Index i = 0; i < 3; ++i) {
      // max lambda <p, z> - beta ||p||^2 - <p, h>  ==  min (2 beta / 2) ||p||^2 - (lambda z - h)^T p
      const Vector b = -(lambda * zt.row(i) - h.row(i)).transpose();
      EXPECT_LT((p.row(i).transpose() - oracle::simplex_qp(2.0 * beta, b)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(InnerP, BeatsFeasiblePoints) {
  std::mt19937_64 gen(54);
  const Instance in = random_instance(gen, 20, 6, 3);
  const auto zt = aligned_graphs(in.z, in.t);
  const InnerSolution s = solve_inner(zt, in.alpha, in.h, 9.0, 4.0);
  const RowMatrix uniform = RowMatrix::Constant(20, 6, 1.0 / 6.0);
  EXPECT_GE(s.value, inner_objective(uniform, zt, in.alpha, in.h, 9.0, 4.0));
  for (int r = 0; r < 50; ++r) {
    const RowMatrix p = oracle::random_stochastic(20, 6, gen);
    EXPECT_GE(s.value, inner_objective(p, zt, in.alpha, in.h, 9.0, 4.0));
  }
}

TEST(GradH, TrivialCases) {
  std::mt19937_64 gen(55);
  Instance in = random_instance(gen, 10, 4, 3);
  in.alpha << 0.0, 0.4, 0.6;
  const RowMatrix p = solve_inner(aligned_graphs(in.z, in.t), in.alpha, in.h, 9.0, 4.0).P;
  EXPECT_EQ(grad_h(in.alpha, p, in.z, in.t, 9.0)(0), 0.0);
  EXPECT_EQ(grad_h(in.alpha, p, in.z, in.t, 0.0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(GradH, MatchesCentralDifferences) {
  std::mt19937_64 gen(56);
  const double lambda = 9.0, beta = 4.0, eps = 1e-5;
  for (int rep = 0; rep < 5; ++rep) {
    const Instance in = random_instance(gen, 60, 8, 3);
    const auto zt = aligned_graphs(in.z, in.t);
    const RowMatrix p = solve_inner(zt, in.alpha, in.h, lambda, beta).P;
    const Vector grad = grad_h(in.alpha, p, in.z, in.t, lambda);
    for (int d = 0; d < 3; ++d) {
      Vector dir(3);
      dir << (d == 0 ? 1.0 : -0.5), (d == 1 ? 1.0 : -0.5), (d == 2 ? 1.0 : -0.5);
      const double fd = (h_at(in, in.alpha + eps * dir, lambda, beta) -
                         h_at(in, in.alpha - eps * dir, lambda, beta)) / (2 * eps);
      const double an = grad.dot(dir);
      EXPECT_LE(std::abs(fd - an), 1e-4 * std::max(std::abs(an), grad.norm() * dir.norm() * 1e-2));
    }
  }
}

TEST(ReducedDirection, Properties) {
  Vector alpha(3), g(3);
  alpha << 0.2, 0.5, 0.3;
  EXPECT_EQ(reduced_descent_direction(Vector::Constant(3, 2.5), alpha).cwiseAbs().maxCoeff(), 0.0);

  std::mt19937_64 gen(57);
  for (int r = 0; r < 100; ++r) {
    const Vector grad = oracle::random_matrix(4, 1, gen);
    Vector a = oracle::random_matrix(4, 1, gen).cwiseAbs();
    a /= a.sum();
    EXPECT_NEAR(reduced_descent_direction(grad, a).sum(), 0.0, 1e-12);
  }

  alpha << 0.0, 0.7, 0.3;
  g << 5.0, 1.0, 0.0;  // view 0 reduced gradient 4 > 0 at the boundary
  const Vector dir = reduced_descent_direction(g, alpha);
  EXPECT_EQ(dir(0), 0.0);
  EXPECT_EQ(dir(2), 1.0);
  EXPECT_EQ(dir(1), -1.0);
}

TEST(AgfMinMax, SingleViewIsImmediate) {
  std::mt19937_64 gen(58);
  const Instance in = random_instance(gen, 12, 4, 1);
  AgfConfig cfg;
  cfg.lambda = 1.0;
  const AgfResult r = agf_minmax(in.z, in.t, Vector::Ones(1), RowMatrix::Constant(12, 4, 0.25),
                                 Matrix::Zero(12, 2), Matrix::Zero(4, 2), cfg);
  EXPECT_EQ(r.alpha(0), 1.0);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(rows_on_simplex(r.P));
}

TEST(AgfMinMax, MonotoneAndConvergent) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 gen(600 + seed);
    const Instance in = random_instance(gen, 60, 8, 3);
    const Matrix f = oracle::random_matrix(60, 3, gen) * 0.3;
    const Matrix q = oracle::random_matrix(8, 3, gen) * 0.3;
    AgfConfig cfg;
    cfg.lambda = 9.0;
    const AgfResult r = agf_minmax(in.z, in.t, Vector::Constant(3, 1.0 / 3.0),
                                   RowMatrix::Constant(60, 8, 0.125), f, q, cfg);
    for (const AgfStep& s : r.trace) EXPECT_LE(s.h_after, s.h_before + 1e-12);
    EXPECT_TRUE(r.converged) << "seed " << seed;
    EXPECT_LE(r.trace.back().max_delta, 1e-4);
    EXPECT_NEAR(r.alpha.sum(), 1.0, 1e-12);
    EXPECT_GE(r.alpha.minCoeff(), 0.0);
    EXPECT_TRUE(rows_on_simplex(r.P));
  }
}

TEST(AgfMinMax, FrozenWeightsStayUniform) {
  std::mt19937_64 gen(59);
  const Instance in = random_instance(gen, 20, 4, 3);
  AgfConfig cfg;
  cfg.lambda = 9.0;
  cfg.freeze_alpha = true;
  const AgfResult r = agf_minmax(in.z, in.t, Vector::Constant(3, 1.0 / 3.0),
                                 RowMatrix::Constant(20, 4, 0.25), Matrix::Zero(20, 2),
                                 Matrix::Zero(4, 2), cfg);
  EXPECT_EQ(r.alpha, Vector::Constant(3, 1.0 / 3.0));
}
