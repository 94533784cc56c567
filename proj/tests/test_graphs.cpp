#include "agfti/graphs.hpp"
#include "agfti/simplex.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace agfti;

TEST(Bkhk, SingleAnchorIsMean) {
  std::mt19937_64 gen(41);
  const Matrix x = oracle::random_matrix(37, 3, gen);
  const AnchorSet a = bkhk_anchors(x, 1, 5);
  EXPECT_LT((a.points.row(0) - x.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Bkhk, RecoversRepeatedGenerators) {
  std::mt19937_64 gen(42);
  for (Index m : {2, 4, 8}) {
    const Matrix g = 10.0 * oracle::random_matrix(m, 2, gen);
    Matrix x(m * 6, 2);
    for (Index r = 0; r < x.rows(); ++r) x.row(r) = g.row(r % m);
    const AnchorSet a = bkhk_anchors(x, m, 9);
    for (Index j = 0; j < m; ++j) {
      double best = 1e300;
      for (Index i = 0; i < m; ++i) best = std::min(best, (a.points.row(j) - g.row(i)).norm());
      EXPECT_LT(best, 1e-8);
    }
  }
}

TEST(Bkhk, LeavesAreBalanced) {
  std::mt19937_64 gen(43);
  for (Index n : {16, 50, 101, 333}) {
    const Matrix x = oracle::random_matrix(n, 3, gen);
    for (Index m : {2, 8, 16}) {
      const AnchorSet a = bkhk_anchors(x, m, 1);
      ASSERT_EQ(a.leaves.size(), static_cast<std::size_t>(m));
      std::vector<Index> all;
      for (const auto& leaf : a.leaves) {
        const auto s = static_cast<Index>(leaf.size());
        EXPECT_TRUE(s == n / m || s == (n + m - 1) / m) << n << " " << m << " " << s;
        all.insert(all.end(), leaf.begin(), leaf.end());
      }
      std::sort(all.begin(), all.end());
      for (Index i = 0; i < n; ++i) EXPECT_EQ(all[static_cast<std::size_t>(i)], i);
    }
  }
}

TEST(Bkhk, DeterministicAndValidated) {
  std::mt19937_64 gen(44);
  const Matrix x = oracle::random_matrix(64, 2, gen);
  EXPECT_EQ(bkhk_anchors(x, 8, 3).points, bkhk_anchors(x, 8, 3).points);
  EXPECT_THROW(bkhk_anchors(x, 6, 3), InvalidArgument);
  EXPECT_THROW(bkhk_anchors(x, 128, 3), InvalidArgument);
}

TEST(Bipartite, CoincidentAnchorWithOneNeighbor) {
  AnchorSet a;
  a.points = Matrix(3, 1);
  a.points << 0.0, 1.0, 5.0;
  Matrix x(1, 1);
  x << 1.0;
  const RowMatrix z = build_bipartite(x, a, 1);
  EXPECT_EQ(z(0, 0), 0.0);
  EXPECT_EQ(z(0, 1), 1.0);
  EXPECT_EQ(z(0, 2), 0.0);
}

TEST(Bipartite, HandWorkedWeights) {
  // squared distances 0, 1, 4, 9 from the sample at the origin
  AnchorSet a;
  a.points = Matrix(4, 1);
  a.points << 0.0, 1.0, 2.0, 3.0;
  Matrix x = Matrix::Zero(1, 1);
  const RowMatrix z = build_bipartite(x, a, 2);
  EXPECT_NEAR(z(0, 0), 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(z(0, 1), 3.0 / 7.0, 1e-15);
  EXPECT_EQ(z(0, 2), 0.0);
  EXPECT_EQ(z(0, 3), 0.0);
  EXPECT_NO_THROW(build_bipartite(x, a, 3));
  EXPECT_THROW(build_bipartite(x, a, 4), InvalidArgument);
  EXPECT_THROW(build_bipartite(x, a, 0), InvalidArgument);
}

TEST(Bipartite, ClosedFormSolvesRegularizedRowProblem) {
  // Each row minimizes sum_j d_j z_j + gamma ||z||^2 over the simplex with
  // gamma = (k d_(k+1) - sum_{h<=k} d_(h)) / 2.
  std::mt19937_64 gen(45);
  const Matrix x = oracle::random_matrix(30, 3, gen);
  AnchorSet a;
  a.points = oracle::random_matrix(8, 3, gen);
  for (Index k : {1, 3, 5, 7}) {
    const RowMatrix z = build_bipartite(x, a, k);
    for (Index i = 0; i < x.rows(); ++i) {
      Vector d(8);
      for (Index j = 0; j < 8; ++j) d(j) = (x.row(i) - a.points.row(j)).squaredNorm();
      Vector s = d;
      std::sort(s.data(), s.data() + 8);
      const double gamma = 0.5 * (k * s(k) - s.head(k).sum());
      const Vector ref = oracle::simplex_qp(2.0 * gamma, d);
      EXPECT_LT((z.row(i).transpose() - ref).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_EQ((z.row(i).array() > 0.0).count(), k);
      EXPECT_TRUE(on_simplex(z.row(i).transpose()));
    }
  }
}

TEST(Bipartite, DegenerateDistancesFallBackToUniform) {
  AnchorSet a;
  a.points = Matrix(4, 2);
  a.points << 1, 0, -1, 0, 0, 1, 0, -1;
  const RowMatrix z = build_bipartite(Matrix::Zero(1, 2), a, 2);
  EXPECT_EQ(z(0, 0), 0.5);
  EXPECT_EQ(z(0, 1), 0.5);
  EXPECT_EQ(z.row(0).sum(), 1.0);
}

TEST(MissingRows, UniformInitialization) {
  const RowMatrix u = init_missing_rows(3, 4);
  EXPECT_TRUE((u.array() == 0.25).all());
  EXPECT_EQ(init_missing_rows(0, 4).rows(), 0);

  std::mt19937_64 gen(46);
  const RowMatrix rows = oracle::random_stochastic(3, 4, gen);
  const BipartiteGraph g = assemble_graph(5, rows, {0, 2, 4}, 1);
  EXPECT_EQ(g.missing, (std::vector<Index>{1, 3}));
  EXPECT_EQ(g.Z.row(2), rows.row(1));
  EXPECT_TRUE((g.Z.row(3).array() == 0.25).all());

  const BipartiteGraph none = assemble_graph(2, RowMatrix(0, 4), {}, 0);
  EXPECT_TRUE((none.Z.array() == 0.25).all());
}

TEST(Fusion, WeightedInputMatchesTripleSum) {
  std::mt19937_64 gen(47);
  const Index n = 6, m = 4;
  std::vector<RowMatrix> z;
  std::vector<Matrix> t;
  for (int v = 0; v < 3; ++v) {
    z.push_back(oracle::random_stochastic(n, m, gen));
    t.push_back(oracle::random_orthogonal(m, gen));
  }
  Vector alpha(3);
  alpha << 0.2, 0.5, 0.3;
  const RowMatrix out = weighted_fusion_input(z, t, alpha);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) {
      double ref = 0.0;
      for (int v = 0; v < 3; ++v)
        for (Index l = 0; l < m; ++l) ref += alpha(v) * alpha(v) * z[v](i, l) * t[v](l, j);
      EXPECT_NEAR(out(i, j), ref, 1e-12);
    }

  alpha << 0.0, 1.0, 0.0;
  EXPECT_LT((weighted_fusion_input(z, t, alpha) - z[1] * t[1]).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(weighted_fusion_input({z[0]}, {Matrix::Identity(m, m)}, Vector::Ones(1)), z[0]);
  EXPECT_THROW(weighted_fusion_input(z, {t[0]}, alpha), InvalidArgument);
}
