#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive: direct summations, dense solves and exhaustive enumeration, sharing
// no code with the library kernels they check.

#include "agfti/common.hpp"
#include "agfti/tensor3.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using agfti::Index;
using agfti::Matrix;
using agfti::RowMatrix;
using agfti::Tensor3;
using agfti::Vector;
using CMatrix = Eigen::MatrixXcd;

inline Tensor3 random_tensor(Index n1, Index n2, Index n3, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Tensor3 t(n1, n2, n3);
  for (auto& x : t.data()) x = nd(gen);
  return t;
}

inline Matrix random_matrix(Index r, Index c, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = nd(gen);
  return m;
}

// Rows drawn from a Dirichlet(1) with a random number of exact zeros.
inline RowMatrix random_stochastic(Index n, Index m, std::mt19937_64& gen, double zero_prob = 0.3) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u;
  RowMatrix p(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) p(i, j) = u(gen) < zero_prob ? 0.0 : ex(gen);
    if (p.row(i).sum() == 0.0) p(i, static_cast<Index>(gen() % static_cast<std::uint64_t>(m))) = 1.0;
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

inline Matrix random_orthogonal(Index m, std::mt19937_64& gen) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(m, m, gen));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

// Fourier slice k of t by direct summation: sum_l t(:,:,l) exp(-2 pi i k l / n3).
inline CMatrix naive_fourier_slice(const Tensor3& t, Index k) {
  const Index n3 = t.dim3();
  CMatrix out = CMatrix::Zero(t.dim1(), t.dim2());
  for (Index l = 0; l < n3; ++l) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * l) / static_cast<double>(n3);
    const std::complex<double> w(std::cos(ang), std::sin(ang));
    for (Index i = 0; i < t.dim1(); ++i)
      for (Index j = 0; j < t.dim2(); ++j) out(i, j) += w * t(i, j, l);
  }
  return out;
}

inline double naive_tnn(const Tensor3& t) {
  double total = 0.0;
  for (Index k = 0; k < t.dim3(); ++k) {
    Eigen::JacobiSVD<CMatrix> svd(naive_fourier_slice(t, k));
    total += svd.singularValues().sum();
  }
  return total / static_cast<double>(t.dim3());
}

// Matrix singular value thresholding through a dense SVD.
inline Matrix svt(const Matrix& a, double tau) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vector s = (svd.singularValues().array() - tau).cwiseMax(0.0);
  Matrix sd = Matrix::Zero(a.rows(), a.cols());
  for (Index i = 0; i < s.size(); ++i) sd(i, i) = s(i);
  return svd.matrixU() * sd * svd.matrixV().transpose();
}

inline Matrix unfold(const Tensor3& t) {
  Matrix out(t.dim1() * t.dim3(), t.dim2());
  for (Index k = 0; k < t.dim3(); ++k) out.block(k * t.dim1(), 0, t.dim1(), t.dim2()) = t.slice(k);
  return out;
}

inline Tensor3 fold(const Matrix& m, Index n1, Index n2, Index n3) {
  Tensor3 t(n1, n2, n3);
  for (Index k = 0; k < n3; ++k) t.slice(k) = m.block(k * n1, 0, n1, n2);
  return t;
}

// A * B = fold(bcirc(A) unfold(B)).
inline Tensor3 circ_product(const Tensor3& a, const Tensor3& b) {
  const Index n1 = a.dim1(), n2 = a.dim2(), n3 = a.dim3();
  Matrix bc(n1 * n3, n2 * n3);
  for (Index r = 0; r < n3; ++r)
    for (Index c = 0; c < n3; ++c) bc.block(r * n1, c * n2, n1, n2) = a.slice((r - c + n3) % n3);
  return fold(bc * unfold(b), n1, b.dim2(), n3);
}

// min_z (a/2)||z||^2 + b^T z over the probability simplex, by enumerating
// every support set and solving its KKT system. Exponential in size; m <= 10.
inline Vector simplex_qp(double a, const Vector& b) {
  const Index m = b.size();
  Vector best;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    double sum_b = 0.0;
    int count = 0;
    for (Index j = 0; j < m; ++j)
      if (mask & (1u << j)) {
        sum_b += b(j);
        ++count;
      }
    // z_j = (mu - b_j) / a on the support, sum z = 1.
    const double mu = (a + sum_b) / count;
    Vector z = Vector::Zero(m);
    bool feasible = true;
    for (Index j = 0; j < m; ++j)
      if (mask & (1u << j)) {
        z(j) = (mu - b(j)) / a;
        if (z(j) < -1e-15) feasible = false;
      }
    if (!feasible) continue;
    z = z.cwiseMax(0.0);
    const double val = 0.5 * a * z.squaredNorm() + b.dot(z);
    if (val < best_val) {
      best_val = val;
      best = z;
    }
  }
  return best;
}

inline Vector project_simplex(const Vector& v) { return simplex_qp(1.0, -v); }

// Dense normalized bipartite Laplacian L~ = I - S^ with
// S^ = [0, P L^-1/2; L^-1/2 P^T, 0], L = diag(column sums of P).
inline Matrix dense_laplacian(const RowMatrix& p) {
  const Index n = p.rows(), m = p.cols();
  Matrix s = Matrix::Zero(n + m, n + m);
  for (Index j = 0; j < m; ++j) {
    double deg = 0.0;
    for (Index i = 0; i < n; ++i) deg += p(i, j);
    const double isq = 1.0 / std::sqrt(deg);
    for (Index i = 0; i < n; ++i) {
      s(i, n + j) = p(i, j) * isq;
      s(n + j, i) = p(i, j) * isq;
    }
  }
  return Matrix::Identity(n + m, n + m) - s;
}

// [F; Q] = (L~ + B^)^-1 B^ [Y; 0] by a dense LU solve.
inline Matrix dense_label_solve(const RowMatrix& p, const Vector& b_diag, const Matrix& y) {
  const Index n = p.rows(), m = p.cols();
  Matrix lhs = dense_laplacian(p);
  lhs.diagonal() += b_diag;
  Matrix yhat = Matrix::Zero(n + m, y.cols());
  yhat.topRows(n) = y;
  return lhs.fullPivLu().solve(b_diag.asDiagonal() * yhat);
}

// Tr(F^T S^ F) + 2 Tr(B^ Y^ F^T) - Tr(F^T (I + B^) F) with dense matrices.
inline double dense_performance_gain(const RowMatrix& p, const Vector& b_diag, const Matrix& y,
                                     const Matrix& fhat) {
  const Index n = p.rows(), m = p.cols();
  const Matrix s = Matrix::Identity(n + m, n + m) - dense_laplacian(p);
  Matrix yhat = Matrix::Zero(n + m, y.cols());
  yhat.topRows(n) = y;
  Matrix ib = Matrix::Identity(n + m, n + m);
  ib.diagonal() += b_diag;
  return (fhat.transpose() * s * fhat).trace() +
         2.0 * (b_diag.asDiagonal() * yhat * fhat.transpose()).trace() -
         (fhat.transpose() * ib * fhat).trace();
}

inline std::vector<int> argmax_rows(const Matrix& f) {
  std::vector<int> out;
  for (Index i = 0; i < f.rows(); ++i) {
    int best = 0;
    double bv = f(i, 0);
    for (Index j = 1; j < f.cols(); ++j)
      if (f(i, j) > bv) {
        bv = f(i, j);
        best = static_cast<int>(j);
      }
    out.push_back(best);
  }
  return out;
}

// Standard sequential SplitMix64 (Vigna): state += golden gamma, then mix.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

}  // namespace oracle
