#pragma once

#include "agfti/common.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace agfti {

using Complex = std::complex<double>;

template <typename Scalar>
using SliceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Third-order tensor of shape n1 x n2 x n3.
///
/// Storage is slice-major: the n3 frontal slices are contiguous n1 x n2
/// row-major blocks, so entry (i, j, k) lives at ((k * n1) + i) * n2 + j.
/// Per-frequency SVDs therefore operate on contiguous memory, and the
/// mode-3 fibers are strided by n1 * n2.
template <typename Scalar>
class BasicTensor3 {
 public:
  using SliceMap = Eigen::Map<SliceMatrix<Scalar>>;
  using ConstSliceMap = Eigen::Map<const SliceMatrix<Scalar>>;

  BasicTensor3() = default;

  BasicTensor3(Index n1, Index n2, Index n3) : n1_(n1), n2_(n2), n3_(n3) {
    if (n1 <= 0 || n2 <= 0 || n3 <= 0) {
      throw InvalidArgument("tensor dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(n1 * n2 * n3), Scalar{0});
  }

  Index dim1() const { return n1_; }
  Index dim2() const { return n2_; }
  Index dim3() const { return n3_; }
  Index size() const { return n1_ * n2_ * n3_; }
  Index slice_size() const { return n1_ * n2_; }
  bool empty() const { return data_.empty(); }

  bool same_shape(const BasicTensor3& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }

  Scalar& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }
  const Scalar& operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }

  SliceMap slice(Index k) { return SliceMap(data_.data() + k * slice_size(), n1_, n2_); }
  ConstSliceMap slice(Index k) const {
    return ConstSliceMap(data_.data() + k * slice_size(), n1_, n2_);
  }

  std::span<Scalar> data() { return data_; }
  std::span<const Scalar> data() const { return data_; }

  double squared_norm() const {
    double acc = 0.0;
    for (const auto& x : data_) acc += std::norm(x);
    return acc;
  }
  double frobenius_norm() const { return std::sqrt(squared_norm()); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
  }

  bool all_finite() const {
    for (const auto& x : data_) {
      if (!std::isfinite(std::real(x)) || !std::isfinite(std::imag(x))) return false;
    }
    return true;
  }

  BasicTensor3& operator+=(const BasicTensor3& rhs) {
    require_same_shape(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }
  BasicTensor3& operator-=(const BasicTensor3& rhs) {
    require_same_shape(rhs);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
  }
  BasicTensor3& operator*=(Scalar s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend BasicTensor3 operator+(BasicTensor3 lhs, const BasicTensor3& rhs) { return lhs += rhs; }
  friend BasicTensor3 operator-(BasicTensor3 lhs, const BasicTensor3& rhs) { return lhs -= rhs; }
  friend BasicTensor3 operator*(BasicTensor3 lhs, Scalar s) { return lhs *= s; }
  friend BasicTensor3 operator*(Scalar s, BasicTensor3 rhs) { return rhs *= s; }

 private:
  std::size_t offset(Index i, Index j, Index k) const {
    return static_cast<std::size_t>((k * n1_ + i) * n2_ + j);
  }
  void require_same_shape(const BasicTensor3& rhs) const {
    if (!same_shape(rhs)) throw InvalidArgument("tensor shape mismatch");
  }

  Index n1_ = 0;
  Index n2_ = 0;
  Index n3_ = 0;
  std::vector<Scalar> data_;
};

using Tensor3 = BasicTensor3<double>;
using ComplexTensor3 = BasicTensor3<Complex>;

/// t-SVD factors X = U * S * V^T.
struct TSvdResult {
  Tensor3 U;  ///< n1 x n1 x n3, orthogonal
  Tensor3 S;  ///< n1 x n2 x n3, f-diagonal
  Tensor3 V;  ///< n2 x n2 x n3, orthogonal
};

/// Unnormalized forward DFT of every mode-3 fiber.
ComplexTensor3 dft3(const Tensor3& t);

/// Inverse DFT (scaled by 1/n3) of every mode-3 fiber, keeping the complex
/// result.
ComplexTensor3 idft3_complex(const ComplexTensor3& tf);

/// Inverse DFT returning the real part. Throws NumericalError when the
/// imaginary residual exceeds 1e-8 of the result's Frobenius norm.
Tensor3 idft3(const ComplexTensor3& tf);

/// Drops the imaginary part after checking it is negligible (see idft3).
Tensor3 realify(const ComplexTensor3& t);

/// Singular values of every Fourier-domain frontal slice, nonincreasing.
/// Element k holds min(n1, n2) values.
std::vector<Vector> fourier_singular_values(const Tensor3& t);

TSvdResult t_svd(const Tensor3& t);

/// Tensor nuclear norm: (1/n3) times the sum of all Fourier-domain singular
/// values.
double tnn(const Tensor3& t);

/// Proximal operator of tau * tnn: the unique minimizer of
/// tau * tnn(G) + 0.5 * ||G - F||_F^2. Soft-thresholds every Fourier-domain
/// singular value by tau.
Tensor3 tubal_shrink(const Tensor3& f, double tau);

/// t-product A * B for A: n1 x n2 x n3 and B: n2 x n4 x n3.
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

/// Tensor transpose: every frontal slice transposed and slices 2..n3 reversed.
Tensor3 t_transpose(const Tensor3& t);

/// Identity tensor: first frontal slice I, the rest zero.
Tensor3 identity_tensor(Index n, Index n3);

}  // namespace agfti
