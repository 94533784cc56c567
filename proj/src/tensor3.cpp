#include "agfti/tensor3.hpp"

#include "agfti/parallel.hpp"

#include <fftw3.h>

#include <mutex>
#include <string>

namespace agfti {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Applies a 1-D complex DFT of length n3 to every mode-3 fiber, in place.
void fiber_dft(ComplexTensor3& t, int sign) {
  const int n3 = static_cast<int>(t.dim3());
  const int howmany = static_cast<int>(t.slice_size());
  auto* buf = reinterpret_cast<fftw_complex*>(t.data().data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &n3, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany,
                              1, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw NumericalError("fftw: failed to create plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

// Frequency k and n3 - k of a real tensor's spectrum are complex conjugates,
// so only slices 0..n3/2 need work. Slice 0 and (for even n3) slice n3/2 are
// real.
Index independent_slices(Index n3) { return n3 / 2 + 1; }

bool self_conjugate(Index k, Index n3) { return k == 0 || 2 * k == n3; }

using ComplexSlice = SliceMatrix<Complex>;
using RealSlice = SliceMatrix<double>;

void mirror_conjugates(ComplexTensor3& tf) {
  const Index n3 = tf.dim3();
  for (Index k = independent_slices(n3); k < n3; ++k) {
    tf.slice(k) = tf.slice(n3 - k).conjugate();
  }
}

[[noreturn]] void svd_failure(Index k) {
  throw NumericalError("SVD did not converge on Fourier slice " + std::to_string(k));
}

void require_finite(const Tensor3& t, const char* what) {
  if (!t.all_finite()) throw InvalidArgument(std::string(what) + ": tensor has non-finite entries");
}

}  // namespace

ComplexTensor3 dft3(const Tensor3& t) {
  ComplexTensor3 out(t.dim1(), t.dim2(), t.dim3());
  auto src = t.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  fiber_dft(out, FFTW_FORWARD);
  return out;
}

ComplexTensor3 idft3_complex(const ComplexTensor3& tf) {
  ComplexTensor3 out = tf;
  fiber_dft(out, FFTW_BACKWARD);
  out *= Complex(1.0 / static_cast<double>(tf.dim3()), 0.0);
  return out;
}

Tensor3 realify(const ComplexTensor3& t) {
  Tensor3 out(t.dim1(), t.dim2(), t.dim3());
  double imag_sq = 0.0;
  double total_sq = 0.0;
  auto src = t.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i].real();
    imag_sq += src[i].imag() * src[i].imag();
    total_sq += std::norm(src[i]);
  }
  if (std::sqrt(imag_sq) > 1e-8 * std::sqrt(total_sq)) {
    throw NumericalError("inverse transform has a non-negligible imaginary part (" +
                         std::to_string(std::sqrt(imag_sq)) + " vs norm " +
                         std::to_string(std::sqrt(total_sq)) + ")");
  }
  return out;
}

Tensor3 idft3(const ComplexTensor3& tf) { return realify(idft3_complex(tf)); }

std::vector<Vector> fourier_singular_values(const Tensor3& t) {
  require_finite(t, "fourier_singular_values");
  const ComplexTensor3 tf = dft3(t);
  const Index n3 = t.dim3();
  std::vector<Vector> sv(static_cast<std::size_t>(n3));
  parallel_for(independent_slices(n3), [&](Index k) {
    Vector s;
    if (self_conjugate(k, n3)) {
      Eigen::JacobiSVD<RealSlice> svd(tf.slice(k).real());
      if (svd.info() != Eigen::Success) svd_failure(k);
      s = svd.singularValues();
    } else {
      Eigen::JacobiSVD<ComplexSlice> svd(tf.slice(k));
      if (svd.info() != Eigen::Success) svd_failure(k);
      s = svd.singularValues();
    }
    if (!s.allFinite()) svd_failure(k);
    sv[static_cast<std::size_t>(k)] = s;
  });
  for (Index k = independent_slices(n3); k < n3; ++k) {
    sv[static_cast<std::size_t>(k)] = sv[static_cast<std::size_t>(n3 - k)];
  }
  return sv;
}

TSvdResult t_svd(const Tensor3& t) {
  require_finite(t, "t_svd");
  const Index n1 = t.dim1();
  const Index n2 = t.dim2();
  const Index n3 = t.dim3();
  const Index r = std::min(n1, n2);
  const ComplexTensor3 tf = dft3(t);
  ComplexTensor3 uf(n1, n1, n3);
  ComplexTensor3 sf(n1, n2, n3);
  ComplexTensor3 vf(n2, n2, n3);

  parallel_for(independent_slices(n3), [&](Index k) {
    const unsigned options = Eigen::ComputeFullU | Eigen::ComputeFullV;
    auto s_slice = sf.slice(k);
    if (self_conjugate(k, n3)) {
      Eigen::JacobiSVD<RealSlice> svd(tf.slice(k).real(), options);
      if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) svd_failure(k);
      uf.slice(k) = svd.matrixU().cast<Complex>();
      vf.slice(k) = svd.matrixV().cast<Complex>();
      for (Index i = 0; i < r; ++i) s_slice(i, i) = svd.singularValues()(i);
    } else {
      Eigen::JacobiSVD<ComplexSlice> svd(tf.slice(k), options);
      if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) svd_failure(k);
      uf.slice(k) = svd.matrixU();
      vf.slice(k) = svd.matrixV();
      for (Index i = 0; i < r; ++i) s_slice(i, i) = svd.singularValues()(i);
    }
  });
  mirror_conjugates(uf);
  mirror_conjugates(sf);
  mirror_conjugates(vf);
  return TSvdResult{idft3(uf), idft3(sf), idft3(vf)};
}

double tnn(const Tensor3& t) {
  double total = 0.0;
  for (const auto& s : fourier_singular_values(t)) total += s.sum();
  return total / static_cast<double>(t.dim3());
}

Tensor3 tubal_shrink(const Tensor3& f, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("tubal_shrink: tau must be nonnegative");
  require_finite(f, "tubal_shrink");
  if (tau == 0.0) return f;
  const Index n3 = f.dim3();
  ComplexTensor3 gf = dft3(f);

  parallel_for(independent_slices(n3), [&](Index k) {
    const unsigned options = Eigen::ComputeThinU | Eigen::ComputeThinV;
    auto slice = gf.slice(k);
    if (self_conjugate(k, n3)) {
      Eigen::JacobiSVD<RealSlice> svd(slice.real(), options);
      if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) svd_failure(k);
      Vector s = (svd.singularValues().array() - tau).max(0.0).matrix();
      slice = (svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose()).cast<Complex>();
    } else {
      Eigen::JacobiSVD<ComplexSlice> svd(slice, options);
      if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) svd_failure(k);
      Vector s = (svd.singularValues().array() - tau).max(0.0).matrix();
      slice = svd.matrixU() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
    }
  });
  mirror_conjugates(gf);
  return idft3(gf);
}

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  if (a.dim2() != b.dim1() || a.dim3() != b.dim3()) {
    throw InvalidArgument("t_product: inner dimensions or tube lengths differ");
  }
  const ComplexTensor3 af = dft3(a);
  const ComplexTensor3 bf = dft3(b);
  ComplexTensor3 cf(a.dim1(), b.dim2(), a.dim3());
  for (Index k = 0; k < a.dim3(); ++k) cf.slice(k) = af.slice(k) * bf.slice(k);
  return idft3(cf);
}

Tensor3 t_transpose(const Tensor3& t) {
  const Index n3 = t.dim3();
  Tensor3 out(t.dim2(), t.dim1(), n3);
  out.slice(0) = t.slice(0).transpose();
  for (Index k = 1; k < n3; ++k) out.slice(k) = t.slice(n3 - k).transpose();
  return out;
}

Tensor3 identity_tensor(Index n, Index n3) {
  Tensor3 out(n, n, n3);
  out.slice(0).setIdentity();
  return out;
}

}  // namespace agfti
