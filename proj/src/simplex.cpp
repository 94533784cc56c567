#include "agfti/simplex.hpp"

#include "agfti/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace agfti {

void project_simplex_inplace(Eigen::Ref<Vector> v) {
  const Index m = v.size();
  if (m == 0) throw InvalidArgument("project_simplex: empty vector");
  if (!v.allFinite()) throw InvalidArgument("project_simplex: non-finite input");

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v(a) > v(b); });

  // Largest rho with u_rho - (sum_{r<=rho} u_r - 1) / rho > 0; the first
  // entry always qualifies.
  double prefix = 0.0;
  double theta = v(order[0]) - 1.0;
  for (Index j = 0; j < m; ++j) {
    prefix += v(order[static_cast<std::size_t>(j)]);
    const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
    if (v(order[static_cast<std::size_t>(j)]) - candidate > 0.0) theta = candidate;
  }

  double sum = 0.0;
  for (Index j = 0; j < m; ++j) {
    v(j) = std::max(v(j) - theta, 0.0);
    sum += v(j);
  }
  if (sum > 0.0) {
    v /= sum;
  } else {
    v.setConstant(1.0 / static_cast<double>(m));
  }
}

Vector project_simplex(const Eigen::Ref<const Vector>& v) {
  Vector x = v;
  project_simplex_inplace(x);
  return x;
}

RowMatrix prox_rows(const RowMatrix& target) {
  RowMatrix out = target;
  parallel_for(out.rows(), [&](Index i) {
    Vector row = out.row(i).transpose();
    project_simplex_inplace(row);
    out.row(i) = row.transpose();
  });
  return out;
}

bool on_simplex(const Eigen::Ref<const Vector>& x, double tol) {
  if (x.size() == 0 || !x.allFinite()) return false;
  if (x.minCoeff() < 0.0) return false;
  return std::abs(x.sum() - 1.0) <= tol;
}

bool rows_on_simplex(const RowMatrix& m, double tol) {
  for (Index i = 0; i < m.rows(); ++i) {
    if (!on_simplex(m.row(i).transpose(), tol)) return false;
  }
  return true;
}

}  // namespace agfti
