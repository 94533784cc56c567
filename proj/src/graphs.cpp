#include "agfti/graphs.hpp"

#include "agfti/parallel.hpp"
#include "agfti/rng.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace agfti {
namespace {

constexpr Index kInitCandidates = 32;
constexpr int kMaxTwoMeansIters = 50;

bool is_power_of_two(Index m) { return m > 0 && (m & (m - 1)) == 0; }

Vector centroid(const Matrix& x, const std::vector<Index>& rows) {
  Vector c = Vector::Zero(x.cols());
  for (Index r : rows) c += x.row(r).transpose();
  return c / static_cast<double>(rows.size());
}

// One balanced two-means split. Returns {left, right} with
// |left| = floor(s/2).
std::pair<std::vector<Index>, std::vector<Index>> balanced_split(const Matrix& x,
                                                                 const std::vector<Index>& rows,
                                                                 CounterRng& rng) {
  const auto s = static_cast<Index>(rows.size());

  std::vector<Index> candidates = rows;
  const Index pool = std::min(s, kInitCandidates);
  for (Index i = 0; i < pool; ++i) {
    const auto j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(s - i)));
    std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
  }
  Index best_a = candidates[0];
  Index best_b = candidates[pool > 1 ? 1 : 0];
  double best = -1.0;
  for (Index a = 0; a < pool; ++a) {
    for (Index b = a + 1; b < pool; ++b) {
      const Index ra = candidates[static_cast<std::size_t>(a)];
      const Index rb = candidates[static_cast<std::size_t>(b)];
      const double d = (x.row(ra) - x.row(rb)).squaredNorm();
      if (d > best) {
        best = d;
        best_a = ra;
        best_b = rb;
      }
    }
  }
  Vector c1 = x.row(best_a).transpose();
  Vector c2 = x.row(best_b).transpose();

  const std::size_t half = static_cast<std::size_t>(s / 2);
  std::vector<Index> order(rows.size());
  std::vector<double> delta(rows.size());
  std::vector<char> in_left(rows.size(), 2);
  for (int iter = 0; iter < kMaxTwoMeansIters; ++iter) {
    for (std::size_t p = 0; p < rows.size(); ++p) {
      const auto xi = x.row(rows[p]).transpose();
      delta[p] = (xi - c1).squaredNorm() - (xi - c2).squaredNorm();
    }
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return delta[static_cast<std::size_t>(a)] <
                                                    delta[static_cast<std::size_t>(b)]; });
    bool changed = false;
    for (std::size_t q = 0; q < order.size(); ++q) {
      const char side = q < half ? 1 : 0;
      auto& slot = in_left[static_cast<std::size_t>(order[q])];
      if (slot != side) {
        slot = side;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Index> left;
    std::vector<Index> right;
    for (std::size_t p = 0; p < rows.size(); ++p) (in_left[p] ? left : right).push_back(rows[p]);
    c1 = centroid(x, left);
    c2 = centroid(x, right);
  }

  std::vector<Index> left;
  std::vector<Index> right;
  left.reserve(half);
  right.reserve(rows.size() - half);
  for (std::size_t p = 0; p < rows.size(); ++p) (in_left[p] ? left : right).push_back(rows[p]);
  return {std::move(left), std::move(right)};
}

void split_recursive(const Matrix& x, std::vector<Index> rows, int depth, std::uint64_t node,
                     std::uint64_t seed, std::vector<std::vector<Index>>& leaves) {
  if (depth == 0) {
    leaves.push_back(std::move(rows));
    return;
  }
  CounterRng rng(CounterRng::derive(seed, node));
  auto [left, right] = balanced_split(x, rows, rng);
  split_recursive(x, std::move(left), depth - 1, 2 * node, seed, leaves);
  split_recursive(x, std::move(right), depth - 1, 2 * node + 1, seed, leaves);
}

}  // namespace

AnchorSet bkhk_anchors(const Matrix& x, Index m, std::uint64_t seed, int view) {
  if (!is_power_of_two(m)) {
    throw InvalidArgument("bkhk_anchors: anchor count " + std::to_string(m) +
                          " is not a power of two");
  }
  if (m > x.rows()) {
    throw InvalidArgument("bkhk_anchors: " + std::to_string(m) + " anchors requested from " +
                          std::to_string(x.rows()) + " samples");
  }
  if (!x.allFinite()) throw InvalidArgument("bkhk_anchors: non-finite features");

  int depth = 0;
  while ((Index{1} << depth) < m) ++depth;

  std::vector<Index> all(static_cast<std::size_t>(x.rows()));
  std::iota(all.begin(), all.end(), Index{0});

  AnchorSet out;
  out.view = view;
  split_recursive(x, std::move(all), depth, 1, seed, out.leaves);
  out.points.resize(m, x.cols());
  for (Index j = 0; j < m; ++j) {
    out.points.row(j) = centroid(x, out.leaves[static_cast<std::size_t>(j)]).transpose();
  }
  return out;
}

RowMatrix build_bipartite(const Matrix& x, const AnchorSet& anchors, Index k) {
  const Index m = anchors.points.rows();
  if (k < 1 || k >= m) {
    throw InvalidArgument("build_bipartite: need 1 <= k < m, got k = " + std::to_string(k) +
                          ", m = " + std::to_string(m));
  }
  if (x.cols() != anchors.points.cols()) {
    throw InvalidArgument("build_bipartite: feature dimension differs from anchors");
  }
  const Index n = x.rows();
  RowMatrix z = RowMatrix::Zero(n, m);

  parallel_for(n, [&](Index i) {
    std::vector<double> d(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
      d[static_cast<std::size_t>(j)] = (x.row(i) - anchors.points.row(j)).squaredNorm();
    }
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + k + 1, order.end(), [&](Index a, Index b) {
      const double da = d[static_cast<std::size_t>(a)];
      const double db = d[static_cast<std::size_t>(b)];
      return da < db || (da == db && a < b);
    });

    const double d_next = d[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    double head = 0.0;
    for (Index h = 0; h < k; ++h) head += d[static_cast<std::size_t>(order[static_cast<std::size_t>(h)])];
    const double denom = static_cast<double>(k) * d_next - head;

    if (!(denom > 1e-14 * static_cast<double>(k) * d_next) || denom <= 0.0) {
      for (Index h = 0; h < k; ++h) z(i, order[static_cast<std::size_t>(h)]) = 1.0 / static_cast<double>(k);
      return;
    }
    for (Index h = 0; h < k; ++h) {
      const Index j = order[static_cast<std::size_t>(h)];
      z(i, j) = (d_next - d[static_cast<std::size_t>(j)]) / denom;
    }
    // Weights already sum to one analytically; divide out rounding drift.
    z.row(i) /= z.row(i).sum();
  });
  return z;
}

RowMatrix init_missing_rows(Index count, Index m) {
  if (m <= 0) throw InvalidArgument("init_missing_rows: m must be positive");
  return RowMatrix::Constant(count, m, 1.0 / static_cast<double>(m));
}

BipartiteGraph assemble_graph(Index n, const RowMatrix& existing_rows,
                              const std::vector<Index>& existing, int view) {
  if (existing_rows.rows() != static_cast<Index>(existing.size())) {
    throw InvalidArgument("assemble_graph: row count differs from existing index count");
  }
  const Index m = existing_rows.cols();
  BipartiteGraph g;
  g.view = view;
  g.Z = init_missing_rows(n, m);
  std::vector<char> present(static_cast<std::size_t>(n), 0);
  for (std::size_t r = 0; r < existing.size(); ++r) {
    const Index i = existing[r];
    if (i < 0 || i >= n) throw InvalidArgument("assemble_graph: sample index out of range");
    if (present[static_cast<std::size_t>(i)]) {
      throw InvalidArgument("assemble_graph: duplicate existing index");
    }
    present[static_cast<std::size_t>(i)] = 1;
    g.Z.row(i) = existing_rows.row(static_cast<Index>(r));
  }
  for (Index i = 0; i < n; ++i) {
    (present[static_cast<std::size_t>(i)] ? g.existing : g.missing).push_back(i);
  }
  return g;
}

RowMatrix weighted_fusion_input(const std::vector<RowMatrix>& z, const std::vector<Matrix>& t,
                                const Vector& alpha) {
  const auto views = static_cast<Index>(z.size());
  if (views == 0) throw InvalidArgument("weighted_fusion_input: no views");
  if (static_cast<Index>(t.size()) != views || alpha.size() != views) {
    throw InvalidArgument("weighted_fusion_input: view counts of Z, T and alpha differ");
  }
  const Index n = z[0].rows();
  const Index m = z[0].cols();
  RowMatrix out = RowMatrix::Zero(n, m);
  for (Index v = 0; v < views; ++v) {
    const auto& zv = z[static_cast<std::size_t>(v)];
    const auto& tv = t[static_cast<std::size_t>(v)];
    if (zv.rows() != n || zv.cols() != m || tv.rows() != m || tv.cols() != m) {
      throw InvalidArgument("weighted_fusion_input: shape mismatch in view " + std::to_string(v));
    }
    const double w = alpha(v) * alpha(v);
    if (w != 0.0) out.noalias() += w * (zv * tv);
  }
  return out;
}

}  // namespace agfti
