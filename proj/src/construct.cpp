#include "graphred/construct.hpp"

#include "graphred/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphred {

PointSet::PointSet(Matrix coords) : coords_(std::move(coords)) {
  require(coords_.rows() >= 1 && coords_.cols() >= 1, ErrorKind::parameter,
          "point set must have at least one point and one dimension");
  require(coords_.allFinite(), ErrorKind::parameter, "point coordinates must be finite");
}

PointSet PointSet::subset(const std::vector<Index>& rows) const {
  Matrix out(static_cast<Index>(rows.size()), dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r] >= 0 && rows[r] < size(), ErrorKind::parameter,
            "subset index out of range");
    out.row(static_cast<Index>(r)) = coords_.row(rows[r]);
  }
  return PointSet(std::move(out));
}

namespace {

// Boolean adjacency of the union-symmetrized kNN relation.
std::vector<std::vector<Index>> knn_neighbours(const PointSet& points, Index k) {
  const Index n = points.size();
  require(n >= 2, ErrorKind::parameter, "kNN graph needs at least 2 points");
  require(k >= 1 && k < n, ErrorKind::parameter,
          "k must satisfy 1 <= k < N (k=" + std::to_string(k) +
              ", N=" + std::to_string(n) + ")");
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n - 1));
  std::vector<double> dist2(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      dist2[static_cast<std::size_t>(j)] = (points.point(i) - points.point(j)).squaredNorm();
    order.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index a, Index b) {
      const double da = dist2[static_cast<std::size_t>(a)];
      const double db = dist2[static_cast<std::size_t>(b)];
      return da < db || (da == db && a < b);
    });
    for (Index r = 0; r < k; ++r) out[static_cast<std::size_t>(i)].push_back(order[static_cast<std::size_t>(r)]);
  }
  return out;
}

Graph weighted_knn(const PointSet& points, Index k, const Matrix& features) {
  const auto nbrs = knn_neighbours(points, k);
  const Index n = points.size();
  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j : nbrs[static_cast<std::size_t>(i)]) {
      const double d = (features.row(i) - features.row(j)).norm();
      if (d < kMinEdgeDistance) {
        fail(ErrorKind::parameter,
             "degenerate distance between nodes " + std::to_string(i) + " and " +
                 std::to_string(j) + " (duplicate points give an infinite weight)");
      }
      w(i, j) = 1.0 / d;
      w(j, i) = w(i, j);
    }
  }
  return Graph(std::move(w));
}

}  // namespace

Graph knn_graph(const PointSet& points, Index k) {
  return weighted_knn(points, k, points.coords());
}

Graph knn_graph(const PointSet& points, Index k, const Matrix& weight_features) {
  require(weight_features.rows() == points.size(), ErrorKind::dimension,
          "weight features must have one row per point");
  return weighted_knn(points, k, weight_features);
}

Graph normalize_weights(const Graph& graph) {
  const double wmax = graph.max_weight();
  require(wmax > 0.0, ErrorKind::parameter, "normalize_weights: graph has no edges");
  return Graph(graph.adjacency() / wmax);
}

}  // namespace graphred
