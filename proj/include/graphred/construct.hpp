#pragma once

#include "graphred/graph.hpp"
#include "graphred/types.hpp"

namespace graphred {

/// N x d point coordinates, one point per row.
class PointSet {
 public:
  PointSet() = default;
  /// Requires at least one point and finite coordinates.
  explicit PointSet(Matrix coords);

  Index size() const { return coords_.rows(); }
  Index dim() const { return coords_.cols(); }
  const Matrix& coords() const { return coords_; }
  auto point(Index i) const { return coords_.row(i); }

  PointSet scaled(double c) const { return PointSet(coords_ * c); }
  PointSet subset(const std::vector<Index>& rows) const;

 private:
  Matrix coords_;
};

/// Distances below this are treated as coincident points.
inline constexpr double kMinEdgeDistance = 1e-12;

/// Symmetric kNN graph: (i,j) is an edge when either endpoint is among the
/// other's k nearest neighbours (ties at equal distance go to the lower
/// index). Edge weight is 1/||p_i - p_j||.
Graph knn_graph(const PointSet& points, Index k);

/// Same topology as above, but weights are 1/||f_i - f_j|| computed from
/// per-node features (e.g. signal values) instead of the coordinates.
Graph knn_graph(const PointSet& points, Index k, const Matrix& weight_features);

/// Divides all weights by the maximum weight. Throws if the graph has no edges.
Graph normalize_weights(const Graph& graph);

}  // namespace graphred
