#pragma once

// Weighted undirected graphs, the combinatorial Laplacian and its
// eigendecomposition (graph Fourier basis).
//
// Storage is dense: every operation downstream needs the full eigenbasis
// anyway, and the working sizes are a few hundred nodes.

#include "graphred/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace graphred {

struct Edge {
  Index i;
  Index j;
  double weight;
};

/// Undirected graph with symmetric nonnegative adjacency and zero diagonal.
/// Immutable once constructed.
class Graph {
 public:
  /// Validates symmetry, zero diagonal, nonnegativity and N >= 2.
  /// Throws Error(invalid_graph) otherwise.
  explicit Graph(Matrix adjacency);

  /// Builds from an edge list; each undirected edge listed once.
  static Graph from_edges(Index n_nodes, const std::vector<Edge>& edges);

  Index n_nodes() const { return adjacency_.rows(); }
  const Matrix& adjacency() const { return adjacency_; }

  /// Edges with positive weight, i < j, in row-major order.
  std::vector<Edge> edges() const;
  Index n_edges() const;
  double max_weight() const { return adjacency_.maxCoeff(); }

 private:
  Matrix adjacency_;
};

/// L = Delta - W.
class Laplacian {
 public:
  const Matrix& matrix() const { return matrix_; }
  const Vector& degree() const { return degree_; }
  Index size() const { return matrix_.rows(); }

 private:
  friend Laplacian build_laplacian(const Graph& graph);
  Laplacian(Matrix matrix, Vector degree)
      : matrix_(std::move(matrix)), degree_(std::move(degree)) {}

  Matrix matrix_;
  Vector degree_;
};

/// Orthonormal eigenbasis U (columns) and ascending eigenvalues.
struct SpectralDecomp {
  Matrix basis;
  Vector eigenvalues;

  Index size() const { return eigenvalues.size(); }
};

Laplacian build_laplacian(const Graph& graph);

/// Full symmetric eigendecomposition. Eigenvalues ascending; each eigenvector
/// is sign-normalized so its largest-magnitude entry is positive (first such
/// entry on exact ties).
SpectralDecomp eigendecompose(const Laplacian& lap);

Vector gft(const SpectralDecomp& decomp, const Vector& x);
Vector igft(const SpectralDecomp& decomp, const Vector& x_hat);

/// x^T L x.
double quadratic_form(const Laplacian& lap, const Vector& x);
/// Sum over edges of W_nm (x_n - x_m)^2; the same quantity as quadratic_form.
double quadratic_form_edges(const Graph& graph, const Vector& x);

/// Edge-list text format: one `i j w` line per undirected edge, 0-based.
/// Lines starting with '#' are comments. The node count is written as a
/// `# nodes N` header so isolated trailing nodes survive a round trip.
void write_edge_list(std::ostream& out, const Graph& graph);
void write_edge_list(const std::string& path, const Graph& graph);
/// `n_nodes` < 0 means: take it from the header, else max index + 1.
Graph read_edge_list(std::istream& in, Index n_nodes = -1);
Graph read_edge_list(const std::string& path, Index n_nodes = -1);

}  // namespace graphred
