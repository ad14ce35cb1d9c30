#include "graphred/graph.hpp"

#include "graphred/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace graphred {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_graph: return "invalid-graph";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::convergence: return "convergence-failure";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::stagnation: return "stagnation";
    case ErrorKind::undefined_check: return "undefined-check";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

Graph::Graph(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  const Index n = adjacency_.rows();
  require(adjacency_.cols() == n, ErrorKind::invalid_graph,
          "adjacency must be square");
  require(n >= 2, ErrorKind::invalid_graph, "graph needs at least 2 nodes");
  for (Index i = 0; i < n; ++i) {
    require(adjacency_(i, i) == 0.0, ErrorKind::invalid_graph,
            "adjacency diagonal must be zero (node " + std::to_string(i) + ")");
    for (Index j = 0; j < n; ++j) {
      const double w = adjacency_(i, j);
      require(std::isfinite(w) && w >= 0.0, ErrorKind::invalid_graph,
              "negative or non-finite weight at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
      require(w == adjacency_(j, i), ErrorKind::invalid_graph,
              "adjacency not symmetric at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
    }
  }
}

Graph Graph::from_edges(Index n_nodes, const std::vector<Edge>& edges) {
  require(n_nodes >= 2, ErrorKind::invalid_graph, "graph needs at least 2 nodes");
  Matrix w = Matrix::Zero(n_nodes, n_nodes);
  for (const auto& e : edges) {
    require(e.i >= 0 && e.i < n_nodes && e.j >= 0 && e.j < n_nodes,
            ErrorKind::invalid_graph, "edge index out of range");
    require(e.i != e.j, ErrorKind::invalid_graph, "self loops are not allowed");
    w(e.i, e.j) = e.weight;
    w(e.j, e.i) = e.weight;
  }
  return Graph(std::move(w));
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  const Index n = n_nodes();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (adjacency_(i, j) > 0.0) out.push_back({i, j, adjacency_(i, j)});
  return out;
}

Index Graph::n_edges() const {
  Index count = 0;
  const Index n = n_nodes();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (adjacency_(i, j) > 0.0) ++count;
  return count;
}

Laplacian build_laplacian(const Graph& graph) {
  const Matrix& w = graph.adjacency();
  Vector degree = w.rowwise().sum();
  Matrix l = -w;
  l.diagonal() += degree;
  return Laplacian(std::move(l), std::move(degree));
}

SpectralDecomp eigendecompose(const Laplacian& lap) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(lap.matrix());
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge for N=" << lap.size()
        << " (Eigen info code " << static_cast<int>(solver.info())
        << ", max iterations " << Eigen::SelfAdjointEigenSolver<Matrix>::m_maxIterations
        << " x N)";
    fail(ErrorKind::numerical_failure, msg.str());
  }
  SpectralDecomp out{solver.eigenvectors(), solver.eigenvalues()};
  for (Index c = 0; c < out.basis.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index r = 0; r < out.basis.rows(); ++r) {
      const double a = std::abs(out.basis(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (out.basis(arg, c) < 0.0) out.basis.col(c) *= -1.0;
  }
  return out;
}

Vector gft(const SpectralDecomp& decomp, const Vector& x) {
  require(x.size() == decomp.size(), ErrorKind::dimension,
          "gft: signal length " + std::to_string(x.size()) + " != N=" +
              std::to_string(decomp.size()));
  return decomp.basis.transpose() * x;
}

Vector igft(const SpectralDecomp& decomp, const Vector& x_hat) {
  require(x_hat.size() == decomp.size(), ErrorKind::dimension,
          "igft: spectrum length " + std::to_string(x_hat.size()) + " != N=" +
              std::to_string(decomp.size()));
  return decomp.basis * x_hat;
}

double quadratic_form(const Laplacian& lap, const Vector& x) {
  require(x.size() == lap.size(), ErrorKind::dimension,
          "quadratic_form: dimension mismatch");
  return x.dot(lap.matrix() * x);
}

double quadratic_form_edges(const Graph& graph, const Vector& x) {
  require(x.size() == graph.n_nodes(), ErrorKind::dimension,
          "quadratic_form_edges: dimension mismatch");
  double s = 0.0;
  for (const auto& e : graph.edges()) {
    const double d = x(e.i) - x(e.j);
    s += e.weight * d * d;
  }
  return s;
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << "# nodes " << graph.n_nodes() << '\n';
  out << std::setprecision(17);
  for (const auto& e : graph.edges()) out << e.i << ' ' << e.j << ' ' << e.weight << '\n';
}

void write_edge_list(const std::string& path, const Graph& graph) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path);
  write_edge_list(out, graph);
  require(static_cast<bool>(out), ErrorKind::io, "write failed: " + path);
}

Graph read_edge_list(std::istream& in, Index n_nodes) {
  std::vector<Edge> edges;
  Index header_nodes = -1;
  Index max_index = -1;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string key;
      Index value = 0;
      if ((hs >> key >> value) && key == "nodes") header_nodes = value;
      continue;
    }
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double w = 0.0;
    std::string rest;
    if (!(ls >> i >> j >> w) || (ls >> rest)) {
      fail(ErrorKind::parse, "edge list line " + std::to_string(line_no) +
                                 ": expected `i j w`");
    }
    if (i < 0 || j < 0) {
      fail(ErrorKind::parse, "edge list line " + std::to_string(line_no) +
                                 ": negative node index");
    }
    edges.push_back({static_cast<Index>(i), static_cast<Index>(j), w});
    max_index = std::max<Index>(max_index, std::max<Index>(i, j));
  }
  Index n = n_nodes >= 0 ? n_nodes : (header_nodes >= 0 ? header_nodes : max_index + 1);
  return Graph::from_edges(n, edges);
}

Graph read_edge_list(const std::string& path, Index n_nodes) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
  return read_edge_list(in, n_nodes);
}

}  // namespace graphred
