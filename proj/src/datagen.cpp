#include "graphred/datagen.hpp"

#include "graphred/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace graphred {

PointSet generate_sensor_points(Index n, double side, Rng& rng) {
  require(n >= 2, ErrorKind::parameter, "need at least 2 sensor points");
  require(side > 0.0, ErrorKind::parameter, "domain side must be > 0");
  Matrix p(n, 2);
  for (Index i = 0; i < n; ++i) {
    p(i, 0) = rng.uniform(0.0, side);
    p(i, 1) = rng.uniform(0.0, side);
  }
  return PointSet(std::move(p));
}

Vector generate_bandlimited(const SpectralDecomp& decomp, Index n_band, double offset) {
  require(n_band >= 1 && n_band <= decomp.size(), ErrorKind::parameter,
          "bandwidth must satisfy 1 <= n_band <= N");
  Vector d(n_band);
  for (Index k = 1; k <= n_band; ++k)
    d(k - 1) = std::sin(static_cast<double>(k) * std::numbers::pi / static_cast<double>(n_band)) +
               offset;
  return decomp.basis.leftCols(n_band) * d;
}

Matrix add_noise(const Matrix& x, double sigma, Rng& rng) {
  require(sigma >= 0.0, ErrorKind::parameter, "noise sigma must be >= 0");
  Matrix y = x;
  if (sigma == 0.0) return y;
  for (Index c = 0; c < y.cols(); ++c)
    for (Index r = 0; r < y.rows(); ++r) y(r, c) += sigma * rng.normal();
  return y;
}

Vector add_noise(const Vector& x, double sigma, Rng& rng) {
  return add_noise(Matrix(x), sigma, rng).col(0);
}

std::vector<Index> fps(const PointSet& points, Index m, Index start) {
  const Index n = points.size();
  require(m >= 1 && m <= n, ErrorKind::parameter,
          "FPS target count must satisfy 1 <= m <= N (m=" + std::to_string(m) +
              ", N=" + std::to_string(n) + ")");
  require(start >= 0 && start < n, ErrorKind::parameter, "FPS start index out of range");
  std::vector<Index> chosen{start};
  chosen.reserve(static_cast<std::size_t>(m));
  Vector min_d2 = Vector::Constant(n, std::numeric_limits<double>::infinity());
  min_d2(start) = -1.0;  // selected
  Index last = start;
  while (static_cast<Index>(chosen.size()) < m) {
    Index best = -1;
    double best_d2 = -1.0;
    for (Index i = 0; i < n; ++i) {
      const double d2 = (points.point(i) - points.point(last)).squaredNorm();
      if (d2 < min_d2(i)) min_d2(i) = d2;
      if (min_d2(i) > best_d2) {
        best_d2 = min_d2(i);
        best = i;
      }
    }
    chosen.push_back(best);
    min_d2(best) = -1.0;
    last = best;
  }
  return chosen;
}

SyntheticGraphSignal make_synthetic_sample(const SyntheticSpec& spec, std::uint64_t sample_id) {
  auto rng = Rng::stream(spec.seed, StreamPurpose::sensor_points, {sample_id});
  PointSet points = generate_sensor_points(spec.n_nodes, spec.side, rng);
  Graph graph = normalize_weights(knn_graph(points, spec.k));
  SpectralDecomp decomp = eigendecompose(build_laplacian(graph));
  Vector clean = generate_bandlimited(decomp, spec.n_band, spec.offset);
  return {std::move(points), std::move(graph), std::move(decomp), std::move(clean)};
}

}  // namespace graphred
