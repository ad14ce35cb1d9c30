#pragma once

#include "graphred/construct.hpp"
#include "graphred/graph.hpp"
#include "graphred/rng.hpp"
#include "graphred/types.hpp"

#include <cstdint>
#include <vector>

namespace graphred {

/// Synthetic sensor-network protocol defaults.
struct SyntheticSpec {
  Index n_nodes = 100;
  double side = 100.0;
  Index k = 5;
  Index n_band = 3;
  double offset = 2.0;
  std::vector<double> sigmas{10, 15, 20, 25, 30};
  int n_train = 10;
  int n_test = 5;
  std::uint64_t seed = 0;
};

/// i.i.d. uniform points in [0, side]^2.
PointSet generate_sensor_points(Index n, double side, Rng& rng);

/// x = U[:, :n_band] d with d_k = sin(k pi / n_band) + offset, k = 1..n_band.
Vector generate_bandlimited(const SpectralDecomp& decomp, Index n_band, double offset);

/// x + n with n ~ N(0, sigma^2 I), column by column.
Matrix add_noise(const Matrix& x, double sigma, Rng& rng);
Vector add_noise(const Vector& x, double sigma, Rng& rng);

/// Greedy farthest point sampling: start at `start`, then repeatedly add the
/// point whose distance to the selected set is largest (lowest index on
/// ties). Returns the selected row indices in selection order.
std::vector<Index> fps(const PointSet& points, Index m, Index start = 0);

/// One synthetic sample: points, normalized kNN graph, its spectrum and the
/// clean bandlimited signal.
struct SyntheticGraphSignal {
  PointSet points;
  Graph graph;
  SpectralDecomp decomp;
  Vector clean;
};

SyntheticGraphSignal make_synthetic_sample(const SyntheticSpec& spec, std::uint64_t sample_id);

}  // namespace graphred
