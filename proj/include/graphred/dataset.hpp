#pragma once

// On-disk dataset bundles.
//
//   <root>/manifest.json
//   <root>/<split>/<sample>/graph.edges              graph used for denoising
//   <root>/<split>/<sample>/clean.csv                N x C clean signal
//   <root>/<split>/<sample>/observed_sigma<s>.csv    N x C noisy observation
//   <root>/<split>/<sample>/graph_sigma<s>.edges     point clouds only: graph
//                                                    rebuilt from noisy coords
//
// Synthetic signals have one channel; point clouds have one channel per
// coordinate, each denoised independently on the shared graph.

#include "graphred/datagen.hpp"
#include "graphred/graph.hpp"
#include "graphred/serialize.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace graphred {

struct PointCloudSpec {
  std::vector<std::string> train_sources;
  std::vector<std::string> test_sources;
  Index max_nodes = 500;
  Index k = 5;
  Index fps_start = 0;
  std::vector<double> sigmas{10, 15, 20, 25, 30};
  std::uint64_t seed = 0;
};

enum class DatasetKind { synthetic, pointcloud };

struct DatasetSample {
  std::string split;
  std::string name;
  Graph graph;
  std::optional<Matrix> clean;
  std::map<double, Matrix> observed;
  std::map<double, Graph> noisy_graphs;

  /// Graph for denoising at `sigma`: the noisy-coordinate graph when present
  /// and requested, else the shared graph.
  const Graph& graph_for(double sigma, bool prefer_noisy) const;
};

struct Dataset {
  DatasetKind kind = DatasetKind::synthetic;
  std::vector<double> sigmas;
  Json manifest;
  std::vector<DatasetSample> train;
  std::vector<DatasetSample> test;

  const std::vector<DatasetSample>& split(const std::string& name) const;
};

/// Synthetic bundle: generates, writes, and returns the manifest.
Json write_synthetic_dataset(const SyntheticSpec& spec, const std::string& root);
/// Point-cloud bundle: FPS to at most max_nodes, kNN graphs from clean and
/// from each noisy realization.
Json write_pointcloud_dataset(const PointCloudSpec& spec, const std::string& root);

/// Loads a bundle. Clean signals are optional on disk (unsupervised use).
Dataset load_dataset(const std::string& root);

/// Observation-noise stream for one (split, sample, sigma) triple.
Rng observation_noise_rng(std::uint64_t seed, int split_index, std::size_t sample,
                          std::size_t sigma_index);

}  // namespace graphred
