#include "graphred/dataset.hpp"
#include "graphred/io.hpp"
#include "helpers.hpp"

#include "doctest.h"

#include <filesystem>

using namespace graphred;
using testutil::error_kind_of;
namespace fs = std::filesystem;

TEST_CASE("synthetic bundles round trip through disk") {
  testutil::TempDir dir("ds");
  SyntheticSpec spec;
  spec.n_nodes = 30;
  spec.n_train = 2;
  spec.n_test = 1;
  spec.sigmas = {10, 12.5};
  spec.seed = 9;
  const auto manifest = write_synthetic_dataset(spec, dir.str());
  CHECK(manifest["format"] == "graphred-dataset");
  CHECK(fs::exists(dir.path() / "train" / "sample_001" / "observed_sigma12.5.csv"));

  const auto ds = load_dataset(dir.str());
  CHECK(ds.kind == DatasetKind::synthetic);
  CHECK(ds.train.size() == 2);
  CHECK(ds.test.size() == 1);
  CHECK(ds.sigmas == std::vector<double>{10, 12.5});

  const auto fresh = make_synthetic_sample(spec, 1);
  const auto& s = ds.split("train")[1];
  CHECK(s.graph.adjacency() == fresh.graph.adjacency());
  CHECK(s.clean->col(0) == fresh.clean);
  auto rng = observation_noise_rng(9, 0, 1, 1);
  CHECK(s.observed.at(12.5).col(0) == add_noise(fresh.clean, 12.5, rng));
  CHECK(&s.graph_for(10, true) == &s.graph);
  CHECK(error_kind_of([&] { ds.split("valid"); }) == ErrorKind::config);
}

TEST_CASE("test samples use their own sensor streams") {
  testutil::TempDir dir("ds2");
  SyntheticSpec spec;
  spec.n_nodes = 20;
  spec.n_train = 1;
  spec.n_test = 1;
  spec.sigmas = {10};
  write_synthetic_dataset(spec, dir.str());
  const auto ds = load_dataset(dir.str());
  CHECK(ds.test[0].graph.adjacency() == make_synthetic_sample(spec, 1000000).graph.adjacency());
}

TEST_CASE("point-cloud bundles keep clean and noisy-coordinate graphs") {
  testutil::TempDir dir("pc");
  Matrix p(40, 3);
  for (Index i = 0; i < 40; ++i) p.row(i) << std::cos(0.3 * i), std::sin(0.3 * i), 0.05 * i;
  const auto src = (dir.path() / "helix.csv").string();
  write_matrix_csv(src, 100.0 * p);
  PointCloudSpec spec;
  spec.train_sources = {src};
  spec.test_sources = {src};
  spec.max_nodes = 25;
  spec.sigmas = {10};
  write_pointcloud_dataset(spec, (dir.path() / "out").string());
  const auto ds = load_dataset((dir.path() / "out").string());
  CHECK(ds.kind == DatasetKind::pointcloud);
  const auto& s = ds.train[0];
  CHECK(s.graph.n_nodes() == 25);
  CHECK(s.clean->cols() == 3);
  CHECK(s.observed.at(10).cols() == 3);
  REQUIRE(s.noisy_graphs.count(10) == 1);
  CHECK(&s.graph_for(10, true) == &s.noisy_graphs.at(10));
  CHECK(&s.graph_for(10, false) == &s.graph);
  CHECK(ds.test[0].observed.at(10) != s.observed.at(10));
}

TEST_CASE("broken bundles report parse and io errors") {
  testutil::TempDir dir("bad");
  CHECK(error_kind_of([&] { load_dataset(dir.str()); }) != ErrorKind::config);
  write_text_file((dir.path() / "manifest.json").string(), "{not json");
  CHECK(error_kind_of([&] { load_dataset(dir.str()); }) == ErrorKind::parse);
}
