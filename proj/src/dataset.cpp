#include "graphred/dataset.hpp"

#include "graphred/construct.hpp"
#include "graphred/error.hpp"
#include "graphred/io.hpp"

#include <cstdio>
#include <filesystem>

namespace fs = std::filesystem;

namespace graphred {

namespace {

constexpr const char* kSplits[] = {"train", "test"};

std::string sample_name(std::size_t idx) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%03zu", idx);
  return buf;
}

void make_dirs(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  require(!ec, ErrorKind::io, "cannot create directory " + p.string() + ": " + ec.message());
}

std::string observed_file(double sigma) { return "observed_sigma" + sigma_label(sigma) + ".csv"; }
std::string noisy_graph_file(double sigma) { return "graph_sigma" + sigma_label(sigma) + ".edges"; }

Json base_manifest(const char* kind, std::uint64_t seed, const std::vector<double>& sigmas,
                   int channels) {
  Json m;
  m["format"] = "graphred-dataset";
  m["version"] = 1;
  m["kind"] = kind;
  m["seed"] = seed;
  m["sigmas"] = sigmas;
  m["channels"] = channels;
  m["rng"] = "mt19937_64 streams seeded by splitmix64(seed, purpose, split, sample, sigma_index)";
  return m;
}

}  // namespace

const Graph& DatasetSample::graph_for(double sigma, bool prefer_noisy) const {
  if (prefer_noisy) {
    auto it = noisy_graphs.find(sigma);
    if (it != noisy_graphs.end()) return it->second;
  }
  return graph;
}

const std::vector<DatasetSample>& Dataset::split(const std::string& name) const {
  if (name == "train") return train;
  if (name == "test") return test;
  fail(ErrorKind::config, "unknown split '" + name + "' (expected train or test)");
}

Rng observation_noise_rng(std::uint64_t seed, int split_index, std::size_t sample,
                          std::size_t sigma_index) {
  return Rng::stream(seed, StreamPurpose::observation_noise,
                     {static_cast<std::uint64_t>(split_index), sample, sigma_index});
}

Json write_synthetic_dataset(const SyntheticSpec& spec, const std::string& root) {
  require(spec.n_train >= 0 && spec.n_test >= 0, ErrorKind::parameter,
          "sample counts must be >= 0");
  Json manifest = base_manifest("synthetic", spec.seed, spec.sigmas, 1);
  manifest["synthetic"] = {{"n_nodes", spec.n_nodes}, {"side", spec.side},
                           {"k", spec.k},             {"n_band", spec.n_band},
                           {"offset", spec.offset}};
  const int counts[] = {spec.n_train, spec.n_test};
  Json splits;
  for (int s = 0; s < 2; ++s) {
    Json names = Json::array();
    for (int i = 0; i < counts[s]; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const auto sample = make_synthetic_sample(spec, static_cast<std::uint64_t>(s) * 1000000u + idx);
      const fs::path dir = fs::path(root) / kSplits[s] / sample_name(idx);
      make_dirs(dir);
      write_edge_list((dir / "graph.edges").string(), sample.graph);
      write_matrix_csv((dir / "points.csv").string(), sample.points.coords());
      const Matrix clean = sample.clean;
      write_matrix_csv((dir / "clean.csv").string(), clean);
      for (std::size_t si = 0; si < spec.sigmas.size(); ++si) {
        auto rng = observation_noise_rng(spec.seed, s, idx, si);
        write_matrix_csv((dir / observed_file(spec.sigmas[si])).string(),
                         add_noise(clean, spec.sigmas[si], rng));
      }
      names.push_back(sample_name(idx));
    }
    splits[kSplits[s]] = std::move(names);
  }
  manifest["splits"] = std::move(splits);
  make_dirs(root);
  write_text_file((fs::path(root) / "manifest.json").string(), manifest.dump(2) + "\n");
  return manifest;
}

Json write_pointcloud_dataset(const PointCloudSpec& spec, const std::string& root) {
  require(spec.max_nodes >= 2, ErrorKind::parameter, "max_nodes must be >= 2");
  Json manifest = base_manifest("pointcloud", spec.seed, spec.sigmas, 3);
  manifest["pointcloud"] = {{"max_nodes", spec.max_nodes},
                            {"k", spec.k},
                            {"fps_start", spec.fps_start},
                            {"weights", "1/distance, normalized to max 1"},
                            {"sources", {{"train", spec.train_sources}, {"test", spec.test_sources}}}};
  const std::vector<std::string>* sources[] = {&spec.train_sources, &spec.test_sources};
  Json splits;
  for (int s = 0; s < 2; ++s) {
    Json names = Json::array();
    for (std::size_t idx = 0; idx < sources[s]->size(); ++idx) {
      const PointSet dense = load_point_cloud((*sources[s])[idx]);
      const Index m = std::min(dense.size(), spec.max_nodes);
      const PointSet cloud = dense.subset(fps(dense, m, spec.fps_start));
      const Matrix& clean = cloud.coords();
      const fs::path dir = fs::path(root) / kSplits[s] / sample_name(idx);
      make_dirs(dir);
      write_edge_list((dir / "graph.edges").string(), normalize_weights(knn_graph(cloud, spec.k)));
      write_matrix_csv((dir / "clean.csv").string(), clean);
      for (std::size_t si = 0; si < spec.sigmas.size(); ++si) {
        auto rng = observation_noise_rng(spec.seed, s, idx, si);
        const Matrix noisy = add_noise(clean, spec.sigmas[si], rng);
        write_matrix_csv((dir / observed_file(spec.sigmas[si])).string(), noisy);
        write_edge_list((dir / noisy_graph_file(spec.sigmas[si])).string(),
                        normalize_weights(knn_graph(PointSet(noisy), spec.k)));
      }
      names.push_back(sample_name(idx));
    }
    splits[kSplits[s]] = std::move(names);
  }
  manifest["splits"] = std::move(splits);
  make_dirs(root);
  write_text_file((fs::path(root) / "manifest.json").string(), manifest.dump(2) + "\n");
  return manifest;
}

Dataset load_dataset(const std::string& root) {
  const fs::path base(root);
  Dataset ds;
  try {
    ds.manifest = Json::parse(read_text_file((base / "manifest.json").string()));
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse, (base / "manifest.json").string() + ": " + e.what());
  }
  try {
    require(ds.manifest.at("format") == "graphred-dataset", ErrorKind::parse,
            "not a graphred dataset manifest");
    const auto kind = ds.manifest.at("kind").get<std::string>();
    ds.kind = kind == "pointcloud" ? DatasetKind::pointcloud : DatasetKind::synthetic;
    ds.sigmas = ds.manifest.at("sigmas").get<std::vector<double>>();
    for (int s = 0; s < 2; ++s) {
      auto& out = s == 0 ? ds.train : ds.test;
      for (const auto& name : ds.manifest.at("splits").at(kSplits[s])) {
        const fs::path dir = base / kSplits[s] / name.get<std::string>();
        DatasetSample sample{kSplits[s], name.get<std::string>(),
                             read_edge_list((dir / "graph.edges").string()), std::nullopt, {}, {}};
        if (fs::exists(dir / "clean.csv")) sample.clean = read_matrix_csv((dir / "clean.csv").string());
        for (double sigma : ds.sigmas) {
          Matrix obs = read_matrix_csv((dir / observed_file(sigma)).string());
          require(obs.rows() == sample.graph.n_nodes(), ErrorKind::parse,
                  (dir / observed_file(sigma)).string() + ": row count != graph size");
          sample.observed.emplace(sigma, std::move(obs));
          const fs::path ng = dir / noisy_graph_file(sigma);
          if (fs::exists(ng)) sample.noisy_graphs.emplace(sigma, read_edge_list(ng.string()));
        }
        out.push_back(std::move(sample));
      }
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::parse, (base / "manifest.json").string() + ": " + e.what());
  }
  return ds;
}

}  // namespace graphred
