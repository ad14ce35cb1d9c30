#pragma once

// Run configuration for the command-line tool: a JSON tree checked against a
// fixed key schema (unknown keys are rejected), plus flag overrides.

#include "graphred/dataset.hpp"
#include "graphred/methods.hpp"
#include "graphred/serialize.hpp"
#include "graphred/unroll.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace graphred::app {

namespace fs = std::filesystem;

struct FlagOverrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

class RunConfig {
 public:
  /// Empty config when no path is given. Throws Error(config) on schema
  /// violations and unparsable files.
  static RunConfig load(const FlagOverrides& flags);
  static RunConfig from_json(Json root, const FlagOverrides& flags = {});

  const Json& root() const { return root_; }
  std::uint64_t seed() const { return seed_; }
  int threads() const { return threads_; }
  const fs::path& out() const { return out_; }

  bool has(const std::string& path) const;
  double number(const std::string& path, double fallback) const;
  std::int64_t integer(const std::string& path, std::int64_t fallback) const;
  bool boolean(const std::string& path, bool fallback) const;
  std::string string(const std::string& path, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& path, std::vector<double> fallback) const;
  std::vector<std::string> strings(const std::string& path,
                                   std::vector<std::string> fallback) const;

  /// Path-valued keys; relative paths resolve against the working directory.
  fs::path path(const std::string& key, const fs::path& fallback) const;

  fs::path dataset_dir() const { return path("dataset_dir", out_ / "data"); }
  fs::path tuned_path() const { return path("params.tuned", out_ / "tuned.json"); }
  fs::path learned_dir() const { return path("params.learned_dir", out_ / "learned"); }

  SolverSettings solver() const;
  bool spectral_space() const;
  GridSpec grid() const;
  SyntheticSpec synthetic_spec() const;
  PointCloudSpec pointcloud_spec() const;
  /// Methods list, validated against the known names.
  std::vector<Method> methods(const std::string& key, std::vector<Method> fallback) const;

 private:
  const Json* find(const std::string& path) const;

  Json root_;
  std::uint64_t seed_ = 0;
  int threads_ = 1;
  fs::path out_ = ".";
};

/// Key schema as JSON (leaf values name the expected type), for docs/tests.
const Json& config_schema();

}  // namespace graphred::app
