#pragma once

#include "graphred/construct.hpp"
#include "graphred/datagen.hpp"
#include "graphred/denoisers.hpp"
#include "graphred/error.hpp"
#include "graphred/graph.hpp"
#include "graphred/rng.hpp"

#include "doctest.h"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace testutil {

using namespace graphred;

// Normalized 5-NN graph on uniform points from the sensor stream of `seed`.
inline Graph sensor_graph(Index n, std::uint64_t seed, Index k = 5) {
  auto rng = Rng::stream(seed, StreamPurpose::sensor_points, {0});
  return normalize_weights(knn_graph(generate_sensor_points(n, 100.0, rng), k));
}

inline Vector ramp_signal(Index n) {
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = std::sin(static_cast<double>(i)) + 0.1 * i;
  return y;
}

inline Vector random_vector(Index n, Rng& rng, double scale = 1.0) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

inline double rel_err(const Vector& a, const Vector& b) { return (a - b).norm() / b.norm(); }

template <typename Fn>
ErrorKind error_kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected graphred::Error");
  return ErrorKind::io;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("graphred_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
