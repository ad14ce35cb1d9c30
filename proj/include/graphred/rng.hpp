#pragma once

// Portable seeded randomness.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// Stream seeds are derived with SplitMix64 from (base seed, purpose, indices),
// so every sample/purpose pair draws from its own reproducible stream.
// Uniforms use the top 53 bits of a draw; normals use Box-Muller (both
// outputs consumed in order). Library distributions (std::normal_distribution
// etc.) are not used because their algorithms are implementation-defined.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace graphred {

enum class StreamPurpose : std::uint64_t {
  sensor_points = 1,
  observation_noise = 2,
  n2n_noise = 3,
  check_probe = 4,
  fps_start = 5,
  n2n_init = 6,
};

std::uint64_t splitmix64(std::uint64_t& state);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, purpose, indices...).
  static Rng stream(std::uint64_t seed, StreamPurpose purpose,
                    std::initializer_list<std::uint64_t> indices = {});

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace graphred
