#pragma once

#include <cstdint>
#include <random>

#include "tomolearn/types.hpp"

namespace tomolearn {

/// Seed plus a stream id. Distinct stream ids give statistically
/// independent draw sequences from the same base seed, so e.g. angle
/// sampling and noise generation never share state.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Derive a child seed for a subtask (e.g. one (N, realization) cell).
  /// Pure mixing, stable across platforms and runs.
  RngSeed derive(std::uint64_t a, std::uint64_t b = 0) const;
};

/// Deterministic generator: std::mt19937_64 raw stream (bit-exact per the
/// C++ standard) with our own inversion-based normal sampler and
/// rejection-based bounded integers, so no implementation-defined
/// distribution code is involved.
class Rng {
 public:
  explicit Rng(RngSeed s);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform integer in [0, bound), bound >= 1, by rejection.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Standard normal draw via inverse-CDF (Wichura's PPND16).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Inverse of the standard normal CDF, accurate to ~1e-15 for u in (0,1).
double inverse_normal_cdf(double u);

/// Uniformly random N-subset of {0, ..., n_theta-1}, distinct and sorted
/// ascending. Deterministic given the seed.
AngleSet sample_angles(int n, int n_theta, RngSeed rng);

/// len i.i.d. standard normal draws, deterministic given the seed.
Vector gaussian_noise(Eigen::Index len, RngSeed rng);

}  // namespace tomolearn
