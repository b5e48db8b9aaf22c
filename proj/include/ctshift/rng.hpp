#pragma once

#include "ctshift/types.hpp"

#include <cstdint>
#include <random>

namespace ctshift {

// Stream identifiers: every independent source of randomness gets its own
// substream keyed by (purpose, id, subid), so adding a consumer never
// perturbs the draws seen by another.
enum class RngPurpose : std::uint64_t {
  TaskRotation = 1,
  MetaGradDirection = 2,
  RandomShift = 3,
  DatasetInputs = 4,
  TeacherInit = 5,
  BatchSampling = 6,
  ParamInit = 7,
  TaskGeneration = 8,
  ProbePoint = 9,
};

/// SplitMix64 finalizer; used only to mix stream keys into seeds.
std::uint64_t splitmix64(std::uint64_t x);

// One substream. Generator: std::mt19937_64 (bit-exact across platforms)
// seeded by SplitMix64-mixing of (seed, purpose, id, subid). Uniforms take
// the top 53 bits; normals use plain Box-Muller on two uniforms, no cached
// spare, so the output stream is a pure function of the call sequence.
class RngStream {
 public:
  explicit RngStream(std::uint64_t mixed_seed) : gen_(mixed_seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal();

  /// i.i.d. standard normal entries.
  Vector gaussian(Index n);

  /// Uniformly random direction: normalized Gaussian, redrawn on a zero draw.
  Vector unit_vector(Index n);

 private:
  std::mt19937_64 gen_;
};

/// Root of the run's randomness; hands out independent substreams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RngStream stream(RngPurpose purpose, std::uint64_t id = 0, std::uint64_t subid = 0) const;

 private:
  std::uint64_t seed_;
};

}  // namespace ctshift
