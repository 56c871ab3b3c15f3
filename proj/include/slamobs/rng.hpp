#pragma once

#include <cstdint>
#include <utility>

#include "slamobs/linalg.hpp"

namespace slamobs {

/// Advances a splitmix64 state and returns the next output word.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Key for the index-th independent substream derived from a master seed.
/// Substreams are the successive outputs of splitmix64 on the master seed,
/// so streams for different indices never share state.
std::uint64_t substream_key(std::uint64_t master_seed, int index);

/// xoshiro256++ with splitmix64 state expansion. Portable and seedable;
/// identical seeds give bitwise-identical sequences on every platform.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform01();
  double uniform(double lo, double hi);

  /// Box-Muller transform; consumes exactly two uniforms.
  std::pair<double, double> gaussian_pair();

  /// Standard-normal 3-vector: two Box-Muller pairs, fourth value dropped.
  Vec3 gaussian3();

 private:
  std::uint64_t s_[4];
};

}  // namespace slamobs
