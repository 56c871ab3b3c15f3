#include "slamobs/rng.hpp"

#include <cmath>
#include <numbers>

namespace slamobs {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t substream_key(std::uint64_t master_seed, int index) {
  std::uint64_t state = master_seed;
  std::uint64_t key = 0;
  for (int i = 0; i <= index; ++i) {
    key = splitmix64_next(state);
  }
  return key;
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) {
    word = splitmix64_next(state);
  }
}

std::uint64_t Xoshiro256pp::next() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256pp::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::pair<double, double> Xoshiro256pp::gaussian_pair() {
  double u1 = uniform01();
  if (u1 <= 0.0) {
    u1 = 0x1.0p-53;  // keep log(u1) finite on the measure-zero draw
  }
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

Vec3 Xoshiro256pp::gaussian3() {
  const auto [g0, g1] = gaussian_pair();
  const auto [g2, g3] = gaussian_pair();
  (void)g3;
  return Vec3(g0, g1, g2);
}

}  // namespace slamobs
