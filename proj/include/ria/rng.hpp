#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace ria {

/// Seeded xoshiro256++ stream with stateless substream derivation.
///
/// split(key) mixes only the stream's seed material, never the generator
/// state, so a substream is fully determined by (root seed, key path) and is
/// independent of how much the parent stream has already drawn. That is what
/// makes per-trial substreams reproducible under any trial iteration order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  /// Independent substream keyed by `key`; distinct keys give distinct streams.
  Rng split(std::uint64_t key) const {
    return Rng(mix(seed_ ^ mix(key + 0x9E3779B97F4A7C15ULL)));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Circularly-symmetric complex Gaussian CN(0,1): E|z|^2 = 1.
  std::complex<double> gaussian() {
    const double u = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double radius = std::sqrt(-std::log(u));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  // One splitmix64 round over an advancing state.
  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Stateless finalizer used for substream seeds.
  static std::uint64_t mix(std::uint64_t z) {
    std::uint64_t s = z;
    return splitmix64(s);
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace ria
