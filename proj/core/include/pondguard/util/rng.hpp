#pragma once

#include <cmath>
#include <cstdint>

namespace pondguard::util {

// splitmix64 finalizer, used for seed expansion and derived seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for episode `index` of a campaign rooted at `root_seed`. Pure, so a
// campaign can be replayed episode by episode.
inline std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t index) {
  std::uint64_t s = root_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(s);
}

// xoshiro256** (Blackman/Vigna). Used instead of <random> engines because
// simulation traces must be bit-identical across standard libraries, and
// std::normal_distribution does not guarantee a reproducible stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // One standard Gaussian sample via Box-Muller. Consumes exactly two draws,
  // so the stream position never depends on earlier outcomes.
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace pondguard::util
