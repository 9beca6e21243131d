#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ddp {

/// Seedable pseudo-random stream. Children obtained with split() depend only
/// on (seed, stream path, index), never on how much of the parent was consumed.
class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t seed = 0) : RngStream(seed, mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  RngStream split(std::uint64_t index) const {
    return RngStream(seed_, mix(key_ ^ mix(index + 0x9e3779b97f4a7c15ULL)));
  }

  Engine& engine() { return engine_; }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

  std::uint64_t seed() const { return seed_; }

 private:
  RngStream(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
  }

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t key_;
  Engine engine_;
};

}  // namespace ddp
