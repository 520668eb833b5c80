#pragma once

#include <cstdint>
#include <random>

namespace manet::sim {

/// Independent randomness concerns. Each gets its own stream derived from the
/// master seed so that drawing more from one never shifts another.
enum class Stream : std::uint64_t {
  Loss = 1,
  Mobility = 2,
  Adversary = 3,
  Traffic = 4,
  Keys = 5,
  Placement = 6,
};

/// SplitMix64 finalizer; used only to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) noexcept {
  return mix64(mix64(mix64(master) ^ static_cast<std::uint64_t>(stream)) ^ index);
}

/// mt19937_64 with distribution code owned here, so draws are identical on
/// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace manet::sim
