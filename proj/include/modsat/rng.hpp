#pragma once

#include <cstdint>
#include <random>

namespace modsat {

// Seeded random stream. The engine is std::mt19937_64; the bounded and real
// draws are spelled out here because the standard distributions are
// implementation-defined and we need identical streams across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  void reseed(std::uint64_t seed) { engine_.seed(seed); }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform in the open interval (lo, hi).
  double open_interval(double lo, double hi) {
    for (;;) {
      const double x = lo + (hi - lo) * uniform01();
      if (x > lo && x < hi) return x;
    }
  }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::mt19937_64 engine_;
};

} // namespace modsat
