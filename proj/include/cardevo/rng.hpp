#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cardevo {

// splitmix64 step; also used as a general-purpose 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Combines an arbitrary tuple of integers into one seed. Order-sensitive.
template <typename... Ts>
constexpr std::uint64_t seed_combine(std::uint64_t seed, Ts... parts) {
  ((seed = mix64(seed ^ (static_cast<std::uint64_t>(parts) + 0x9e3779b97f4a7c15ull +
                         (seed << 6) + (seed >> 2)))),
   ...);
  return seed;
}

// Small deterministic generator (splitmix64). std::mt19937 would also be
// portable, but the standard distributions are not; everything here is
// specified bit-for-bit so transcripts replay identically on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound). Lemire's multiply-shift with rejection: unbiased
  // and reproducible.
  std::uint32_t below(std::uint32_t bound) {
    if (bound <= 1) return 0;
    while (true) {
      std::uint32_t x = static_cast<std::uint32_t>(next_u64());
      std::uint64_t m = static_cast<std::uint64_t>(x) * bound;
      std::uint32_t lo = static_cast<std::uint32_t>(m);
      if (lo >= bound || lo >= (-bound) % bound) return static_cast<std::uint32_t>(m >> 32);
    }
  }

  // Uniform in [0, 1).
  double real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi].
  double range(double lo, double hi) { return lo + (hi - lo) * real(); }

  bool chance(double p) { return real() < p; }

  // Standard normal via Box-Muller; deterministic, one value per call.
  double gauss() {
    double u1 = real();
    double u2 = real();
    while (u1 <= 0.0) u1 = real();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Fisher-Yates shuffle over any random-access container.
  template <typename Container>
  void shuffle(Container& c) {
    for (std::size_t i = c.size(); i > 1; --i) {
      std::size_t j = below(static_cast<std::uint32_t>(i));
      using std::swap;
      swap(c[i - 1], c[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace cardevo
