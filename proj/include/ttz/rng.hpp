// Seeded random streams.
//
// Every random consumer draws from its own std::mt19937_64 whose seed is
// derived from (master seed, purpose tag[, index]) through SplitMix64, so
// adding a new consumer never shifts the numbers seen by existing ones.
// Variates are produced by code in this header (not by <random>
// distributions) so outputs are identical across standard libraries.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace ttz {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64-streams/v1";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return splitmix64(splitmix64(master ^ splitmix64(h)) + index);
}

class RandomStream {
 public:
  RandomStream(std::uint64_t master, std::string_view tag, std::uint64_t index = 0)
      : engine_(stream_seed(master, tag, index)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Binomial(trials, 1/2) as the popcount of `trials` fair bits.
  int binomial_half(int trials) {
    int count = 0;
    while (trials >= 64) {
      count += std::popcount(engine_());
      trials -= 64;
    }
    if (trials > 0) count += std::popcount(engine_() & ((1ULL << trials) - 1));
    return count;
  }

  int rademacher() { return (engine_() >> 63) ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ttz
