#pragma once

// Reproducible randomness. All draws come from std::mt19937_64 seeded through
// std::seed_seq, and are mapped to decisions with integer-only arithmetic, so
// a (seed, stream) pair yields the same decisions on every platform.

#include "integer.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace lgp {

inline constexpr std::string_view kGeneratorName = "mt19937_64+seed_seq/v1";

// Exact probability num/den.
struct Probability {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Probability one() { return {1, 1}; }
  static Probability zero() { return {0, 1}; }

  // Nearest multiple of 2^-53.
  static Probability from_double(double p) {
    require(p >= 0.0 && p <= 1.0, "Probability: value outside [0,1]");
    constexpr std::uint64_t den = std::uint64_t{1} << 53;
    return {static_cast<std::uint64_t>(p * static_cast<double>(den) + 0.5), den};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline void validate(const Probability& p) {
  require(p.den > 0 && p.num <= p.den, "Probability: must satisfy 0 <= num <= den, den > 0");
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    require(bound > 0, "Rng::below: bound must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(const Probability& p) {
    if (p.num == 0) return false;
    if (p.num >= p.den) return true;
    const auto threshold = static_cast<std::uint64_t>((static_cast<unsigned __int128>(p.num) << 64) / p.den);
    return next() < threshold;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lgp
