#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace polya {

/// splitmix64 output finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seed of replica `replica` in an ensemble with master seed `master`:
///
///   derive_seed(master, r) = mix64(master XOR ((r + 1) * 0x9E3779B97F4A7C15))
///
/// with wrap-around multiplication. This formula is frozen: changing it
/// changes every stored trajectory.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replica) noexcept {
  return mix64(master ^ ((replica + 1) * kGoldenGamma));
}

/// xoshiro256** (Blackman & Vigna), period 2^256 - 1. The 256-bit state is
/// filled from a 64-bit seed by four successive splitmix64 outputs.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x += kGoldenGamma;
      word = mix64(x);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return next(); }

  constexpr std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) from the top 53 bits of one output.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// One Bernoulli(p) draw: true iff uniform() < p. Consumes exactly one output.
  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace polya
