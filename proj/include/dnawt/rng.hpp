#pragma once

#include <cstdint>
#include <limits>

namespace dnawt {

// SplitMix64 finalizer. Used both as the generator step and to derive
// independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a child seed from (parent, stream). Distinct streams give
// statistically independent generators; the mapping is fixed forever so
// golden outputs stay reproducible.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  return mix64(mix64(parent ^ 0x5851f42d4c957f2dULL) + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// Splittable seeded generator. Satisfies UniformRandomBitGenerator, but the
// helpers below are used instead of <random> distributions because the
// latter are implementation-defined and would break golden tests.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % n;
  }

  constexpr bool bernoulli(double p) noexcept { return uniform01() < p; }

  constexpr SplitMix64 split(std::uint64_t stream) const noexcept {
    return SplitMix64(derive_seed(state_, stream));
  }

 private:
  std::uint64_t state_;
};

}  // namespace dnawt
