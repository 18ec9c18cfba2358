#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>

namespace diqkd {

/// SplitMix64 engine. Satisfies std::uniform_random_bit_generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for round `index` of a run seeded with `seed`. Depends
/// only on (seed, index), so rounds can be generated in any order.
inline constexpr SplitMix64 counter_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(SplitMix64::mix(seed ^ 0x6a09e667f3bcc909ULL) ^ SplitMix64::mix(index + 0x3c6ef372fe94f82bULL));
}

/// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw.
template <std::uniform_random_bit_generator Rng>
  requires(Rng::max() == std::numeric_limits<std::uint64_t>::max() && Rng::min() == 0)
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace diqkd
