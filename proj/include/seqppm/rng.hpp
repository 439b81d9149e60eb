#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <numbers>

// Addressed randomness: every draw is a pure function of its address words.
// There is no generator state, so any draw can be reproduced in isolation and
// trials can be evaluated in any order or on any number of workers.
//
// The hash chain is built from the splitmix64 finalizer; Gaussians come from
// two addressed uniforms via the Box-Muller transform (cosine branch). Both
// algorithms are fixed per release: changing them changes every simulated
// waveform.

namespace seqppm::rng {

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
  for (std::uint64_t w : words) {
    h = mix64(h ^ (w + 0x9e3779b97f4a7c15ULL));
    h += 0x2545f4914f6cdd1dULL;
  }
  return mix64(h);
}

// Uniform on [0, 1), 53-bit resolution.
inline double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1]; safe as a log argument.
inline double to_unit_open(std::uint64_t h) noexcept {
  return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

inline double uniform(std::initializer_list<std::uint64_t> words) noexcept {
  return to_unit(hash_words(words));
}

// Standard normal addressed by the given words. Two derived uniforms feed
// Box-Muller; the second output of the pair is discarded.
inline double normal(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t base = hash_words(words);
  double u1 = to_unit_open(hash_words({base, 0x6e6f726d31ULL}));
  double u2 = to_unit(hash_words({base, 0x6e6f726d32ULL}));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline int bit(std::initializer_list<std::uint64_t> words) noexcept {
  return static_cast<int>(hash_words(words) & 1u);
}

// Address-space tags keeping distinct uses of the same (seed, trial, ...)
// tuple statistically independent.
enum Stream : std::uint64_t {
  kNoise = 1,
  kDataBits = 2,
  kDmcOutput = 3,
  kBlockDraw = 4,
};

}  // namespace seqppm::rng
