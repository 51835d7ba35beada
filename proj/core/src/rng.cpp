#include "graphdm/rng.hpp"

#include <limits>

#include "graphdm/error.hpp"

namespace graphdm {

namespace {

constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t Rng::mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

Rng::Rng(std::uint64_t seed) {
  // splitmix64 expansion, as recommended for seeding xoshiro state.
  std::uint64_t s = seed;
  for (auto& word : s_) {
    s += kSplitmixGamma;
    word = mix(s);
  }
}

std::uint64_t Rng::next() {
  // xoshiro256++ step (Blackman & Vigna).
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform_below: bound must be positive");
  if (bound == 1) return 0;
  // Smallest all-ones mask covering bound-1, then rejection sample.
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t draw = next() & mask;
    if (draw < bound) return draw;
  }
}

std::uint64_t Rng::derive(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix(seed + kSplitmixGamma);
  for (std::uint64_t p : path) {
    s = mix(s ^ (p + kSplitmixGamma));
  }
  return s;
}

}  // namespace graphdm
