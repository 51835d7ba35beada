#pragma once

#include <cstdint>
#include <initializer_list>

namespace graphdm {

/// xoshiro256++ pseudo-random generator, seeded through splitmix64.
///
/// Everything stochastic in this library draws from this one engine so that
/// results are bit-reproducible across platforms and standard libraries
/// (std:: distributions are not portable; the raw engines are, but their
/// distributions differ between implementations, so we roll our own).
///
/// Stream splitting: independent streams are derived with Rng::derive, which
/// folds a path of integers into a fresh 64-bit seed via splitmix64. Callers
/// that parallelize (trajectory per member, replica per burst) derive one
/// stream per unit of work and never share a stream across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Next raw 64-bit word.
  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform integer in [0, bound). Unbiased via mask-and-reject. bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// True with probability p (one uniform01 draw, consumed either way).
  bool bernoulli(double p) { return uniform01() < p; }

  /// splitmix64 finalizer; also usable as a stateless counter-based draw.
  static std::uint64_t mix(std::uint64_t x);

  /// Derive a child seed from a base seed and a path of stream indices.
  /// derive(s, {a, b}) != derive(s, {b, a}) in general; the path is the
  /// documented identity of the stream.
  static std::uint64_t derive(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> path);

 private:
  std::uint64_t s_[4];
};

}  // namespace graphdm
