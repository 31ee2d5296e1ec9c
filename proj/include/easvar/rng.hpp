#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace easvar {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream); output block b of that stream is
/// the Philox bijection applied to the counter (b, stream) under key seed.
/// Two generators with the same (seed, stream) produce identical sequences,
/// and distinct streams are statistically independent, so every Monte Carlo
/// draw can get its own substream without coordination.
///
/// Satisfies UniformRandomBitGenerator; use with Boost.Random distributions.
class Philox {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform double in the open interval (0, 1).
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // The raw ten-round bijection.
  static Counter block(Counter counter, Key key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Counter buffer_{};
  unsigned position_ = 4;
};

// Mixes a parent seed and a child index into a new seed (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace easvar
