#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace lcavs {

/**
 * Philox4x32-10 counter-based generator.
 *
 * The 64-bit key is the seed; the stream id occupies the upper half of the
 * 128-bit counter, so distinct (seed, stream) pairs draw from disjoint
 * counter ranges. Every stochastic choice in the project flows through one
 * of these, which is what makes seeded runs byte-reproducible.
 */
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0);

  // One raw block of the underlying function; exposed for known-answer tests.
  static std::array<uint32_t, 4> philox_block(std::array<uint32_t, 4> counter,
                                              std::array<uint32_t, 2> key);

  uint32_t next_u32();
  uint64_t next_u64();

  // Uniform on the open interval (0, 1); 53-bit resolution, never 0 or 1.
  double uniform();

  // Uniform integer in [0, n), n >= 1.
  uint64_t uniform_below(uint64_t n);

  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  double beta(double a, double b);

  void dirichlet(std::span<const double> concentration, std::span<double> out);

  // Index sampled proportionally to non-negative weights summing to total.
  int categorical(std::span<const double> weights, double total);

 private:
  void refill();

  std::array<uint32_t, 4> counter_;
  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> block_;
  int block_pos_;
  double cached_normal_;
  bool has_cached_normal_;
};

}  // namespace lcavs
