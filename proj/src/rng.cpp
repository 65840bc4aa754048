#include "lcavs/rng.hpp"

#include <cmath>

#include "lcavs/common.hpp"

namespace lcavs {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

inline std::array<uint32_t, 4> round_once(std::array<uint32_t, 4> x,
                                          std::array<uint32_t, 2> k) {
  uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, x[0], hi0, lo0);
  mulhilo(kPhiloxM1, x[2], hi1, lo1);
  return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> Rng::philox_block(std::array<uint32_t, 4> counter,
                                          std::array<uint32_t, 2> key) {
  std::array<uint32_t, 4> x = counter;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    x = round_once(x, key);
  }
  return x;
}

Rng::Rng(uint64_t seed, uint64_t stream)
    : counter_{0, 0, static_cast<uint32_t>(stream),
               static_cast<uint32_t>(stream >> 32)},
      key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
      block_{},
      block_pos_(4),
      cached_normal_(0.0),
      has_cached_normal_(false) {}

void Rng::refill() {
  block_ = philox_block(counter_, key_);
  block_pos_ = 0;
  if (++counter_[0] == 0) ++counter_[1];  // 64-bit per-stream counter
}

uint32_t Rng::next_u32() {
  if (block_pos_ == 4) refill();
  return block_[block_pos_++];
}

uint64_t Rng::next_u64() {
  uint64_t lo = next_u32();
  uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Rng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

uint64_t Rng::uniform_below(uint64_t n) {
  // Fixed-point multiply; bias is O(n / 2^64), immaterial at our scales.
  return static_cast<uint64_t>(
      (static_cast<__uint128_t>(next_u64()) * n) >> 64);
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_normal_ = true;
  return r * std::cos(a);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw ValidationError("gamma shape must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and correct with a uniform power.
    double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  double x = gamma(a);
  double y = gamma(b);
  return x / (x + y);
}

void Rng::dirichlet(std::span<const double> concentration,
                    std::span<double> out) {
  double total = 0.0;
  for (size_t i = 0; i < concentration.size(); ++i) {
    out[i] = gamma(concentration[i]);
    total += out[i];
  }
  for (size_t i = 0; i < concentration.size(); ++i) out[i] /= total;
}

int Rng::categorical(std::span<const double> weights, double total) {
  double u = uniform() * total;
  double acc = 0.0;
  int last = static_cast<int>(weights.size()) - 1;
  for (int i = 0; i < last; ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return last;
}

}  // namespace lcavs
