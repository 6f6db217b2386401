#pragma once

#include <cmath>
#include <cstdint>

namespace szt {

// Counter-based deterministic generator (SplitMix64 mix over seed + counter).
// The integer draw sequence depends only on the seed, with no hidden state
// beyond the counter, so streams can be replayed and split by value.
// Single-owner: callers that parallelize derive one child stream per task.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) noexcept
      : base_(mix(seed ^ 0x6a09e667f3bcc908ull)), counter_(0) {}

  std::uint64_t seed_base() const noexcept { return base_; }

  std::uint64_t next_u64() noexcept {
    return mix(base_ + (++counter_) * 0x9e3779b97f4a7c15ull);
  }

  // Uniform on [0, 1), 53 random mantissa bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  // Standard normal via Box-Muller; the spare draw is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Zero-mean Laplace with scale b, by inverse CDF.
  double laplace(double b) noexcept {
    const double u = uniform01() - 0.5;
    const double s = u < 0.0 ? -1.0 : 1.0;
    return -b * s * std::log1p(-2.0 * std::fabs(u));
  }

  double exponential(double mean) noexcept {
    return -mean * std::log1p(-uniform01());
  }

  // Independent child stream; deterministic in (seed, stream index).
  RandomSource split(std::uint64_t stream) const noexcept {
    RandomSource child(0);
    child.base_ = mix(base_ + mix(stream + 0x9e3779b97f4a7c15ull));
    child.counter_ = 0;
    return child;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t base_;
  std::uint64_t counter_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace szt
