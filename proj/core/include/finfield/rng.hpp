#pragma once

#include <cstdint>

namespace finfield {

// Splittable deterministic generator (splitmix64). Produces identical streams
// on every platform, which the fixtures and the sampler rely on; the standard
// <random> distributions are implementation-defined and would not.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in {0, ..., n-1}. The modulo bias is ~n / 2^64, irrelevant here.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  // Derives an independent stream.
  SplitMix64 split() { return SplitMix64(next() ^ 0x632BE59BD9B4E019ull); }

  static constexpr const char* algorithm = "splitmix64";

 private:
  std::uint64_t state_;
};

}  // namespace finfield
