#pragma once

#include <cstdint>
#include <vector>

#include "jacmap/scalar.hpp"

namespace jacmap {

// SplitMix64.  Fixed arithmetic, so sample sequences are identical on every
// platform and standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  // Independent stream for the index-th task derived from a base seed, so
  // results do not depend on the order tasks are processed in.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return SplitMix64(mix.next());
  }

 private:
  std::uint64_t state_;
};

// Dyadic rational k / 2^20 uniform over [lo, hi] on that grid.
inline Rational grid_uniform(SplitMix64& rng, int lo, int hi) {
  const std::int64_t steps = static_cast<std::int64_t>(hi - lo) << 20;
  std::int64_t k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(steps) + 1));
  Rational q(mpz_class(std::to_string(k + (static_cast<std::int64_t>(lo) << 20))), mpz_class(1) << 20);
  q.canonicalize();
  return q;
}

// Complex point with real and imaginary parts on the 2^-20 grid in [lo, hi].
inline std::vector<Scalar> sample_box(SplitMix64& rng, std::size_t dim, int lo = -2, int hi = 2) {
  std::vector<Scalar> out;
  out.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Rational re = grid_uniform(rng, lo, hi);
    Rational im = grid_uniform(rng, lo, hi);
    out.emplace_back(re, im);
  }
  return out;
}

}  // namespace jacmap
