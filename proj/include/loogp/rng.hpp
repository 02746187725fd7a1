#ifndef LOOGP_RNG_HPP
#define LOOGP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace loogp {

/// Counter-based generator (Weyl sequence + SplitMix64 finalizer). Each draw
/// hashes an incrementing counter, so streams can be split by deriving a new
/// key without sharing state. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent child seed from (seed, tag). Used to split one
/// per-command seed into per-component, per-replication, per-start streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  SplitMix64 mix(seed ^ (0xA0761D6478BD642FULL + tag * 0xE7037ED1A0B428DBULL));
  mix();
  return mix();
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
  return derive_seed(derive_seed(seed, a, b), c);
}

/// Uniform double in [0, 1), 53 random bits.
inline double uniform01(SplitMix64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal draw via Box-Muller. Stateless: consumes two uniforms per
/// call and discards the paired variate, so sequences do not depend on call
/// parity.
inline double standard_normal(SplitMix64& rng) {
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * M_PI * u2);
}

/// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

}  // namespace loogp

#endif  // LOOGP_RNG_HPP
