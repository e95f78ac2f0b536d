#pragma once

#include <cstdint>
#include <string_view>

#include "hlab/field_core.hpp"

namespace hlab {

/// Name of the counter-based generator; bump when the stream changes.
inline constexpr std::string_view kGeneratorName = "hlab-splitmix-v1";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/**
 * Stateless generator: every draw is a hash of (seed, stream, counter), so a
 * value never depends on how many draws came before it.
 */
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t bits(std::uint64_t counter) const { return splitmix64(key_ ^ splitmix64(counter)); }
  /** Uniform in [0, 1). */
  double uniform(std::uint64_t counter) const { return (bits(counter) >> 11) * 0x1.0p-53; }
  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }
  /** Standard normal via Box-Muller on counters 2c and 2c+1. */
  double normal(std::uint64_t counter) const;
  /** Complex normal with E|z|^2 = 1. */
  complex complex_normal(std::uint64_t counter) const;

  /** Child generator for a sub-stream. */
  CounterRng child(std::uint64_t stream) const { return CounterRng(key_, stream); }

 private:
  std::uint64_t key_;
};

/**
 * Random trigonometric polynomial sum_k c_k e^{2 pi i k.x/(2L)} over integer
 * frequency vectors with |k/(2L)| <= max_freq. Coefficients are keyed by k,
 * so the same polynomial is produced on any grid that resolves it. With
 * real_valued the coefficients obey c_{-k} = conj(c_k).
 */
SampledField band_limited_field(const Grid& grid, const CounterRng& rng, double max_freq,
                                bool real_valued = true);

/** Same polynomial, returned as its frequency-space samples. */
SampledField band_limited_spectrum(const Grid& grid, const CounterRng& rng, double max_freq,
                                   bool real_valued = true);

/** Independent normal samples at every grid point. */
SampledField white_noise_field(const Grid& grid, const CounterRng& rng, bool real_valued = true);

}  // namespace hlab
