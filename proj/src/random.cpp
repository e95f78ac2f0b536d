#include "hlab/random.hpp"

#include <cmath>
#include <numbers>

namespace hlab {

namespace {

// Stable counter for an integer frequency vector, independent of M.
std::uint64_t freq_key(const std::array<long, kMaxDim>& k, int dim) {
  std::uint64_t h = 0x51ed270b27c5a7d1ull + static_cast<std::uint64_t>(dim);
  for (int a = 0; a < dim; ++a) h = splitmix64(h ^ static_cast<std::uint64_t>(k[a]));
  return h;
}

}  // namespace

double CounterRng::normal(std::uint64_t counter) const {
  double u1 = uniform(2 * counter);
  const double u2 = uniform(2 * counter + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-60;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

complex CounterRng::complex_normal(std::uint64_t counter) const {
  return complex(normal(2 * counter), normal(2 * counter + 1)) / std::sqrt(2.0);
}

SampledField band_limited_spectrum(const Grid& grid, const CounterRng& rng, double max_freq,
                                   bool real_valued) {
  require(max_freq >= 0.0, "max_freq must be nonnegative");
  require(max_freq < grid.nyquist(), "max_freq beyond the grid's Nyquist frequency");
  SampledField out(grid, Space::frequency);
  const double mass = 1.0 / grid.freq_cell_volume();  // (2L)^d
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Index idx = grid.unravel(i);
    std::array<long, kMaxDim> k{};
    std::array<long, kMaxDim> neg{};
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      k[a] = grid.freq_index(idx[a]);
      neg[a] = -k[a];
      r2 += grid.freq(idx[a]) * grid.freq(idx[a]);
    }
    if (r2 > max_freq * max_freq) continue;
    complex c;
    if (real_valued) {
      // Pair k with -k: draw on the lexicographically larger one.
      const bool flip = std::lexicographical_compare(k.begin(), k.begin() + grid.dim(), neg.begin(),
                                                     neg.begin() + grid.dim());
      const complex z = rng.complex_normal(freq_key(flip ? neg : k, grid.dim()));
      const bool self = k == neg;
      c = self ? complex(z.real(), 0.0) : (flip ? std::conj(z) : z);
    } else {
      c = rng.complex_normal(freq_key(k, grid.dim()));
    }
    out[i] = mass * c;
  }
  return out;
}

SampledField band_limited_field(const Grid& grid, const CounterRng& rng, double max_freq,
                                bool real_valued) {
  SampledField f = inverse_transform(band_limited_spectrum(grid, rng, max_freq, real_valued));
  if (real_valued) {
    for (auto& z : f.values()) z = complex(z.real(), 0.0);
  }
  return f;
}

SampledField white_noise_field(const Grid& grid, const CounterRng& rng, bool real_valued) {
  SampledField out(grid, Space::physical);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out[i] = real_valued ? complex(rng.normal(i), 0.0) : rng.complex_normal(i);
  }
  return out;
}

}  // namespace hlab
