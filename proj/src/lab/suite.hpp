#pragma once

#include <cstdint>
#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/lab.hpp"
#include "hlab/random.hpp"
#include "hlab/symbol.hpp"

namespace hlab::suite {

/** Worst ratio lhs/rhs seen over a batch, with how many instances ran. */
struct RatioStats {
  double max_ratio = 0.0;
  int instances = 0;
};

/** Compactly supported random field of one of three kinds (noise, bumps, modulated Gaussian). */
SampledField compact_random_field(const Grid& grid, const CounterRng& rng, int kind);

/** Constant-1 inequalities; one ratio per instance. */
RatioStats young(std::uint64_t seed, int instances);
RatioStats hausdorff_young(std::uint64_t seed, int instances);
RatioStats holder(std::uint64_t seed, int instances);

/** Bounded-ratio statements evaluated at resolution M (same functions at every M). */
double kato_ponce_ratio(std::uint64_t seed, int M, int count);
/** One max ratio per k in [k_lo, k_hi]. */
std::vector<double> shifted_maximal_ratios(std::uint64_t seed, int M, int count, int k_lo, int k_hi);
double domination_ratio(std::uint64_t seed, int M, int count);
double coordinate_map_ratio(std::uint64_t seed, int M, int count, double s, double p, double q);
double marshall_ratio(std::uint64_t seed, int M, int count, int h);
double fefferman_stein_ratio(std::uint64_t seed, int M, int count);

/** Smooth random symbol on the mn-dim grid: radial plateau on [a0, b0] times random cosines. */
MultiplierSymbol random_smooth_symbol(const Grid& grid, int m, int n, const CounterRng& rng, double a0, double a1,
                                      double b1, double b0, bool with_hint = true);

/** |b - a| / |a| */
double relative_change(double a, double b);

}  // namespace hlab::suite
