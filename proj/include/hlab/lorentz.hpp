#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "hlab/field_core.hpp"

namespace hlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/** Exponent pair (p, q) of L^{p,q}; either may be infinite. */
struct LorentzIndex {
  double p = 2.0;
  double q = 2.0;

  /** Throws unless p, q > 0, and rejects p = inf with q < inf. */
  void validate() const;
};

/**
 * Decreasing rearrangement of a step function: f* = levels[i] on
 * [breakpoints[i], breakpoints[i+1]), and 0 past breakpoints.back().
 * breakpoints[0] = 0, so breakpoints.size() == levels.size() + 1.
 */
struct Rearrangement {
  std::vector<double> breakpoints{0.0};
  std::vector<double> levels;

  /** |{f* > s}|, recomputed from the steps. */
  double distribution(double s) const;
  /** integral of f* over (0, inf). */
  double integral() const;
  double total_measure() const { return breakpoints.back(); }
};

/**
 * Cell measure used for a field: h^d in physical space and (1/2L)^d in
 * frequency space, so Fourier-side norms use the frequency-grid measure.
 */
double cell_measure(const SampledField& f);

/** h^d * #{cells with |f| > s}. */
double distribution_function(const SampledField& f, double s);

Rearrangement decreasing_rearrangement(const SampledField& f);
/** Rearrangement of nonnegative magnitudes, each carried by a cell of measure cell. */
Rearrangement rearrange_magnitudes(std::span<const double> magnitudes, double cell);

/** Exact L^{p,q} quasi-norm of the step function f*. */
double lorentz_norm(const Rearrangement& r, const LorentzIndex& idx);
double lorentz_norm(const SampledField& f, const LorentzIndex& idx);

struct HolderPairing {
  double lhs = 0.0;
  double rhs = 0.0;
};

/** lhs = integral |f g|, rhs = |f|_{p,q} |g|_{p',q'}. Needs 1 < p < inf, 1 <= q <= inf. */
HolderPairing holder_pairing(const SampledField& f, const SampledField& g, const LorentzIndex& idx);

/** Conjugate exponent: 1/p + 1/p' = 1. */
double conjugate_exponent(double p);

/**
 * Constant C with |f|_{p,q1} <= C |f|_{p,q2} for q2 <= q1, namely
 * (q2/p)^{1/q2 - 1/q1}.
 */
double lorentz_embedding_constant(double p, double q1, double q2);

/** Two-column CSV "breakpoint,level", one row per step (right endpoints). */
void write_rearrangement_csv(std::ostream& out, const Rearrangement& r);

}  // namespace hlab
