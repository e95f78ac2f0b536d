#pragma once

#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/lorentz.hpp"

namespace hlab {

/** Exponents (s, p, q) of the Lorentz-Sobolev space L^{p,q}_s. */
struct SobolevIndex {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;

  LorentzIndex lorentz() const { return {p, q}; }
};

enum class Direction { forward, inverse };

/** (1 + 4 pi^2 |xi|^2)^{s/2} */
double bessel_symbol(double xi_squared, double s);

/**
 * (I - Delta)^{s/2} f, or its inverse, by multiplication on the centered
 * frequency grid. Frequency-space input is multiplied directly.
 */
SampledField bessel_potential(const SampledField& f, double s, Direction direction);

/** |(I - Delta)^{s/2} f|_{L^{p,q}} */
double lorentz_sobolev_norm(const SampledField& f, const SobolevIndex& idx);

/**
 * M_r f over grid-aligned cubes. A half-width rho means a cube of 2 rho / h
 * cells per side, so rho = h/2 is the cell itself.
 */
struct MaximalConfig {
  double r = 1.0;
  std::vector<double> radius_set;
};

/** Every half-width from h/2 up to L in steps of h/2. */
std::vector<double> full_radius_set(const Grid& grid);
/** Half-widths h/2 * 2^j up to L. */
std::vector<double> dyadic_radius_set(const Grid& grid);

SampledField maximal_function(const SampledField& f, const MaximalConfig& cfg);

/**
 * Evaluates the trigonometric interpolant of f at the points
 * z = x - y / 2^k for every y on the grid (a separable tensor of points).
 */
SampledField shifted_samples(const SampledField& f, const Index& x, int k);

/**
 * |f(x - y/2^k) (1 + 4 pi^2 |y|^2)^{-s/2}|_{L^{d/s, inf}} over y. The weight uses
 * the unwrapped y in [-L, L)^d; f is extended periodically.
 */
double shifted_weight_profile(const SampledField& f, const Index& x, int k, double s);

}  // namespace hlab
