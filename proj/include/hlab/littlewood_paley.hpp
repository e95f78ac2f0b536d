#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/symbol.hpp"

namespace hlab {

/// Smooth step: 0 for u <= 0, 1 for u >= 1, C^inf in between.
double smooth_step(double u);

/**
 * Radial plateau: 0 outside [a0, b0], 1 on [a1, b1], smooth transitions.
 * Requires a0 < a1 <= b1 < b0.
 */
double plateau(double r, double a0, double a1, double b1, double b0);

/// exp(1 - 1/(1 - v^2)) with v the affine image of [1/2, 2] onto [-1, 1].
double annulus_bump(double r);

/** Radial profiles, all evaluated at a radius r = |xi| >= 0. */
double psi_profile(double r);
/** 1 on [0, 1], 0 from 2 on; equals sum_{j <= 0} psi(r / 2^j) for r > 0. */
double phi_profile(double r);
double theta_profile(double r, int m);
double gamma_profile(double r);
double lambda_profile(double r);

/** Finite dyadic window k_min..k_max. */
struct DyadicWindow {
  int k_min = -4;
  int k_max = 4;
  int octaves() const { return k_max - k_min + 1; }
};

struct AnnulusConstants {
  double support_inner, plateau_inner, plateau_outer, support_outer;
};

/**
 * The bump apparatus psi, Psi^(m), Theta^(m), Gamma, Lambda^(m), phi for
 * fixed (m, n) and a dyadic window. Psi^(m) uses the psi profile in the
 * mn-dimensional radius.
 */
class LPFamily {
 public:
  int m() const { return m_; }
  int n() const { return n_; }
  const DyadicWindow& window() const { return window_; }
  /** floor(log2 m) */
  int log2_m() const;

  double psi_hat(std::span<const double> xi) const { return psi_profile(norm_of(xi)); }
  double phi_hat(std::span<const double> xi) const { return phi_profile(norm_of(xi)); }
  double Psi_m_hat(std::span<const double> xi) const { return psi_profile(norm_of(xi)); }
  double Theta_m_hat(std::span<const double> xi) const { return theta_profile(norm_of(xi), m_); }
  double Gamma_hat(std::span<const double> xi) const { return gamma_profile(norm_of(xi)); }
  double Lambda_m_hat(std::span<const double> xi) const { return lambda_profile(norm_of(xi)); }

  /** sum_{k in window} psi(r / 2^k) */
  double partition_sum(double r) const;

  AnnulusConstants psi_annulus() const { return {0.5, 0.5, 2.0, 2.0}; }
  AnnulusConstants theta_annulus() const;
  AnnulusConstants gamma_annulus() const { return {0.99, 0.999, 1.001, 1.01}; }
  AnnulusConstants lambda_annulus() const;

  /** Largest partition-identity defect met while certifying the family. */
  double partition_defect() const { return partition_defect_; }

 private:
  friend LPFamily build_family(int m, int n, DyadicWindow window, const Grid* freq_grid);
  int m_ = 1;
  int n_ = 1;
  DyadicWindow window_;
  double partition_defect_ = 0.0;
};

/**
 * Builds and certifies a family. With a frequency grid, the window must be
 * resolvable: 2^k_min >= 1/(2L) and 2^k_max <= M/(4L).
 */
LPFamily build_family(int m, int n, DyadicWindow window, const Grid* freq_grid = nullptr);

/** sigma(2^k .). Closed forms stay exact; samples are multilinearly interpolated. */
MultiplierSymbol dilate_symbol(const MultiplierSymbol& sigma, int k);

struct SymbolDecomposition {
  std::vector<MultiplierSymbol> parts;  // sigma^(1) .. sigma^(m)
  MultiplierSymbol low;
  MultiplierSymbol high;
  DyadicWindow k_window;
  /** max |sum_l sigma^(l) - sigma| on the grid */
  double reconstruction_defect = 0.0;
};

/**
 * Regroups sum_{k_1..k_m} sigma psi_{k_1} x ... x psi_{k_m} by the position
 * of the largest index: sigma^(l) collects k_l > k_j for j < l and
 * k_l >= k_j for j > l. The high part of sigma^(1) keeps k_j <= k - 5 -
 * floor(log2 m) for all j >= 2.
 */
SymbolDecomposition decompose(const MultiplierSymbol& sigma, const LPFamily& fam);

enum class ProjectionKind { band, low, low_shifted };

/** Multiplies g-hat by psi(./2^k), phi(./2^k) or phi(./2^{k-5-floor(log2 m)}). */
SampledField project(const SampledField& g, const LPFamily& fam, ProjectionKind kind, int k);

/**
 * Writes the profiles sampled on a frequency grid as field dumps
 * (prefix_psi.hlab, ...) and prefix.json with the annulus constants.
 */
void write_family(const std::string& prefix, const LPFamily& fam, const Grid& freq_grid);
std::string family_json(const LPFamily& fam);

}  // namespace hlab
