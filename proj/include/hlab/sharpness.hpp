#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/littlewood_paley.hpp"
#include "hlab/lorentz.hpp"
#include "hlab/random.hpp"
#include "hlab/symbol.hpp"

namespace hlab {

/** case1: r < mn/s; case2: r = mn/s; control: t > mn, where H is integrable. */
enum class Regime { case1, case2, control };

std::string regime_name(Regime r);

struct SharpnessParams {
  int m = 2;
  int n = 1;
  double s = 1.2;
  double r = 1.5;
  double q = 2.0;
  double t = 1.9;
  double gamma = 1.0;
  std::vector<double> p_js{4.0, 4.0};

  int mn() const { return m * n; }
  double p() const;
  /** Classifies the parameters, throwing ValidationError if no regime fits. */
  Regime regime() const;
};

SharpnessParams case1_preset();
SharpnessParams case2_preset();
/** case2 with t = 2.3 > mn. */
SharpnessParams control_preset();
/** "case1", "case2" or "control". */
SharpnessParams preset_by_name(const std::string& name);

/** Fixed smooth radial cutoff: 1 on [0, 1/2], 0 from 1 on, nonincreasing. */
double eta_profile(double r);

/** H_{(t,gamma)} sampled on a physical grid of any dimension. */
SampledField h_kernel(double t, double gamma, const Grid& grid);

/** eta(|x| / N) on a physical grid; N must fit inside the half-width. */
SampledField window(int N, const Grid& grid);

/**
 * Fourier transform of H eta(./N) on R^d at radius rho, by a radial Hankel
 * transform. Tabulated on [0.98, 1.02] for the symbol.
 */
double windowed_kernel_hat(double t, double gamma, int d, int N, double rho);

/**
 * sigma^(N) = FT(H eta(./N)) Gamma-hat as a closed-form symbol on the given
 * frequency grid (dim mn). Rejects grids with fewer than 8 cells across the
 * Gamma annulus.
 */
MultiplierSymbol counterexample_symbol(const SharpnessParams& params, int N, const Grid& grid);

/** Same symbol from the grid transform of H eta(./N) on a physical grid. */
MultiplierSymbol counterexample_symbol_from_grid(const SharpnessParams& params, int N, const Grid& grid);

/** Smooth bump on [999/(1000 sqrt m), 1001/(1000 sqrt m)], the theta-hat profile. */
double theta_hat_profile(double r, int m);

/**
 * f_j = eps^{n/p_j} theta(eps x) built from eps^{n/p_j - n} theta-hat(xi/eps)
 * on an n-dimensional grid. The theta-hat shell must span >= 8 frequency cells
 * and eps >= 8 h / L.
 */
std::vector<SampledField> test_functions(double epsilon, const std::vector<double>& p_js, const Grid& grid, int m);

/** |S^{d-1}| int H(r) eta(r/N) r^{d-1} dr on fixed Gauss-Legendre panels up to N_max. */
double windowed_kernel_l1(double t, double gamma, int d, int N, int N_max);

struct SweepOptions {
  /** Frequency grid for the upper bound: half-width and points per axis. */
  double freq_half_width = 2.5;
  int freq_points = 2048;
  double upper_band = 1.3;
  double fit_tolerance = 0.3;
  double saturation = 0.02;
  /** Worker threads over N; 0 picks the hardware concurrency. */
  unsigned threads = 0;
};

struct SweepVerdict {
  Regime regime = Regime::case1;
  double upper_band_ratio = 0.0;  // max upper / min upper
  double lower_fit_exponent = 0.0;
  bool lower_monotone = false;
  bool lower_strict = false;
  double last_increment = 0.0;  // (lower[-1] - lower[-2]) / lower[-1]
  bool pass = false;
};

struct SweepCurve {
  std::vector<int> N_values;
  std::vector<double> upper;
  std::vector<double> lower;
  SweepVerdict verdict;
};

/**
 * Upper: max over k in {-1, 0, 1} of |sigma^(N)(2^k .) Psi-hat|_{L_s^{r,q}}.
 * Lower: |H eta(./N)|_{L^1}. The verdict follows the regime:
 * case1 fits the growth exponent (target mn - t), case2 fits the slope in
 * ln N (must be positive), control checks the last doubling increment.
 */
SweepCurve sweep(const SharpnessParams& params, const std::vector<int>& N_values, const SweepOptions& opts = {});

/**
 * Growth exponent of the lower curve: differences over successive N, times
 * the log correction (1 + ln(1 + 4 pi^2 N^2))^{gamma/2}, fitted by least
 * squares against ln N over the top half.
 */
double lower_fit_exponent(const std::vector<int>& N_values, const std::vector<double>& lower, double gamma);

/** Least-squares slope of y against x over the top half of the points. */
double top_half_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_sweep_csv(std::ostream& out, const SweepCurve& curve);
std::string sweep_verdict_json(const SweepCurve& curve);

/**
 * Finiteness by truncation: shell integrals over log-radius shells
 * [2^j, 2^{j+1}] (j up to 10); convergent iff the last shell is smaller than
 * the one before.
 */
struct PhaseResult {
  bool convergent = false;
  double log_last_shell = 0.0;
  double log_prev_shell = 0.0;
};
/** |H_{(t,gamma)}|_{L^r(R^d)}^r. */
PhaseResult classify_h_lr(double t, double gamma, double r, int d);
/** |H-hat_{(t,gamma)}|_{L^{r,q}(R^d)}^q. */
PhaseResult classify_h_hat_lrq(double t, double gamma, double r, double q, int d);

/** Closed-form iff conditions for finiteness. */
bool predicted_h_lr(double t, double gamma, double r, int d);
bool predicted_h_hat_lrq(double t, double gamma, double r, double q, int d);

/**
 * Spectral identity on one band-limited instance (n = 1, any m): the grid
 * operator with symbol FT(H eta(./N)) equals the direct spatial sum
 * sum_y H eta(y/N) prod f_j(x - y_j) h^m at every grid point.
 * Returns the max relative discrepancy.
 */
double spectral_identity_defect(const SharpnessParams& params, int N, double epsilon, const Grid& grid,
                                const CounterRng& rng);

}  // namespace hlab
