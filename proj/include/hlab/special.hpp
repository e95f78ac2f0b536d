#pragma once

#include <functional>

namespace hlab {

/** Running log(sum exp(a_i)) without overflow. */
class LogSumExp {
 public:
  void add(double log_term);
  /** -inf when nothing (or only zeros) was added. */
  double value() const;

 private:
  double max_ = -1.0 / 0.0;
  double scaled_ = 0.0;
};

/** ln K_nu(x) for real nu and x > 0, stable for tiny and huge x. */
double log_bessel_k(double nu, double x);
/** Same, with x given by its logarithm (x may underflow a double). */
double log_bessel_k_at_log(double nu, double log_x);

/**
 * ln G_s(rho), where G_s is the Fourier transform of (1 + 4 pi^2 |x|^2)^{-s/2}
 * on R^d at radius rho:
 *   G_s(rho) = 2 (2 pi rho)^{(s-d)/2} K_{(d-s)/2}(rho) / ((4 pi)^{s/2} Gamma(s/2)).
 */
double log_bessel_kernel(double s, int d, double rho);
double log_bessel_kernel_at_log(double s, int d, double log_rho);

/**
 * ln of the Fourier transform of H_{(t,gamma)} on R^d at radius rho > 0,
 * by subordination: H = int_0^inf w(lambda) (1 + 4 pi^2 |x|^2)^{-(t + 2 lambda)/2}
 * with w = lambda^{gamma/2 - 1} e^{-lambda} / Gamma(gamma/2).
 */
double log_h_hat(double t, double gamma, int d, double rho);
double log_h_hat_at_log(double t, double gamma, int d, double log_rho);
double h_hat(double t, double gamma, int d, double rho);

/** H_{(t,gamma)} at radius r. */
double h_value(double t, double gamma, double r);

/** Surface area of the unit sphere in R^d and volume of the unit ball. */
double sphere_area(int d);
double ball_volume(int d);

/**
 * Fourier transform at radius rho of the radial function f supported in
 * [0, r_max] on R^d: 2 pi rho^{1-d/2} int f(r) J_{d/2-1}(2 pi rho r) r^{d/2} dr
 * (a cosine transform for d = 1). Gauss-Legendre panels of the given width.
 */
double radial_fourier(const std::function<double(double)>& f, int d, double rho, double r_max,
                      double panel_width = 0.5);

/**
 * ln int_0^inf exp(log_f(x)) dx by the exp-sinh rule, with x measured in
 * units of `scale`. Handles integrable algebraic singularities at 0.
 */
double log_integrate_half_line(const std::function<double(double)>& log_f, double scale);

/** ln int_a^b exp(log_f(u)) du on `panels` Gauss-Legendre panels. */
double log_integrate(const std::function<double(double)>& log_f, double a, double b, int panels);

}  // namespace hlab
