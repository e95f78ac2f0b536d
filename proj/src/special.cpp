#include "hlab/special.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace hlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Gauss16 = boost::math::quadrature::gauss<double, 16>;

// Calls fn(x, w) for the 16 Gauss-Legendre nodes of [a, b].
template <class Fn>
void gauss_nodes(double a, double b, Fn&& fn) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& x = Gauss16::abscissa();
  const auto& w = Gauss16::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      fn(mid, half * w[i]);
      continue;
    }
    fn(mid - half * x[i], half * w[i]);
    fn(mid + half * x[i], half * w[i]);
  }
}

// Leading terms of K_nu for small x, nu >= 0.
double log_bessel_k_small(double nu, double log_x) {
  const double L = std::log(2.0) - log_x;
  const double x = std::exp(log_x);
  if (nu < 1e-4) return std::log(L - std::numbers::egamma);
  // K_nu ~ Gamma(nu)/2 (2/x)^nu (1 - x^2/(4(nu - 1))); the correction is
  // dropped near nu = 1 where it turns into an x^2 ln x term below 1e-5.
  auto leading = [&] {
    double v = std::lgamma(nu) - std::log(2.0) + nu * L;
    if (nu > 1.5) v += std::log1p(-x * x / (4.0 * (nu - 1.0)));
    return v;
  };
  if (nu * L > 30.0) return leading();
  const double a = std::tgamma(1.0 + nu) * std::exp(nu * L);
  const double b = std::tgamma(1.0 - nu) * std::exp(-nu * L);
  if (nu < 1.0) return std::log((a - b) / (2.0 * nu));
  return leading();
}

// Hankel asymptotic series for large x.
double log_bessel_k_large(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    const double next = term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
  }
  return 0.5 * std::log(kPi / (2.0 * x)) - x + std::log(sum);
}

}  // namespace

void LogSumExp::add(double log_term) {
  if (log_term == kNegInf) return;
  if (log_term <= max_) {
    scaled_ += std::exp(log_term - max_);
  } else {
    scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSumExp::value() const { return scaled_ > 0.0 ? max_ + std::log(scaled_) : kNegInf; }

double log_bessel_k(double nu, double x) {
  nu = std::abs(nu);
  if (x > 500.0 && nu * nu < 0.1 * x) return log_bessel_k_large(nu, x);
  if (x >= 1e-3) {
    try {
      const double k = std::cyl_bessel_k(nu, x);
      if (std::isfinite(k) && k > 0.0) return std::log(k);
    } catch (const std::exception&) {
    }
    if (x > 1.0) return log_bessel_k_large(nu, x);
  }
  return log_bessel_k_small(nu, std::log(x));
}

double log_bessel_k_at_log(double nu, double log_x) {
  if (log_x < std::log(1e-3)) return log_bessel_k_small(std::abs(nu), log_x);
  return log_bessel_k(nu, std::exp(log_x));
}

double log_bessel_kernel(double s, int d, double rho) { return log_bessel_kernel_at_log(s, d, std::log(rho)); }

double log_bessel_kernel_at_log(double s, int d, double log_rho) {
  const double nu = 0.5 * (d - s);
  return std::log(2.0) + 0.5 * (s - d) * (std::log(2.0 * kPi) + log_rho) + log_bessel_k_at_log(nu, log_rho) -
         0.5 * s * std::log(4.0 * kPi) - std::lgamma(0.5 * s);
}

double log_h_hat(double t, double gamma, int d, double rho) { return log_h_hat_at_log(t, gamma, d, std::log(rho)); }

double log_h_hat_at_log(double t, double gamma, int d, double log_rho) {
  // Weight e^{-lambda} against rho^{2 lambda} decay for small rho sets the scale.
  const double scale = 1.0 / std::max(1.0, 1.0 - 2.0 * log_rho);
  const double lg = std::lgamma(0.5 * gamma);
  return log_integrate_half_line(
      [&](double lambda) {
        // e^{-lambda} below e^{-700}: the Bessel factor is bounded by its value at s = d.
        if (lambda > 700.0) return kNegInf;
        return (0.5 * gamma - 1.0) * std::log(lambda) - lambda - lg + log_bessel_kernel_at_log(t + 2.0 * lambda, d, log_rho);
      },
      scale);
}

double h_hat(double t, double gamma, int d, double rho) { return std::exp(log_h_hat(t, gamma, d, rho)); }

double h_value(double t, double gamma, double r) {
  const double a = 4.0 * kPi * kPi * r * r;
  return std::pow(1.0 + a, -0.5 * t) * std::pow(1.0 + std::log1p(a), -0.5 * gamma);
}

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

double ball_volume(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

double radial_fourier(const std::function<double(double)>& f, int d, double rho, double r_max, double panel_width) {
  const int panels = std::max(1, static_cast<int>(std::ceil(r_max / panel_width)));
  const double w = r_max / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    double part = 0.0;
    gauss_nodes(p * w, (p + 1) * w, [&](double r, double wt) {
      const double fr = f(r);
      if (fr == 0.0) return;
      if (d == 1) {
        part += wt * fr * std::cos(2.0 * kPi * rho * r);
      } else {
        part += wt * fr * std::cyl_bessel_j(0.5 * d - 1.0, 2.0 * kPi * rho * r) * std::pow(r, 0.5 * d);
      }
    });
    acc += part;
  }
  if (d == 1) return 2.0 * acc;
  return 2.0 * kPi * std::pow(rho, 1.0 - 0.5 * d) * acc;
}

double log_integrate_half_line(const std::function<double(double)>& log_f, double scale) {
  // x = scale * exp(pi/2 sinh tau), dx = x pi/2 cosh tau dtau.
  const double h = 1.0 / 32.0;
  const double tau_max = 6.5;
  LogSumExp acc;
  for (double tau = -tau_max; tau <= tau_max + 1e-12; tau += h) {
    const double e = 0.5 * kPi * std::sinh(tau);
    if (e < -700.0 || e > 700.0) continue;
    const double x = scale * std::exp(e);
    const double v = log_f(x);
    if (!std::isfinite(v)) continue;
    acc.add(v + std::log(x) + std::log(0.5 * kPi * std::cosh(tau)) + std::log(h));
  }
  return acc.value();
}

double log_integrate(const std::function<double(double)>& log_f, double a, double b, int panels) {
  LogSumExp acc;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    gauss_nodes(a + p * w, a + (p + 1) * w, [&](double u, double wt) { acc.add(log_f(u) + std::log(wt)); });
  }
  return acc.value();
}

}  // namespace hlab
