#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hlab/multiplier_op.hpp"
#include "hlab/sharpness.hpp"
#include "hlab/special.hpp"

using namespace hlab;
using std::numbers::pi;

namespace {

double radius_at(const Grid& g, std::size_t i) {
  const Index idx = g.unravel(i);
  double r2 = 0.0;
  for (int a = 0; a < g.dim(); ++a) r2 += g.coord(idx[a]) * g.coord(idx[a]);
  return std::sqrt(r2);
}

double freq_radius_at(const Grid& g, std::size_t i) {
  const auto xi = freq_point(g, i);
  return norm_of(std::span<const double>(xi.data(), g.dim()));
}

}  // namespace

TEST_CASE("ln K_nu agrees with the library across branches") {
  for (double nu : {0.0, 0.25, 0.5, 1.0, 2.6, 7.0}) {
    for (double x : {1e-4, 5e-4, 2e-3, 0.1, 1.0, 10.0, 80.0}) {
      const double ref = std::log(std::cyl_bessel_k(nu, x));
      CHECK(log_bessel_k(nu, x) == doctest::Approx(ref).epsilon(1e-6));
    }
  }
  // Large-argument series against the exact half-integer order: K_{1/2} = sqrt(pi/2x) e^{-x}.
  const double x = 900.0;
  CHECK(log_bessel_k(0.5, x) == doctest::Approx(0.5 * std::log(pi / (2 * x)) - x).epsilon(1e-14));
}

TEST_CASE("Bessel kernel: d = 1, s = 2 is e^{-|xi|}/2") {
  for (double rho : {0.1, 0.7, 3.0}) {
    CHECK(std::exp(log_bessel_kernel(2.0, 1, rho)) == doctest::Approx(0.5 * std::exp(-rho)).epsilon(1e-12));
  }
}

TEST_CASE("H-hat by subordination matches a direct radial transform") {
  // Oracle: Gauss-Kronrod on the cosine/Bessel integral of H with a slow
  // smooth cutoff far out.
  const double t = 3.0, gamma = 1.0;
  const double R = 300.0;
  for (double rho : {0.5, 1.0, 2.0}) {
    auto integrand = [&](double r) {
      const double u = r / R;
      const double w = u < 0.5 ? 1.0 : 0.5 * (1.0 + std::cos(2.0 * pi * (u - 0.5)));
      return h_value(t, gamma, r) * w * std::cyl_bessel_j(0.0, 2 * pi * rho * r) * r;
    };
    double acc = 0.0;
    for (int p = 0; p < 1200; ++p) {
      acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, p * R / 1200, (p + 1) * R / 1200);
    }
    CHECK(h_hat(t, gamma, 2, rho) == doctest::Approx(2 * pi * acc).epsilon(1e-7));
  }
}

TEST_CASE("H-hat in log space survives radii that underflow") {
  // Leading behaviour rho^{-(d-t)} (1 + 2 ln(1/rho))^{-gamma/2} up to a constant.
  const double a = log_h_hat_at_log(1.0, 1.0, 2, -100.0) - (100.0 - 0.5 * std::log(201.0));
  const double b = log_h_hat_at_log(1.0, 1.0, 2, -1000.0) - (1000.0 - 0.5 * std::log(2001.0));
  CHECK(std::isfinite(b));
  CHECK(std::abs(a - b) < 0.01);
}

TEST_CASE("regimes and presets") {
  CHECK(case1_preset().regime() == Regime::case1);
  CHECK(case2_preset().regime() == Regime::case2);
  CHECK(control_preset().regime() == Regime::control);
  CHECK(preset_by_name("case2").gamma == 1.5);
  CHECK_THROWS_AS(preset_by_name("nope"), ValidationError);

  SharpnessParams p = case1_preset();
  p.t = 1.8;  // below mn - (mn/r - s)
  CHECK_THROWS_AS(p.regime(), ValidationError);
  p = case1_preset();
  p.r = 1.8;  // above mn/s
  CHECK_THROWS_AS(p.regime(), ValidationError);
  p = case2_preset();
  p.gamma = 0.9;  // not above 2/q
  CHECK_THROWS_AS(p.regime(), ValidationError);
  p = case2_preset();
  p.q = 1.0;
  CHECK_THROWS_AS(p.regime(), ValidationError);
  CHECK(case1_preset().p() == doctest::Approx(2.0));
}

TEST_CASE("h_kernel samples") {
  const Grid g = make_grid(2, 4.0, 64);
  const SampledField H = h_kernel(1.9, 1.0, g);
  const std::size_t origin = g.ravel(Index{32, 32});
  CHECK(H[origin].real() == 1.0);
  const std::size_t unit = g.ravel(Index{40, 32});  // x = (1, 0)
  const double a = 4 * pi * pi;
  CHECK(H[unit].real() == doctest::Approx(std::pow(1 + a, -0.95) * std::pow(1 + std::log(1 + a), -0.5)).epsilon(1e-15));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(H[i].real() > 0.0);
    CHECK(H[i].imag() == 0.0);
  }
  // Decreasing along a ray.
  for (int i = 33; i < 64; ++i) CHECK(H[g.ravel(Index{i, 32})].real() < H[g.ravel(Index{i - 1, 32})].real());
}

TEST_CASE("window family") {
  const Grid g = make_grid(2, 16.0, 256);
  CHECK_THROWS_AS(window(17, g), ValidationError);
  const SampledField w4 = window(4, g);
  const SampledField w8 = window(8, g);
  CHECK(w4[g.ravel(Index{128, 128})].real() == 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(w8[i].real() >= w4[i].real());
    CHECK(w4[i].real() >= 0.0);
    CHECK(w4[i].real() <= 1.0);
  }
  // int eta over R^2 = 2 pi int_0^1 eta(r) r dr.
  const double eta_int =
      2 * pi * boost::math::quadrature::gauss_kronrod<double, 61>::integrate([](double r) { return eta_profile(r) * r; }, 0.0, 1.0, 15, 1e-14);
  for (int N : {4, 8}) {
    const double got = integrate(window(N, g)).value.real();
    CHECK(got == doctest::Approx(N * N * eta_int).epsilon(1e-6));
  }
}

TEST_CASE("lower bound quadrature matches the grid integral") {
  const double t = 1.5, gamma = 1.0;
  const Grid g = make_grid(2, 8.0, 512);
  for (int N : {2, 4}) {
    const double grid_val = integrate(pointwise_product(h_kernel(t, gamma, g), window(N, g))).value.real();
    CHECK(windowed_kernel_l1(t, gamma, 2, N, 64) == doctest::Approx(grid_val).epsilon(1e-6));
  }
  // Exactly nondecreasing in N.
  double prev = 0.0;
  for (int N = 1; N <= 256; N *= 2) {
    const double v = windowed_kernel_l1(1.9, 1.0, 2, N, 256);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("windowed kernel transform matches the grid transform") {
  const double t = 1.9, gamma = 1.0;
  const int N = 4;
  const Grid g = make_grid(2, 8.0, 1024);
  const SampledField F = forward_transform(pointwise_product(h_kernel(t, gamma, g), window(N, g)));
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 97) {
    const double r = freq_radius_at(g, i);
    if (r < 0.5 || r > 1.5) continue;
    const double ref = windowed_kernel_hat(t, gamma, 2, N, r);
    worst = std::max(worst, std::abs(F[i] - ref));
    peak = std::max(peak, std::abs(ref));
  }
  CHECK(peak > 0.0);
  CHECK(worst <= 1e-8 * peak);
  // The grid route refuses to build sigma^(N) when the thin annulus is unresolved.
  CHECK_THROWS_AS(counterexample_symbol_from_grid(case1_preset(), N, g), ValidationError);
}

TEST_CASE("counterexample symbol: support, bound, dyadic vanishing") {
  const SharpnessParams p = case1_preset();
  const int N = 8;
  const Grid coarse = make_grid(2, 50.0, 256);
  CHECK_THROWS_AS(counterexample_symbol(p, N, coarse), ValidationError);

  const Grid g = make_grid(2, 200.0, 1024);
  const MultiplierSymbol sigma = counterexample_symbol(p, N, g);
  sigma.certify_support();
  const double l1 = windowed_kernel_l1(p.t, p.gamma, 2, N, N);
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = freq_radius_at(g, i);
    const double v = std::abs(sigma.at(i));
    peak = std::max(peak, v);
    if (r < 0.99 || r > 1.01) CHECK(v == 0.0);
  }
  CHECK(peak > 0.0);
  CHECK(peak <= l1);

  for (int k : {-3, -2, 2, 3}) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); i += 7) {
      const auto xi = freq_point(g, i);
      const double psi = psi_profile(norm_of(std::span<const double>(xi.data(), 2)));
      if (psi == 0.0) continue;
      std::array<double, 2> scaled{std::ldexp(xi[0], k), std::ldexp(xi[1], k)};
      worst = std::max(worst, std::abs(sigma.eval(scaled)) * psi);
    }
    CHECK(worst == 0.0);
  }
}

TEST_CASE("test functions: support, epsilon invariance, guards") {
  const Grid g = make_grid(1, std::ldexp(1.0, 21), 1 << 20);
  std::vector<double> norms;
  for (double eps : {1.0 / 128, 1.0 / 64, 1.0 / 32}) {
    const auto fs = test_functions(eps, {4.0, 4.0}, g, 2);
    REQUIRE(fs.size() == 2);
    norms.push_back(lorentz_norm(fs[0], LorentzIndex{4.0, 4.0}));
    const SampledField F = forward_transform(fs[1]);
    const double peak = max_abs(F);
    const double lo = eps * 0.999 / std::sqrt(2.0), hi = eps * 1.001 / std::sqrt(2.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = std::abs(g.freq(static_cast<int>(i)));
      if (r <= lo || r >= hi) {
        if (std::abs(F[i]) > 1e-12 * peak) FAIL("spectrum outside the theta-hat shell at " << r);
      }
    }
  }
  CHECK(norms[1] == doctest::Approx(norms[0]).epsilon(0.01));
  CHECK(norms[2] == doctest::Approx(norms[0]).epsilon(0.01));

  const Grid small = make_grid(1, 1024.0, 1024);
  CHECK_THROWS_AS(test_functions(1.0 / 128, {4.0, 4.0}, small, 2), ValidationError);
}

TEST_CASE("convolution identity and vanishing of T_{sigma^(N)} on low-frequency inputs") {
  const SharpnessParams p = case1_preset();
  const Grid g = make_grid(1, 16.0, 32);
  CHECK(spectral_identity_defect(p, 8, 0.5, g, CounterRng(7, 1)) <= 1e-8);
  CHECK(spectral_identity_defect(p, 4, 0.25, g, CounterRng(7, 2)) <= 1e-8);

  // Inputs below the alias band have joint spectrum in |xi| < 0.99.
  const Grid g1 = make_grid(1, 200.0, 1024);
  const MultiplierSymbol sigma = counterexample_symbol(p, 8, g1.with_dim(2));
  std::vector<SampledField> fs;
  for (int j = 0; j < 2; ++j) fs.push_back(band_limited_field(g1, CounterRng(3, j), 0.3));
  // Only transform roundoff reaches the annulus.
  CHECK(max_abs(hlab::apply(sigma, fs).output) <= 1e-12 * max_abs(fs[0]) * max_abs(fs[1]));
}

TEST_CASE("phase classification on a few points") {
  CHECK(classify_h_lr(1.3 * 2, 1.0, 1.0, 2).convergent);
  CHECK_FALSE(classify_h_lr(0.9 * 2, 3.0, 1.0, 2).convergent);
  CHECK(classify_h_lr(1.0, 1.5, 2.0, 2).convergent);        // critical t, gamma > 2/r
  CHECK_FALSE(classify_h_lr(1.0, 0.5, 2.0, 2).convergent);  // critical t, gamma < 2/r
  CHECK(classify_h_hat_lrq(1.0, 1.5, 2.0, 2.0, 2).convergent);
  CHECK_FALSE(classify_h_hat_lrq(1.0, 0.5, 2.0, 2.0, 2).convergent);
  CHECK_FALSE(classify_h_hat_lrq(0.7, 3.0, 2.0, 2.0, 2).convergent);
  CHECK(predicted_h_lr(1.0, 1.5, 2.0, 2));
  CHECK_FALSE(predicted_h_hat_lrq(1.0, 0.5, 2.0, 2.0, 2));
}

TEST_CASE("H-hat asymptotics") {
  const double t = 1.9, gamma = 1.0;
  auto c_at = [&](double step) {
    double c = 0.0;
    for (double rho = 1.0 + step; rho <= 30.0; rho += step) c = std::max(c, h_hat(t, gamma, 2, rho) * std::exp(rho / 2));
    return c;
  };
  CHECK(c_at(0.25) == doctest::Approx(c_at(0.125)).epsilon(0.01));
  for (double rho = 1e-3; rho <= 1e-2; rho *= 1.25) {
    const double ratio = h_hat(t, gamma, 2, rho) / (std::pow(rho, t - 2) * std::pow(1 + 2 * std::log(1 / rho), -gamma / 2));
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
  }
}

TEST_CASE("fit helpers and export") {
  CHECK(top_half_slope({1, 2, 3, 4, 5, 6}, {10, 0, 1, 3, 5, 7}) == doctest::Approx(2.0));
  // lower = sum of shells c N^a (ln-corrected): the fit recovers a.
  std::vector<int> Ns{16, 32, 64, 128, 256, 512};
  std::vector<double> lower;
  double acc = 1.0;
  for (int N : Ns) {
    acc += std::pow(N, 0.25) / std::pow(1 + std::log1p(4 * pi * pi * N * N), 0.5);
    lower.push_back(acc);
  }
  CHECK(lower_fit_exponent(Ns, lower, 1.0) == doctest::Approx(0.25).epsilon(1e-9));

  SweepCurve c;
  c.N_values = {16, 32, 64};
  c.upper = {1.0, 1.1, 1.05};
  c.lower = {0.1, 0.2, 0.3};
  c.verdict.regime = Regime::case2;
  c.verdict.upper_band_ratio = 1.1;
  c.verdict.pass = true;
  std::ostringstream csv;
  write_sweep_csv(csv, c);
  CHECK(csv.str().rfind("N,upper,lower\n16,1,0.10000000000000001\n", 0) == 0);
  const auto j = nlohmann::json::parse(sweep_verdict_json(c));
  CHECK(j["regime"] == "case2");
  CHECK(j["pass"] == true);
  CHECK(j.size() == 4);
}
