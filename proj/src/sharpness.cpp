#include "hlab/sharpness.hpp"

#include <boost/math/interpolators/barycentric_rational.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <atomic>
#include <future>
#include <memory>
#include <thread>
#include <nlohmann/json.hpp>
#include <ostream>

#include "hlab/fourier_calculus.hpp"
#include "hlab/multiplier_op.hpp"
#include "hlab/special.hpp"

namespace hlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Gamma-hat annulus.
constexpr double kGammaInner = 0.99;
constexpr double kGammaOuter = 1.01;

// Radial table for the windowed kernel transform.
constexpr double kTableLo = 0.98;
constexpr double kTableHi = 1.02;
constexpr int kTableNodes = 81;

double radius_of(const Grid& grid, const Index& idx) {
  double r2 = 0.0;
  for (int a = 0; a < grid.dim(); ++a) r2 += grid.coord(idx[a]) * grid.coord(idx[a]);
  return std::sqrt(r2);
}

double freq_radius(const Grid& grid, std::size_t i) {
  const auto xi = freq_point(grid, i);
  return norm_of(std::span<const double>(xi.data(), grid.dim()));
}

void require_annulus_resolved(const Grid& grid) {
  const double cells = (kGammaOuter - kGammaInner) / grid.freq_spacing();
  if (cells < 8.0) {
    throw ValidationError("grid puts " + std::to_string(cells) +
                          " frequency cells across the Gamma annulus, need >= 8");
  }
  require(kGammaOuter < grid.nyquist(), "Gamma annulus exceeds the grid Nyquist frequency");
}

// ln(1 + 4 pi^2 e^{2u}) for any u.
double log_one_plus_a(double u) {
  const double la = std::log(4.0 * kPi * kPi) + 2.0 * u;
  return la > 0.0 ? la + std::log1p(std::exp(-la)) : std::log1p(std::exp(la));
}

PhaseResult classify_shells(const std::function<double(double)>& log_integrand) {
  // Shells [0, 1], [1, 2], [2, 4], ..., [1024, 2048] in log-radius.
  std::vector<double> shells;
  shells.push_back(log_integrate(log_integrand, 0.0, 1.0, 8));
  for (int j = 0; j <= 10; ++j) shells.push_back(log_integrate(log_integrand, std::ldexp(1.0, j), std::ldexp(1.0, j + 1), 16));
  PhaseResult res;
  res.log_last_shell = shells.back();
  res.log_prev_shell = shells[shells.size() - 2];
  res.convergent = res.log_last_shell < res.log_prev_shell;
  return res;
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::case1: return "case1";
    case Regime::case2: return "case2";
    case Regime::control: return "control";
  }
  return "unknown";
}

double SharpnessParams::p() const {
  double inv = 0.0;
  for (double pj : p_js) inv += 1.0 / pj;
  return 1.0 / inv;
}

Regime SharpnessParams::regime() const {
  require(m >= 1 && n >= 1 && mn() <= kMaxDim, "sharpness needs 1 <= mn <= 4");
  require(static_cast<int>(p_js.size()) == m, "need one p_j per slot");
  for (double pj : p_js) require(pj >= 1.0 && std::isfinite(pj), "p_j must be finite and >= 1");
  require(s > 0.0 && s < mn(), "need 0 < s < mn");
  require(r > 0.0 && q > 0.0 && t > 0.0 && gamma > 0.0, "r, q, t, gamma must be positive");
  const double d = mn();
  const double crit = d / s;
  if (t > d) return Regime::control;
  if (r < crit * (1.0 - 1e-12)) {
    const double lo = d - (d / r - s);
    require(t > lo && t < d, "case1 needs mn - (mn/r - s) < t < mn");
    return Regime::case1;
  }
  if (std::abs(r - crit) <= 1e-12 * crit) {
    require(q > 1.0, "case2 needs q > 1");
    require(std::abs(t - d) <= 1e-12, "case2 needs t = mn");
    require(gamma > 2.0 / q && gamma <= 2.0, "case2 needs 2/q < gamma <= 2");
    return Regime::case2;
  }
  throw ValidationError("r > mn/s matches no sharpness regime");
}

SharpnessParams case1_preset() { return {}; }

SharpnessParams case2_preset() {
  SharpnessParams p;
  p.r = 2.0 / 1.2;
  p.t = 2.0;
  p.gamma = 1.5;
  return p;
}

SharpnessParams control_preset() {
  SharpnessParams p = case2_preset();
  p.t = 2.3;
  return p;
}

SharpnessParams preset_by_name(const std::string& name) {
  if (name == "case1") return case1_preset();
  if (name == "case2") return case2_preset();
  if (name == "control") return control_preset();
  throw ValidationError("unknown sharpness preset '" + name + "'");
}

double eta_profile(double r) { return 1.0 - smooth_step(2.0 * r - 1.0); }

SampledField h_kernel(double t, double gamma, const Grid& grid) {
  require(t > 0.0 && gamma > 0.0, "h_kernel needs t, gamma > 0");
  SampledField out(grid, Space::physical);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = h_value(t, gamma, radius_of(grid, grid.unravel(i)));
  return out;
}

SampledField window(int N, const Grid& grid) {
  require(N >= 1, "window needs N >= 1");
  if (N > grid.half_width()) {
    throw ValidationError("window radius " + std::to_string(N) + " exceeds the half-width");
  }
  SampledField out(grid, Space::physical);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = eta_profile(radius_of(grid, grid.unravel(i)) / N);
  return out;
}

double windowed_kernel_hat(double t, double gamma, int d, int N, double rho) {
  return radial_fourier([&](double r) { return h_value(t, gamma, r) * eta_profile(r / N); }, d, rho, N, 0.5);
}

MultiplierSymbol counterexample_symbol(const SharpnessParams& params, int N, const Grid& grid) {
  params.regime();
  require(grid.dim() == params.mn(), "symbol grid must have dimension mn");
  require(N >= 1, "N must be >= 1");
  require_annulus_resolved(grid);
  std::vector<double> rho(kTableNodes), val(kTableNodes);
  for (int i = 0; i < kTableNodes; ++i) {
    rho[i] = kTableLo + (kTableHi - kTableLo) * i / (kTableNodes - 1);
    val[i] = windowed_kernel_hat(params.t, params.gamma, params.mn(), N, rho[i]);
  }
  auto table = std::make_shared<boost::math::barycentric_rational<double>>(std::move(rho), std::move(val), 5);
  SymbolFn fn = [table](std::span<const double> xi) -> complex {
    const double r = norm_of(xi);
    const double g = gamma_profile(r);
    if (g == 0.0) return 0.0;
    return (*table)(r) * g;
  };
  return MultiplierSymbol::from_closed_form(params.m, params.n, grid, std::move(fn), SupportHint{kGammaInner, kGammaOuter});
}

MultiplierSymbol counterexample_symbol_from_grid(const SharpnessParams& params, int N, const Grid& grid) {
  params.regime();
  require(grid.dim() == params.mn(), "symbol grid must have dimension mn");
  require_annulus_resolved(grid);
  SampledField F = forward_transform(pointwise_product(h_kernel(params.t, params.gamma, grid), window(N, grid)));
  for (std::size_t i = 0; i < grid.size(); ++i) F[i] *= gamma_profile(freq_radius(grid, i));
  return MultiplierSymbol::from_values(params.m, params.n, std::move(F), SupportHint{kGammaInner, kGammaOuter});
}

double theta_hat_profile(double r, int m) {
  const double a = 0.999 / std::sqrt(m);
  const double b = 1.001 / std::sqrt(m);
  if (r <= a || r >= b) return 0.0;
  const double v = (2.0 * r - a - b) / (b - a);
  return std::exp(1.0 - 1.0 / (1.0 - v * v));
}

std::vector<SampledField> test_functions(double epsilon, const std::vector<double>& p_js, const Grid& grid, int m) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  require(static_cast<int>(p_js.size()) == m, "need one p_j per slot");
  if (epsilon < 8.0 * grid.spacing() / grid.half_width()) {
    throw ValidationError("epsilon below the resolvable guard 8h/L");
  }
  const double width = epsilon * 0.002 / std::sqrt(m);
  if (width < 8.0 * grid.freq_spacing()) {
    throw ValidationError("theta-hat shell at this epsilon spans fewer than 8 frequency cells");
  }
  require(epsilon * 1.001 / std::sqrt(m) < grid.nyquist(), "theta-hat shell beyond Nyquist");
  const int n = grid.dim();
  std::vector<SampledField> out;
  for (double pj : p_js) {
    const double amp = std::pow(epsilon, n / pj - n);
    SampledField F(grid, Space::frequency);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = theta_hat_profile(freq_radius(grid, i) / epsilon, m);
      if (v != 0.0) F[i] = amp * v;
    }
    SampledField f = inverse_transform(F);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = f[i].real();
    out.push_back(std::move(f));
  }
  return out;
}

double windowed_kernel_l1(double t, double gamma, int d, int N, int N_max) {
  require(N >= 1 && N <= N_max, "need 1 <= N <= N_max");
  using G = boost::math::quadrature::gauss<double, 16>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  // Plain left-to-right sum of nonnegative terms: rounding is monotone, so the
  // result is exactly nondecreasing in N.
  double acc = 0.0;
  auto panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int sgn : {-1, 1}) {
        if (x[i] == 0.0 && sgn > 0) continue;
        const double r = mid + sgn * half * x[i];
        const double e = eta_profile(r / N);
        if (e == 0.0) continue;
        acc += half * w[i] * h_value(t, gamma, r) * e * std::pow(r, d - 1);
      }
    }
  };
  for (int p = 0; p < 32; ++p) panel(p / 32.0, (p + 1) / 32.0);
  for (double a = 1.0; a < N_max; a *= 2.0) {
    for (int p = 0; p < 64; ++p) panel(a + a * p / 64.0, a + a * (p + 1) / 64.0);
  }
  return sphere_area(d) * acc;
}

double top_half_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "slope fit needs >= 2 points");
  const std::size_t first = x.size() >= 4 ? x.size() / 2 : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(x.size() - first);
  for (std::size_t i = first; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

double lower_fit_exponent(const std::vector<int>& N_values, const std::vector<double>& lower, double gamma) {
  require(N_values.size() == lower.size() && N_values.size() >= 3, "fit needs >= 3 points");
  std::vector<double> x, y;
  for (std::size_t i = 1; i < lower.size(); ++i) {
    const double diff = lower[i] - lower[i - 1];
    if (diff <= 0.0) continue;
    const double N = N_values[i];
    const double corr = std::pow(1.0 + std::log1p(4.0 * kPi * kPi * N * N), 0.5 * gamma);
    x.push_back(std::log(N));
    y.push_back(std::log(diff * corr));
  }
  require(x.size() >= 2, "lower curve too flat to fit");
  return top_half_slope(x, y);
}

SweepCurve sweep(const SharpnessParams& params, const std::vector<int>& N_values, const SweepOptions& opts) {
  const Regime regime = params.regime();
  require(N_values.size() >= 3, "sweep needs >= 3 values of N");
  for (std::size_t i = 1; i < N_values.size(); ++i) require(N_values[i] > N_values[i - 1], "N values must ascend");
  const int d = params.mn();
  const Grid grid = make_grid(d, opts.freq_points / (4.0 * opts.freq_half_width), opts.freq_points);
  const SobolevIndex idx{params.s, params.r, params.q};

  SweepCurve curve;
  curve.N_values = N_values;
  curve.upper.assign(N_values.size(), 0.0);
  curve.lower.assign(N_values.size(), 0.0);
  // Each N is independent; results land in fixed slots, so the curve does not
  // depend on scheduling.
  auto point = [&](std::size_t i) {
    const int N = N_values[i];
    const MultiplierSymbol sigma = counterexample_symbol(params, N, grid);
    double up = 0.0;
    for (int k = -1; k <= 1; ++k) up = std::max(up, dilated_symbol_norm(sigma, k, psi_profile, idx));
    curve.upper[i] = up;
    curve.lower[i] = windowed_kernel_l1(params.t, params.gamma, d, N, N_values.back());
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(opts.threads > 0 ? opts.threads : std::thread::hardware_concurrency(), N_values.size()));
  std::vector<std::future<void>> jobs;
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < N_values.size(); i = next++) point(i);
    }));
  }
  for (auto& j : jobs) j.get();

  SweepVerdict& v = curve.verdict;
  v.regime = regime;
  const auto [umin, umax] = std::minmax_element(curve.upper.begin(), curve.upper.end());
  v.upper_band_ratio = *umax / *umin;
  v.lower_monotone = v.lower_strict = true;
  for (std::size_t i = 1; i < curve.lower.size(); ++i) {
    v.lower_monotone = v.lower_monotone && curve.lower[i] >= curve.lower[i - 1];
    v.lower_strict = v.lower_strict && curve.lower[i] > curve.lower[i - 1];
  }
  const std::size_t last = curve.lower.size() - 1;
  v.last_increment = (curve.lower[last] - curve.lower[last - 1]) / curve.lower[last];
  const bool upper_ok = v.upper_band_ratio <= opts.upper_band;
  switch (regime) {
    case Regime::case1: {
      v.lower_fit_exponent = lower_fit_exponent(N_values, curve.lower, params.gamma);
      const double target = d - params.t;
      v.pass = upper_ok && v.lower_monotone && std::abs(v.lower_fit_exponent - target) <= opts.fit_tolerance * target;
      break;
    }
    case Regime::case2: {
      std::vector<double> x;
      for (int N : N_values) x.push_back(std::log(static_cast<double>(N)));
      v.lower_fit_exponent = top_half_slope(x, curve.lower);
      v.pass = upper_ok && v.lower_strict && v.lower_fit_exponent > 0.0;
      break;
    }
    case Regime::control:
      v.lower_fit_exponent = lower_fit_exponent(N_values, curve.lower, params.gamma);
      v.pass = v.lower_monotone && v.last_increment <= opts.saturation;
      break;
  }
  return curve;
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
  out << "N,upper,lower\n";
  out.precision(17);
  for (std::size_t i = 0; i < curve.N_values.size(); ++i) {
    out << curve.N_values[i] << ',' << curve.upper[i] << ',' << curve.lower[i] << '\n';
  }
}

std::string sweep_verdict_json(const SweepCurve& curve) {
  nlohmann::ordered_json j;
  j["regime"] = regime_name(curve.verdict.regime);
  j["upper_band_ratio"] = curve.verdict.upper_band_ratio;
  j["lower_fit_exponent"] = curve.verdict.lower_fit_exponent;
  j["pass"] = curve.verdict.pass;
  return j.dump(2);
}

PhaseResult classify_h_lr(double t, double gamma, double r, int d) {
  const double log_area = std::log(sphere_area(d));
  // |x| = e^u, dx = |S| e^{du} du.
  return classify_shells([=](double u) {
    const double la = log_one_plus_a(u);
    const double log_h = -0.5 * t * la - 0.5 * gamma * std::log1p(la);
    return log_area + r * log_h + d * u;
  });
}

PhaseResult classify_h_hat_lrq(double t, double gamma, double r, double q, int d) {
  const double log_vol = std::log(ball_volume(d));
  // rho = e^{-u}; H-hat is radial decreasing, so f*(|B| rho^d) = H-hat(rho) and
  // the L^{r,q} integrand in dt/t becomes d (|B|^{1/r} rho^{d/r} H-hat(rho))^q du.
  return classify_shells([=](double u) {
    return std::log(static_cast<double>(d)) + q * (log_vol / r - d * u / r + log_h_hat_at_log(t, gamma, d, -u));
  });
}

bool predicted_h_lr(double t, double gamma, double r, int d) {
  const double c = d / r;
  return t > c || (t == c && gamma > 2.0 / r);
}

bool predicted_h_hat_lrq(double t, double gamma, double r, double q, int d) {
  const double c = d - d / r;
  return t > c || (t == c && gamma > 2.0 / q);
}

double spectral_identity_defect(const SharpnessParams& params, int N, double epsilon, const Grid& grid,
                                const CounterRng& rng) {
  require(params.n == 1 && grid.dim() == 1, "spectral identity check is one-dimensional per slot");
  const int m = params.m;
  const Grid joint = grid.with_dim(m);
  // theta is a band-limited trig polynomial in y = eps x; sampling it at eps x
  // keeps every frequency on the grid when 1/eps is an integer.
  const double inv = std::round(1.0 / epsilon);
  require(std::abs(inv * epsilon - 1.0) < 1e-12, "1/epsilon must be an integer");
  const double band = alias_safe_band(grid, m);
  std::vector<SampledField> fs;
  for (int j = 0; j < m; ++j) {
    SampledField F = band_limited_spectrum(grid, rng.child(static_cast<std::uint64_t>(j)), band);
    const double amp = std::pow(epsilon, params.n / params.p_js[j]);
    for (std::size_t i = 0; i < F.size(); ++i) F[i] *= amp;
    fs.push_back(inverse_transform(F));
  }
  const SampledField kernel = pointwise_product(h_kernel(params.t, params.gamma, joint), window(N, joint));
  const MultiplierSymbol sym = MultiplierSymbol::from_values(m, 1, forward_transform(kernel));
  const SampledField lhs = hlab::apply(sym, fs).output;

  // Direct periodic sum over y in the joint grid.
  const int M = grid.points();
  const double cell = joint.cell_volume();
  double peak = 0.0, defect = 0.0;
  for (int x = 0; x < M; ++x) {
    complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < joint.size(); ++i) {
      const Index y = joint.unravel(i);
      complex prod = kernel[i];
      for (int j = 0; j < m; ++j) {
        // x - y_j with the grid origin at -L: index x - y_j + M/2.
        const int idx = ((x - y[j] + M / 2) % M + M) % M;
        Index sub{};
        sub[0] = idx;
        prod *= fs[j][grid.ravel(sub)];
      }
      acc += prod;
    }
    acc *= cell;
    Index sub{};
    sub[0] = x;
    const complex got = lhs[grid.ravel(sub)];
    peak = std::max(peak, std::abs(acc));
    defect = std::max(defect, std::abs(got - acc));
  }
  return defect / std::max(peak, 1e-300);
}

}  // namespace hlab
