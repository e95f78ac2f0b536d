#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "hlab/error.hpp"
#include "hlab/fourier_calculus.hpp"
#include "hlab/littlewood_paley.hpp"
#include "hlab/lorentz.hpp"
#include "hlab/multiplier_op.hpp"
#include "hlab/sharpness.hpp"
#include "hlab/summation.hpp"
#include "suite.hpp"

namespace hlab {

namespace {

using suite::relative_change;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Context {
  const Scenario& sc;
  ExperimentReport rep;

  explicit Context(const Scenario& s) : sc(s) {
    rep.scenario = s;
    rep.provenance = {{"generator", "hlab-splitmix-v1"}, {"field_core", "1.0"},   {"lorentz", "1.0"},
                      {"fourier_calculus", "1.0"},       {"littlewood_paley", "1.0"}, {"multiplier_op", "1.0"},
                      {"sharpness", "1.0"},              {"lab_cli", "1.0"}};
  }
  void env(const std::string& k, const std::string& v) { rep.environment.emplace_back(k, v); }
  void env(const std::string& k, double v) { env(k, num(v)); }
  void add(Metric m) { rep.metrics.push_back(std::move(m)); }
  std::string dump_dir() const { return sc.text("dump_dir", ""); }
};

double lp_norm(const SampledField& f, double p) {
  CompensatedSum acc;
  for (const auto& z : f.values()) acc.add(std::pow(std::abs(z), p));
  return std::pow(acc.value() * f.grid().cell_volume(), 1.0 / p);
}

// Random symbol on the joint grid vanishing outside |xi| <= radius.
MultiplierSymbol sampled_symbol(const Grid& big, double radius, const CounterRng& rng) {
  SampledField v(big, Space::frequency);
  for (std::size_t i = 0; i < big.size(); ++i) {
    const auto xi = freq_point(big, i);
    v[i] = rng.complex_normal(i) * plateau(norm_of(std::span<const double>(xi.data(), big.dim())), -1.0, 0.0,
                                           0.8 * radius, radius);
  }
  return MultiplierSymbol::from_values(2, 1, std::move(v), SupportHint{0.0, radius});
}

std::vector<SampledField> safe_inputs(const Grid& g, const CounterRng& rng, int m) {
  std::vector<SampledField> fs;
  for (int j = 0; j < m; ++j) fs.push_back(band_limited_field(g, rng.child(j), alias_safe_band(g, m) * 0.999, false));
  return fs;
}

// ---------------------------------------------------------------- scenarios

void verify_core(Context& c) {
  const int M = c.sc.integer("grid_m", 32);
  const double L = c.sc.number("half_width", 3.0);
  const int count = c.sc.integer("instances", 20);
  const Grid g = make_grid(1, L, M);
  c.env("grid_m", M);
  c.env("half_width", L);
  c.env("m", 2);
  c.env("n", 1);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const CounterRng rng(c.sc.seed, 100 + i);
    const MultiplierSymbol sigma = sampled_symbol(g.with_dim(2), 0.9 * g.nyquist(), rng.child(0));
    const auto fs = safe_inputs(g, rng.child(1), 2);
    const SampledField spectral = hlab::apply(sigma, fs).output;
    const SampledField direct = apply_direct(sigma, fs).output;
    double diff = 0.0;
    for (std::size_t x = 0; x < spectral.size(); ++x) diff = std::max(diff, std::abs(spectral[x] - direct[x]));
    worst = std::max(worst, diff / max_abs(direct));
    if (i == 0 && !c.dump_dir().empty()) write_field_file(c.dump_dir() + "/verify_core_output.hlab", spectral);
  }
  c.add(metric_le("apply_vs_direct_relative", worst, 1e-8));
}

void verify_lorentz(Context& c) {
  const Grid g = make_grid(1, 8.0, 64);
  const std::size_t cells = 13;
  SampledField ind(g, Space::physical);
  for (std::size_t i = 0; i < cells; ++i) ind[i] = 1.0;
  const double measure = cells * g.spacing();
  c.env("indicator_measure", measure);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 4.0}) {
    for (double q : {2.0 / 3.0, 1.0, kInf}) {
      const double expect = (std::isinf(q) ? 1.0 : std::pow(p / q, 1.0 / q)) * std::pow(measure, 1.0 / p);
      worst = std::max(worst, relative_change(expect, lorentz_norm(ind, {p, q})));
    }
  }
  c.add(metric_le("indicator_closed_form_relative", worst, 1e-10));

  const Grid g2 = make_grid(2, 2.0, 32);
  double worst_pp = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SampledField f = white_noise_field(g2, CounterRng(c.sc.seed, 200 + i), false);
    const double p = 1.0 + 0.05 * (i % 40);
    worst_pp = std::max(worst_pp, relative_change(lp_norm(f, p), lorentz_norm(f, {p, p})));
  }
  c.add(metric_le("lpp_equals_lp_relative", worst_pp, 1e-12));
}

void verify_lemmas(Context& c) {
  const std::uint64_t seed = c.sc.seed;
  const int n_const = c.sc.integer("instances", 200);
  const double slack = 1.0 + 1e-6;
  c.env("constant_one_instances", n_const);
  c.add(metric_le("young_max_ratio", suite::young(seed, n_const).max_ratio, slack));
  c.add(metric_le("hausdorff_young_max_ratio", suite::hausdorff_young(seed, n_const).max_ratio, slack));
  c.add(metric_le("holder_max_ratio", suite::holder(seed, n_const).max_ratio, slack));

  // Bounded-ratio statements: max at M against max at 2M.
  const double a = suite::kato_ponce_ratio(seed, 128, 100), b = suite::kato_ponce_ratio(seed, 256, 100);
  c.add(metric_finite("product_ratio_M128", a));
  c.add(metric_le("product_ratio_refinement", relative_change(a, b), 0.10));

  const auto r1 = suite::shifted_maximal_ratios(seed, 256, 10, -3, 3);
  const auto r2 = suite::shifted_maximal_ratios(seed, 512, 10, -3, 3);
  double shift_change = 0.0;
  for (std::size_t k = 0; k < r1.size(); ++k) shift_change = std::max(shift_change, relative_change(r1[k], r2[k]));
  c.add(metric_finite("shifted_maximal_ratio_M256", *std::max_element(r1.begin(), r1.end())));
  c.add(metric_le("shifted_maximal_refinement", shift_change, 0.15));

  const double d1 = suite::domination_ratio(seed, 128, 10), d2 = suite::domination_ratio(seed, 256, 10);
  c.add(metric_finite("domination_ratio_M128", d1));
  c.add(metric_le("domination_refinement", relative_change(d1, d2), 0.15));

  struct Spq {
    double s, p, q;
  };
  for (const Spq e : {Spq{0.8, 2.0, 1.0}, Spq{1.2, 3.0, 2.0}}) {
    const double x1 = suite::coordinate_map_ratio(seed, 64, 10, e.s, e.p, e.q);
    const double x2 = suite::coordinate_map_ratio(seed, 128, 10, e.s, e.p, e.q);
    std::ostringstream os;
    os << "coordinate_map_s" << e.s << "_p" << e.p << "_q" << e.q;
    const std::string tag = os.str();
    c.add(metric_finite(tag + "_M64", x1));
    c.add(metric_le(tag + "_refinement", relative_change(x1, x2), 0.15));
  }
  for (int h : {1, 2}) {
    const double x1 = suite::marshall_ratio(seed, 256, 10, h), x2 = suite::marshall_ratio(seed, 512, 10, h);
    c.add(metric_finite("band_sum_h" + std::to_string(h) + "_M256", x1));
    c.add(metric_le("band_sum_h" + std::to_string(h) + "_refinement", relative_change(x1, x2), 0.15));
  }
  c.add(metric_finite("vector_maximal_ratio", suite::fefferman_stein_ratio(seed, 128, 10)));
}

void decompose_check(Context& c) {
  const int M = c.sc.integer("grid_m", 64);
  const double L = c.sc.number("half_width", 4.0);
  const DyadicWindow win{c.sc.integer("k_min", -3), c.sc.integer("k_max", 2)};
  const int count = c.sc.integer("instances", 50);
  const Grid g = make_grid(2, L, M);
  const LPFamily fam = build_family(2, 1, win, &g);
  c.env("grid_m", M);
  c.env("half_width", L);
  c.env("octaves", win.octaves());

  double part = fam.partition_defect();
  const double lo = std::ldexp(1.0, win.k_min + 1), hi = std::ldexp(1.0, win.k_max - 1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = freq_point(g, i);
    const double r = norm_of(std::span<const double>(xi.data(), 2));
    if (r >= lo && r <= hi) part = std::max(part, std::abs(fam.partition_sum(r) - 1.0));
  }
  c.add(metric_le("partition_defect", part, 1e-9));

  double recon = 0.0, split = 0.0;
  for (int i = 0; i < count; ++i) {
    const MultiplierSymbol sigma =
        suite::random_smooth_symbol(g, 2, 1, CounterRng(c.sc.seed, 300 + i), 0.3, 0.4, 1.5, 1.9);
    const SymbolDecomposition dec = decompose(sigma, fam);
    for (std::size_t x = 0; x < g.size(); ++x) {
      recon = std::max(recon, std::abs(dec.parts[0].at(x) + dec.parts[1].at(x) - sigma.at(x)));
      split = std::max(split, std::abs(dec.low.at(x) + dec.high.at(x) - dec.parts[0].at(x)));
    }
  }
  c.add(metric_le("reconstruction_defect", recon, 1e-9));
  c.add(metric_le("low_high_defect", split, 1e-9));
}

// Max over instances of |T f|_{L^p} / (sup_k |sigma(2^k .) Psi|_{L_s^{mn/s,1}} prod |f_j|_{L^{p_j}}).
// smoke = true: sigma is the bare plateau and the inputs are wide Gaussians.
double theorem1_max_ratio(std::uint64_t seed, int M, double L, int count, double s, double p1, double p2, double p,
                          bool smoke) {
  const Grid g = make_grid(1, L, M);
  const Grid joint = g.with_dim(2);
  const double mn = 2.0;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const CounterRng rng(seed, 400 + i);
    const MultiplierSymbol sigma =
        smoke ? MultiplierSymbol::from_closed_form(
                    2, 1, joint, [](std::span<const double> xi) { return complex(plateau(norm_of(xi), 0.2, 0.3, 1.2, 1.4)); })
              : suite::random_smooth_symbol(joint, 2, 1, rng.child(0), 0.2, 0.3, 1.2, 1.4, false);
    double sup = 0.0;
    for (int k = -3; k <= 1; ++k) sup = std::max(sup, dilated_symbol_norm(sigma, k, psi_profile, {s, mn / s, 1.0}));
    std::vector<SampledField> fs;
    if (smoke) {
      for (double w : {4.0, 5.0}) {
        fs.push_back(SampledField::sample(g, Space::physical, [w](std::span<const double> x) {
          return complex(std::exp(-std::numbers::pi * x[0] * x[0] / (w * w)));
        }));
      }
    } else {
      fs = {band_limited_field(g, rng.child(1), 0.999, false), band_limited_field(g, rng.child(2), 0.999, false)};
    }
    const SampledField out = hlab::apply(sigma, fs).output;
    worst = std::max(worst, lp_norm(out, p) / (sup * lp_norm(fs[0], p1) * lp_norm(fs[1], p2)));
  }
  return worst;
}

void theorem1_ratio(Context& c) {
  const int M = c.sc.integer("grid_m", 256);
  const double L = c.sc.number("half_width", 16.0);
  const int count = c.sc.integer("instances", 20);
  const double s = c.sc.number("s", 1.3), p1 = c.sc.number("p1", 4.0), p2 = c.sc.number("p2", 4.0);
  const double p = 1.0 / (1.0 / p1 + 1.0 / p2);
  const bool smoke = c.sc.text("inputs", "random") == "gaussian";
  c.env("inputs", smoke ? "gaussian" : "random");
  c.env("grid_m", M);
  c.env("half_width", L);
  c.env("s", s);
  c.env("p", p);
  const double a = theorem1_max_ratio(c.sc.seed, M, L, count, s, p1, p2, p, smoke);
  const double b = theorem1_max_ratio(c.sc.seed, 2 * M, L, count, s, p1, p2, p, smoke);
  c.add(metric_finite("max_ratio_M", a));
  c.add(metric_finite("max_ratio_2M", b));
  c.add(metric_le("refinement_change", relative_change(a, b), 0.10));
}

void lemma31_check(Context& c) {
  const int M = c.sc.integer("grid_m", 128);
  const int count = c.sc.integer("instances", 10);
  c.env("grid_m", M);
  const double a = suite::domination_ratio(c.sc.seed, M, count);
  const double b = suite::domination_ratio(c.sc.seed, 2 * M, count);
  c.add(metric_finite("max_ratio_M", a));
  c.add(metric_finite("max_ratio_2M", b));
  c.add(metric_le("refinement_change", relative_change(a, b), 0.15));
}

void transpose_check(Context& c) {
  const int M = c.sc.integer("grid_m", 64);
  const double L = c.sc.number("half_width", 3.0);
  const int count = c.sc.integer("instances", 20);
  const Grid g = make_grid(1, L, M);
  const Grid joint = g.with_dim(2);
  c.env("grid_m", M);
  c.env("half_width", L);
  double defect = 0.0;
  for (int i = 0; i < count; ++i) {
    const CounterRng rng(c.sc.seed, 500 + i);
    const MultiplierSymbol sigma = sampled_symbol(joint, 0.75 * joint.nyquist(), rng.child(0));
    const auto fs = safe_inputs(g, rng.child(1), 2);
    const SampledField h = band_limited_field(g, rng.child(2), alias_safe_band(g, 2) * 0.999, false);
    for (int j : {1, 2}) {
      const complex lhs = pairing(hlab::apply(transpose_symbol(sigma, j), fs).output, h);
      std::vector<SampledField> swapped = fs;
      swapped[j - 1] = h;
      const complex rhs = pairing(hlab::apply(sigma, swapped).output, fs[j - 1]);
      defect = std::max(defect, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  c.add(metric_le("duality_defect", defect, 1e-8));

  // Symbol-norm transfer to the transposes, on a smooth closed-form symbol.
  const Grid big = make_grid(2, 16.0, 256);
  const MultiplierSymbol sigma = suite::random_smooth_symbol(big, 2, 1, CounterRng(c.sc.seed, 550), 0.2, 0.3, 1.2, 1.4, false);
  double base = 0.0;
  for (int k = -2; k <= 1; ++k) base = std::max(base, dilated_symbol_norm(sigma, k, psi_profile, {1.3, 2.0 / 1.3, 1.0}));
  for (int j : {1, 2}) {
    const MultiplierSymbol t = transpose_symbol(sigma, j);
    double sup = 0.0;
    for (int k = -2; k <= 1; ++k) sup = std::max(sup, dilated_symbol_norm(t, k, psi_profile, {1.3, 2.0 / 1.3, 1.0}));
    c.add(metric_finite("transpose_symbol_norm_ratio_j" + std::to_string(j), sup / base));
  }
  const double x = suite::coordinate_map_ratio(c.sc.seed, 64, 10, 1.2, 3.0, 2.0);
  c.add(metric_finite("coordinate_map_ratio", x));
}

void emit_sweep(Context& c, const std::string& tag, const SweepCurve& curve) {
  const SweepVerdict& v = curve.verdict;
  c.add(metric_le(tag + "_upper_band_ratio", v.upper_band_ratio, 1.3));
  if (v.regime == Regime::case1) {
    c.add(metric_le(tag + "_fit_exponent_relative_error", std::abs(v.lower_fit_exponent - 0.1) / 0.1, 0.3));
    c.add(metric_ge(tag + "_lower_nondecreasing", v.lower_monotone ? 1.0 : 0.0, 1.0));
  } else if (v.regime == Regime::case2) {
    c.add(metric_ge(tag + "_lower_strictly_increasing", v.lower_strict ? 1.0 : 0.0, 1.0));
    c.add(metric_ge(tag + "_lower_slope", v.lower_fit_exponent, 1e-12));
  }
  if (!c.dump_dir().empty()) {
    std::ofstream out(c.dump_dir() + "/" + tag + "_curve.csv");
    write_sweep_csv(out, curve);
    std::ofstream js(c.dump_dir() + "/" + tag + "_verdict.json");
    js << sweep_verdict_json(curve) << "\n";
  }
}

void phase(Context& c) {
  const int d = 2;
  const double t_factors[] = {0.7, 0.9, 1.0, 1.1, 1.3};
  const double g_factors[] = {0.5, 1.5, 3.0};
  int bad1 = 0, bad2 = 0, total1 = 0, total2 = 0;
  for (double r : {1.0, 2.0, 4.0}) {
    for (double tf : t_factors) {
      for (double gf : g_factors) {
        const double t = tf * d / r, gamma = gf * 2.0 / r;
        bad1 += classify_h_lr(t, gamma, r, d).convergent != predicted_h_lr(t, gamma, r, d);
        ++total1;
      }
    }
  }
  const double q = 2.0;
  for (double r : {1.5, 2.0, 4.0}) {
    for (double tf : t_factors) {
      for (double gf : g_factors) {
        const double t = tf * (d - d / r), gamma = gf * 2.0 / q;
        bad2 += classify_h_hat_lrq(t, gamma, r, q, d).convergent != predicted_h_hat_lrq(t, gamma, r, q, d);
        ++total2;
      }
    }
  }
  c.env("kernel_points", total1);
  c.env("fourier_points", total2);
  c.add(metric_le("kernel_misclassified", bad1, 0.0));
  c.add(metric_le("fourier_misclassified", bad2, 0.0));
}

void sharpness_sweep(Context& c) {
  const std::string preset = c.sc.text("preset", "case1");
  c.env("preset", preset);
  std::vector<int> Ns;
  for (int N = c.sc.integer("n_min", 16); N <= c.sc.integer("n_max", 1024); N *= 2) Ns.push_back(N);
  c.env("N_count", static_cast<double>(Ns.size()));
  SweepOptions opts;
  opts.threads = static_cast<unsigned>(c.sc.integer("threads", 0));
  if (preset == "phase") {
    phase(c);
    return;
  }
  if (preset == "case1") {
    emit_sweep(c, "case1", sweep(case1_preset(), Ns, opts));
  } else if (preset == "case2") {
    emit_sweep(c, "case2", sweep(case2_preset(), Ns, opts));
    const SweepCurve ctl = sweep(control_preset(), Ns, opts);
    c.add(metric_le("control_last_increment", ctl.verdict.last_increment, 0.02));
    emit_sweep(c, "control", ctl);
  } else {
    throw ValidationError("sharpness-sweep: unknown preset '" + preset + "' (case1, case2, phase)");
  }
}

// max over breakpoints of 1 - lambda - sum x + sum min(lambda l, x_j); >= 0 iff in the closed hull.
double hull_margin(const std::vector<double>& x, double l) {
  std::vector<double> lambdas{0.0, 1.0};
  double sum = 0.0;
  for (double v : x) {
    sum += v;
    if (v / l < 1.0) lambdas.push_back(v / l);
  }
  double best = -kInf;
  for (double lam : lambdas) {
    double f = 1.0 - lam - sum;
    for (double v : x) f += std::min(lam * l, v);
    best = std::max(best, f);
  }
  return best;
}

void region(Context& c) {
  const int count = c.sc.integer("points", 10000);
  const double s = c.sc.number("s", 1.2);
  const double l = s / 2.0;
  c.env("m", 2);
  c.env("s", s);
  const CounterRng rng(c.sc.seed, 600);
  int disagreements = 0, banded = 0;
  for (int i = 0; i < count; ++i) {
    const ExponentRegion reg{2, 1, s, {rng.uniform(2 * i), rng.uniform(2 * i + 1)}};
    const double margin = hull_margin(reg.point, l);
    if (std::abs(margin) <= 1e-9) {
      ++banded;
      continue;
    }
    disagreements += region_check(reg).inside_hull != (margin > 0);
  }
  c.env("boundary_band_points", banded);
  c.add(metric_le("hull_disagreements", disagreements, 0.0));
  auto archetype = [&](double a, double b, bool q, bool p, bool h) {
    const RegionMembership r = region_check({2, 1, s, {a, b}});
    return r.inside_Q == q && r.inside_P == p && r.inside_hull == h;
  };
  const bool ok = archetype(0.5, 0.5, true, false, true) && archetype(0.3, 0.4, true, true, true) &&
                  archetype(0.9, 0.15, false, false, true);
  c.add(metric_ge("archetypes_match", ok ? 1.0 : 0.0, 1.0));
}

const std::map<std::string, std::function<void(Context&)>>& table() {
  static const std::map<std::string, std::function<void(Context&)>> t{
      {"verify-core", verify_core},         {"verify-lorentz", verify_lorentz}, {"verify-lemmas", verify_lemmas},
      {"decompose-check", decompose_check}, {"theorem1-ratio", theorem1_ratio}, {"lemma31-check", lemma31_check},
      {"transpose-check", transpose_check}, {"sharpness-sweep", sharpness_sweep}, {"region-check", region}};
  return t;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"verify-core",    "verify-lorentz",  "verify-lemmas",
                                              "decompose-check", "theorem1-ratio", "lemma31-check",
                                              "transpose-check", "sharpness-sweep", "region-check"};
  return names;
}

ExperimentReport run(const Scenario& scenario) {
  const auto it = table().find(scenario.name);
  if (it == table().end()) throw ValidationError("unknown scenario '" + scenario.name + "'");
  Context c(scenario);
  c.env("seed", std::to_string(scenario.seed));
  it->second(c);
  return c.rep;
}

}  // namespace hlab
