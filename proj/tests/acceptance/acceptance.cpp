// Acceptance criteria 1-10. `acceptance` runs all; `acceptance N` runs one.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hlab/lab.hpp"
#include "hlab/littlewood_paley.hpp"
#include "hlab/lorentz.hpp"
#include "hlab/multiplier_op.hpp"
#include "hlab/random.hpp"

using namespace hlab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const Metric& metric(const ExperimentReport& r, const std::string& label) {
  for (const Metric& m : r.metrics) {
    if (m.label == label) return m;
  }
  throw std::runtime_error("missing metric " + label);
}

ExperimentReport run_named(const std::string& name, std::map<std::string, std::string> params = {}) {
  Scenario sc;
  sc.name = name;
  sc.params = std::move(params);
  return run(sc);
}

/// Report metrics that failed, or "all metrics pass".
std::string failures(const ExperimentReport& r) {
  std::string s;
  for (const Metric& m : r.metrics) {
    if (!m.verdict) s += (s.empty() ? "" : ", ") + m.label + "=" + fmt("%.4g", m.value);
  }
  return s.empty() ? "all metrics pass" : "failed: " + s;
}

Outcome c1() {
  // apply_direct is a literal nested sum with its own DFT, independent of the FFT path.
  const ExperimentReport r = run_named("verify-core");
  const Metric& m = metric(r, "apply_vs_direct_relative");
  return {m.verdict && m.value <= 1e-8, fmt("max relative |apply - apply_direct| = %.3g over 20 instances", m.value)};
}

Outcome c2() {
  const Grid g = make_grid(1, 8.0, 64);
  SampledField f(g, Space::physical);
  for (int i = 0; i < 21; ++i) f[i] = 1.0;
  const double E = 21 * g.spacing();
  double worst = 0.0;
  for (double p : {1.25, 2.0, 3.5}) {
    for (double q : {0.5, 1.0, 4.0}) {
      const double expect = std::pow(p / q, 1.0 / q) * std::pow(E, 1.0 / p);
      worst = std::max(worst, std::abs(lorentz_norm(f, {p, q}) - expect) / expect);
    }
  }
  const Grid g2 = make_grid(1, 4.0, 256);
  double worst_pp = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SampledField w = white_noise_field(g2, CounterRng(11, i), false);
    const double p = 1.1 + 0.07 * i;
    long double acc = 0.0L;
    for (const auto& z : w.values()) acc += std::pow(static_cast<long double>(std::abs(z)), p);
    const double lp = static_cast<double>(std::pow(acc * g2.cell_volume(), 1.0L / p));
    worst_pp = std::max(worst_pp, std::abs(lorentz_norm(w, {p, p}) - lp) / lp);
  }
  return {worst <= 1e-10 && worst_pp <= 1e-12,
          fmt("indicator closed form rel err %.3g (9 pairs), L^{p,p} vs L^p rel err %.3g (50 fields)", worst, worst_pp)};
}

Outcome c3() {
  const ExperimentReport r = run_named("decompose-check");
  return {r.pass(), fmt("partition %.3g, reconstruction %.3g, low+high %.3g on 50 symbols, 6 octaves, M=64^2",
                        metric(r, "partition_defect").value, metric(r, "reconstruction_defect").value,
                        metric(r, "low_high_defect").value)};
}

Outcome c4() {
  const ExperimentReport r = run_named("verify-lemmas");
  return {r.pass(), fmt("Young %.4f, Hausdorff-Young %.4f, Holder %.4f (need <= 1+1e-6); ",
                        metric(r, "young_max_ratio").value, metric(r, "hausdorff_young_max_ratio").value,
                        metric(r, "holder_max_ratio").value) +
                        failures(r)};
}

Outcome c5() {
  const ExperimentReport r = run_named("transpose-check");
  const Metric& m = metric(r, "duality_defect");
  return {m.verdict, fmt("max duality defect %.3g over 20 instances, j = 1, 2", m.value)};
}

Outcome c6() {
  const ExperimentReport r = run_named("theorem1-ratio");
  return {r.pass(), fmt("max ratio %.6g (M=256), %.6g (M=512), change %.3g", metric(r, "max_ratio_M").value,
                        metric(r, "max_ratio_2M").value, metric(r, "refinement_change").value)};
}

Outcome c7() {
  const ExperimentReport r = run_named("sharpness-sweep", {{"preset", "case1"}});
  return {r.pass(), fmt("upper band %.6f, fit exponent rel err %.3f, nondecreasing %.0f",
                        metric(r, "case1_upper_band_ratio").value,
                        metric(r, "case1_fit_exponent_relative_error").value,
                        metric(r, "case1_lower_nondecreasing").value)};
}

Outcome c8() {
  const ExperimentReport r = run_named("sharpness-sweep", {{"preset", "case2"}});
  return {r.pass(), fmt("upper band %.6f, ln N slope %.4f, control last increment %.4f",
                        metric(r, "case2_upper_band_ratio").value, metric(r, "case2_lower_slope").value,
                        metric(r, "control_last_increment").value)};
}

Outcome c9() {
  const ExperimentReport r = run_named("sharpness-sweep", {{"preset", "phase"}});
  return {r.pass(), fmt("misclassified: kernel %.0f / 45, Fourier side %.0f / 45",
                        metric(r, "kernel_misclassified").value, metric(r, "fourier_misclassified").value)};
}

// x in hull(cl Q_l, cl P) iff some lambda in [0,1] has a in [0,l]^m, b >= 0, sum b <= 1 with
// x = lambda a + (1 - lambda) b. Sampling lambda densely and taking a_j = min(l, x_j / lambda).
double sampled_margin(double x1, double x2, double l) {
  double best = 1.0 - x1 - x2;
  for (int i = 1; i <= 20000; ++i) {
    const double lam = i / 20000.0;
    best = std::max(best, 1.0 - lam - x1 - x2 + std::min(lam * l, x1) + std::min(lam * l, x2));
  }
  return best;
}

Outcome c10() {
  const double s = 1.2, l = s / 2.0;
  const CounterRng rng(2024, 1);
  int disagree = 0, band = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x1 = rng.uniform(2 * i), x2 = rng.uniform(2 * i + 1);
    const double margin = sampled_margin(x1, x2, l);
    // Sampling lambda on a 1/20000 lattice underestimates the margin by at most l/20000.
    if (std::abs(margin) <= 1e-9 + l / 20000.0) {
      ++band;
      continue;
    }
    disagree += region_check({2, 1, s, {x1, x2}}).inside_hull != (margin > 0.0);
  }
  const RegionMembership a = region_check({2, 1, s, {0.5, 0.5}});
  const RegionMembership b = region_check({2, 1, s, {0.3, 0.4}});
  const RegionMembership c = region_check({2, 1, s, {0.9, 0.15}});
  const bool arche = a.inside_Q && !a.inside_P && a.inside_hull && b.inside_P && !c.inside_Q && !c.inside_P && c.inside_hull;
  return {disagree == 0 && arche,
          fmt("%.0f disagreements on 10^4 points (%.0f in the boundary band); archetypes ", disagree, band) +
              (arche ? "ok" : "wrong")};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> fn;
  double budget_s;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"oracle equivalence", c1, 10},       {"Lorentz closed forms", c2, 5},
      {"partition certificates", c3, 30},   {"lemma suite", c4, 300},
      {"duality", c5, 1e9},                 {"theorem surrogate", c6, 180},
      {"sharpness case 1", c7, 300},        {"sharpness case 2", c8, 300},
      {"phase diagrams", c9, 1e9},          {"region geometry", c10, 1e9}};
  int lo = 1, hi = 10;
  if (argc > 1) lo = hi = std::stoi(argv[1]);
  bool ok = true;
  for (int i = lo; i <= hi; ++i) {
    const Criterion& c = all[i - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    ok = ok && pass;
    std::printf("criterion %2d %-24s %s  %s; %.1f s%s\n", i, c.title, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
