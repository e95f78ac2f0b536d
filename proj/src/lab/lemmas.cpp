#include <cmath>
#include <numbers>

#include "hlab/fourier_calculus.hpp"
#include "hlab/littlewood_paley.hpp"
#include "hlab/lorentz.hpp"
#include "hlab/multiplier_op.hpp"
#include "suite.hpp"

namespace hlab::suite {

namespace {

constexpr double kPi = std::numbers::pi;

double coord_norm_inf(const Grid& g, const Index& idx) {
  double r = 0.0;
  for (int a = 0; a < g.dim(); ++a) r = std::max(r, std::abs(g.coord(idx[a])));
  return r;
}

double coord_norm2(const Grid& g, const Index& idx) {
  double r = 0.0;
  for (int a = 0; a < g.dim(); ++a) r += g.coord(idx[a]) * g.coord(idx[a]);
  return r;
}

// L^2(l^2) norm of a finite family on one grid.
double family_l2(const std::vector<SampledField>& fam) {
  const Grid& g = fam.front().grid();
  double acc = 0.0;
  for (const auto& f : fam) {
    for (std::size_t i = 0; i < g.size(); ++i) acc += std::norm(f[i]);
  }
  return std::sqrt(acc * g.cell_volume());
}

// Same random band-limited function at every resolution of a fixed half-width.
SampledField keyed_field(const Grid& g, const CounterRng& rng, double band) { return band_limited_field(g, rng, band); }

}  // namespace

double relative_change(double a, double b) { return std::abs(b - a) / std::abs(a); }

SampledField compact_random_field(const Grid& grid, const CounterRng& rng, int kind) {
  SampledField f(grid, Space::physical);
  const double L = grid.half_width();
  switch (kind % 3) {
    case 0:
      for (std::size_t i = 0; i < grid.size(); ++i) f[i] = rng.normal(i);
      break;
    case 1:
      for (int b = 0; b < 3; ++b) {
        const double w = rng.uniform(10 * b, 0.3, 2.0);
        const double amp = rng.normal(10 * b + 1);
        std::array<double, kMaxDim> c{};
        for (int a = 0; a < grid.dim(); ++a) c[a] = rng.uniform(10 * b + 2 + a, -L / 4, L / 4);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const Index idx = grid.unravel(i);
          double r2 = 0.0;
          for (int a = 0; a < grid.dim(); ++a) r2 += std::pow(grid.coord(idx[a]) - c[a], 2);
          f[i] += amp * std::exp(-kPi * r2 / (w * w));
        }
      }
      break;
    default: {
      const double w = rng.uniform(0, 1.0, L / 8);
      const double nu = rng.uniform(1, 0.0, grid.nyquist() / 4);
      const double phase = rng.uniform(2, 0.0, 2 * kPi);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Index idx = grid.unravel(i);
        f[i] = std::exp(-kPi * coord_norm2(grid, idx) / (w * w)) * std::cos(2 * kPi * nu * grid.coord(idx[0]) + phase);
      }
    }
  }
  // Support inside the central half keeps periodic convolutions unwrapped.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (coord_norm_inf(grid, grid.unravel(i)) >= L / 2) f[i] = 0.0;
  }
  return f;
}

RatioStats young(std::uint64_t seed, int instances) {
  struct Exps {
    double p, q, r;
  };
  // 1/r + 1 = 1/p + 1/q, 1 < p <= r < inf, 1 <= q < r.
  const Exps exps[] = {{1.5, 1.2, 2.0}, {2.0, 4.0 / 3.0, 4.0}, {1.25, 1.25, 5.0 / 3.0}, {2.0, 1.5, 6.0}};
  const double ts[] = {1.0, 2.0, kInf};
  const Grid g = make_grid(1, 16.0, 512);
  RatioStats st;
  for (int i = 0; i < instances; ++i) {
    const CounterRng rng(seed, 1000 + i);
    const Exps e = exps[i % 4];
    const double t = ts[(i / 4) % 3];
    const SampledField f = compact_random_field(g, rng.child(1), i);
    const SampledField h = compact_random_field(g, rng.child(2), i / 3);
    const SampledField conv = inverse_transform(pointwise_product(forward_transform(f), forward_transform(h)));
    const double lhs = lorentz_norm(conv, {e.r, t});
    const double rhs = lorentz_norm(f, {e.p, t}) * lorentz_norm(h, {e.q, e.q});
    st.max_ratio = std::max(st.max_ratio, lhs / rhs);
    ++st.instances;
  }
  return st;
}

RatioStats hausdorff_young(std::uint64_t seed, int instances) {
  const double ps[] = {3.0, 4.0, 6.0};
  const double rs[] = {1.0, 2.0, kInf};
  const Grid g = make_grid(1, 16.0, 512);
  RatioStats st;
  for (int i = 0; i < instances; ++i) {
    const CounterRng rng(seed, 2000 + i);
    const double p = ps[i % 3];
    const double r = rs[(i / 3) % 3];
    const SampledField f = compact_random_field(g, rng, i / 9);
    const double lhs = lorentz_norm(forward_transform(f), {p, r});
    const double rhs = lorentz_norm(f, {conjugate_exponent(p), r});
    st.max_ratio = std::max(st.max_ratio, lhs / rhs);
    ++st.instances;
  }
  return st;
}

RatioStats holder(std::uint64_t seed, int instances) {
  const double ps[] = {1.5, 2.0, 3.0, 5.0};
  const double qs[] = {1.0, 2.0, 3.0, kInf};
  const Grid g = make_grid(1, 16.0, 512);
  RatioStats st;
  for (int i = 0; i < instances; ++i) {
    const CounterRng rng(seed, 3000 + i);
    const SampledField f = compact_random_field(g, rng.child(1), i);
    const SampledField h = compact_random_field(g, rng.child(2), i + 1);
    const HolderPairing hp = holder_pairing(f, h, {ps[i % 4], qs[(i / 4) % 4]});
    st.max_ratio = std::max(st.max_ratio, hp.lhs / hp.rhs);
    ++st.instances;
  }
  return st;
}

double kato_ponce_ratio(std::uint64_t seed, int M, int count) {
  const Grid g = make_grid(1, 8.0, M);
  SampledField theta(g, Space::physical);
  for (int i = 0; i < M; ++i) theta[i] = std::exp(-kPi * g.coord(i) * g.coord(i));
  const SobolevIndex idx{1.2, 3.0, 2.0};
  double worst = 0.0;
  for (int c = 0; c < count; ++c) {
    const SampledField f = keyed_field(g, CounterRng(seed, 4000 + c), 1.0);
    worst = std::max(worst, lorentz_sobolev_norm(pointwise_product(theta, f), idx) / lorentz_sobolev_norm(f, idx));
  }
  return worst;
}

std::vector<double> shifted_maximal_ratios(std::uint64_t seed, int M, int count, int k_lo, int k_hi) {
  const Grid g = make_grid(1, 8.0, M);
  const double s = 0.6, q = 2.0;
  const MaximalConfig cfg{q, full_radius_set(g)};
  std::vector<double> out(k_hi - k_lo + 1, 0.0);
  const int stride = std::max(1, M / 32);
  for (int c = 0; c < count; ++c) {
    const SampledField f = keyed_field(g, CounterRng(seed, 5000 + c), 1.0);
    const SampledField mf = maximal_function(f, cfg);
    for (int x = 0; x < M; x += stride) {
      Index idx{};
      idx[0] = x;
      for (int k = k_lo; k <= k_hi; ++k) {
        const double r = shifted_weight_profile(f, idx, k, s) / mf[x].real();
        out[k - k_lo] = std::max(out[k - k_lo], r);
      }
    }
  }
  return out;
}

MultiplierSymbol random_smooth_symbol(const Grid& grid, int m, int n, const CounterRng& rng, double a0, double a1,
                                      double b1, double b0, bool with_hint) {
  const int dim = grid.dim();
  struct Wave {
    std::array<double, kMaxDim> omega;
    double phase;
    complex amp;
  };
  std::vector<Wave> waves;
  for (int w = 0; w < 4; ++w) {
    Wave wave{};
    for (int a = 0; a < dim; ++a) wave.omega[a] = rng.uniform(100 * w + a, -1.0, 1.0);
    wave.phase = rng.uniform(100 * w + 10, 0.0, 2 * kPi);
    wave.amp = 0.5 * rng.complex_normal(100 * w + 20);
    waves.push_back(wave);
  }
  SymbolFn fn = [=](std::span<const double> xi) -> complex {
    const double cut = plateau(norm_of(xi), a0, a1, b1, b0);
    if (cut == 0.0) return 0.0;
    complex v = 1.0;
    for (const Wave& w : waves) {
      double arg = w.phase;
      for (int a = 0; a < dim; ++a) arg += 2 * kPi * w.omega[a] * xi[a];
      v += w.amp * std::cos(arg);
    }
    return cut * v;
  };
  std::optional<SupportHint> hint;
  if (with_hint) hint = SupportHint{a0, b0};
  return MultiplierSymbol::from_closed_form(m, n, grid, std::move(fn), hint);
}

double domination_ratio(std::uint64_t seed, int M, int count) {
  const Grid g = make_grid(1, 8.0, M);
  const Grid joint = g.with_dim(2);
  // Inputs fixed by the coarsest grid in the study (M = 128 -> band 1).
  const double band = 0.999;
  std::vector<Index> points;
  const int stride = std::max(1, M / 16);
  for (int a = 0; a < M; a += stride) {
    for (int b = 0; b < M; b += stride) points.push_back(Index{a, b});
  }
  double worst = 0.0;
  for (int c = 0; c < count; ++c) {
    const CounterRng rng(seed, 6000 + c);
    const MultiplierSymbol sigma = random_smooth_symbol(joint, 2, 1, rng.child(9), 0.5, 0.7, 1.6, 2.0);
    std::vector<SampledField> fs{keyed_field(g, rng.child(1), band), keyed_field(g, rng.child(2), band)};
    worst = std::max(worst, pointwise_domination_check(sigma, 0, fs, 1.8, 1.3, points).max_ratio);
  }
  return worst;
}

double coordinate_map_ratio(std::uint64_t seed, int M, int count, double s, double p, double q) {
  const Grid g = make_grid(2, 8.0, M);
  const SobolevIndex idx{s, p, q};
  double worst = 0.0;
  for (int c = 0; c < count; ++c) {
    const SampledField f = keyed_field(g, CounterRng(seed, 7000 + c), 1.0);
    const double base = lorentz_sobolev_norm(f, idx);
    for (int j = 1; j <= 2; ++j) worst = std::max(worst, lorentz_sobolev_norm(coordinate_map(f, 2, j), idx) / base);
  }
  return worst;
}

double marshall_ratio(std::uint64_t seed, int M, int count, int h) {
  const Grid g = make_grid(1, 16.0, M);
  const LPFamily fam = build_family(1, 1, {-4, 1}, &g);
  const int k_lo = -3, k_hi = 0;
  double worst = 0.0;
  for (int c = 0; c < count; ++c) {
    const CounterRng rng(seed, 8000 + c);
    std::vector<SampledField> gs;
    for (int k = k_lo; k <= k_hi; ++k) {
      SampledField F = band_limited_spectrum(g, rng.child(k - k_lo), std::ldexp(1.0, k + 1));
      for (int i = 0; i < M; ++i) {
        if (std::abs(g.freq(i)) < std::ldexp(1.0, k - 1)) F[i] = 0.0;
      }
      gs.push_back(inverse_transform(F));
    }
    std::vector<SampledField> out;
    for (int k = fam.window().k_min; k <= fam.window().k_max; ++k) {
      SampledField sum(g, Space::physical);
      for (int l = std::max(k - h, k_lo); l <= std::min(k + h, k_hi); ++l) sum = linear_combination(1.0, sum, 1.0, gs[l - k_lo]);
      out.push_back(project(sum, fam, ProjectionKind::band, k));
    }
    worst = std::max(worst, family_l2(out) / family_l2(gs));
  }
  return worst;
}

double fefferman_stein_ratio(std::uint64_t seed, int M, int count) {
  const Grid g = make_grid(1, 8.0, M);
  const MaximalConfig cfg{1.0, full_radius_set(g)};
  double worst = 0.0;
  for (int c = 0; c < count; ++c) {
    std::vector<SampledField> fs, mfs;
    for (int k = 0; k < 4; ++k) {
      fs.push_back(keyed_field(g, CounterRng(seed, 9000 + 8 * c + k), std::ldexp(0.25, k)));
      mfs.push_back(maximal_function(fs.back(), cfg));
    }
    worst = std::max(worst, family_l2(mfs) / family_l2(fs));
  }
  return worst;
}

}  // namespace hlab::suite
