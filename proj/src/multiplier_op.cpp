#include "hlab/multiplier_op.hpp"

#include <cmath>
#include <numbers>

#include "hlab/littlewood_paley.hpp"
#include "hlab/summation.hpp"

namespace hlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const Grid& check_inputs(const MultiplierSymbol& sigma, std::span<const SampledField> fs) {
  require(static_cast<int>(fs.size()) == sigma.m(), "number of inputs differs from m");
  const Grid& g = fs.front().grid();
  for (const auto& f : fs) {
    require(f.space() == Space::physical, "operator inputs must be physical-space fields");
    require(f.grid() == g, "operator inputs must share one grid");
  }
  require(g.dim() == sigma.n(), "input dimension differs from n");
  require(sigma.grid() == g.with_dim(sigma.m() * sigma.n()), "symbol grid does not match the input grid");
  return g;
}

// Naive DFT, independent of FFTW: h^n sum_x f(x) e^{-2 pi i x.xi}.
SampledField direct_spectrum(const SampledField& f) {
  const Grid& g = f.grid();
  SampledField out(g, Space::frequency);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const auto xi = freq_point(g, j);
    ComplexCompensatedSum acc;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Index idx = g.unravel(i);
      double phase = 0.0;
      for (int a = 0; a < g.dim(); ++a) phase += g.coord(idx[a]) * xi[a];
      acc.add(f[i] * std::polar(1.0, -kTwoPi * phase));
    }
    out[j] = acc.value() * g.cell_volume();
  }
  return out;
}

}  // namespace

double transpose_map_norm(int m, int j) {
  require(j >= 1 && j <= m, "transpose slot out of range");
  // A e_b = e_b - e_j for b != j, A e_j = -e_j; power iteration on A^T A.
  auto apply_a = [&](const std::vector<double>& v, bool transpose) {
    std::vector<double> out(v);
    if (!transpose) {
      double s = 0.0;
      for (double x : v) s += x;
      out[j - 1] = -s;
    } else {
      for (int b = 0; b < m; ++b) out[b] = (b == j - 1 ? 0.0 : v[b]) - v[j - 1];
    }
    return out;
  };
  std::vector<double> v(m, 1.0);
  v[0] = 0.5;
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> w = apply_a(apply_a(v, false), true);
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    lambda = norm;
    for (int b = 0; b < m; ++b) v[b] = w[b] / norm;
  }
  return std::sqrt(lambda);
}

double alias_safe_band(const Grid& grid, int m) { return grid.nyquist() / (2.0 * m); }

void check_alias_safe(const SampledField& f, int m) {
  const SampledField F = f.space() == Space::physical ? forward_transform(f) : f;
  const Grid& g = F.grid();
  const double band = alias_safe_band(g, m) * (1 + 1e-12);
  const double peak = max_abs(F);
  double outside = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index idx = g.unravel(i);
    bool out = false;
    for (int a = 0; a < g.dim(); ++a) out = out || std::abs(g.freq(idx[a])) > band;
    if (out) outside = std::max(outside, std::abs(F[i]));
  }
  if (outside > 1e-10 * peak) {
    throw AliasingError("input has spectral content beyond the alias-safe band |xi| <= " + std::to_string(band));
  }
}

OperatorApplication apply(const MultiplierSymbol& sigma, std::span<const SampledField> fs, bool check_direct,
                          double tolerance) {
  check_inputs(sigma, fs);
  std::vector<SampledField> spectra;
  for (const auto& f : fs) {
    check_alias_safe(f, sigma.m());
    spectra.push_back(forward_transform(f));
  }
  SampledField joint = tensor_product(spectra);
  for (std::size_t i = 0; i < joint.size(); ++i) joint[i] *= sigma.at(i);
  OperatorApplication out;
  out.output = diagonal_restrict(inverse_transform(joint), sigma.m());
  out.method = Method::spectral;
  if (check_direct) {
    const OperatorApplication ref = apply_direct(sigma, fs);
    double diff = 0.0;
    for (std::size_t i = 0; i < out.output.size(); ++i) diff = std::max(diff, std::abs(out.output[i] - ref.output[i]));
    const double scale = max_abs(ref.output);
    out.residual = scale > 0.0 ? diff / scale : diff;
    out.residual_checked = true;
    if (out.residual > tolerance) throw Error("spectral and direct application disagree");
  }
  return out;
}

OperatorApplication apply_direct(const MultiplierSymbol& sigma, std::span<const SampledField> fs) {
  const Grid& g = check_inputs(sigma, fs);
  const Grid& big = sigma.grid();
  if (big.size() > kDirectBudget) throw BudgetError("apply_direct: M^{mn} exceeds the 2^22 term budget");
  const int m = sigma.m();
  const int n = sigma.n();
  std::vector<SampledField> spectra;
  for (const auto& f : fs) spectra.push_back(direct_spectrum(f));

  // Weight of each frequency tuple and its summed frequency.
  std::vector<complex> weight(big.size());
  std::vector<std::array<double, kMaxDim>> total(big.size());
  for (std::size_t t = 0; t < big.size(); ++t) {
    const Index idx = big.unravel(t);
    complex w = sigma.at(t);
    std::array<double, kMaxDim> sum{};
    for (int j = 0; j < m; ++j) {
      Index sub{};
      for (int a = 0; a < n; ++a) {
        sub[a] = idx[j * n + a];
        sum[a] += g.freq(sub[a]);
      }
      w *= spectra[j][g.ravel(sub)];
    }
    weight[t] = w;
    total[t] = sum;
  }
  OperatorApplication out;
  out.method = Method::direct;
  out.output = SampledField(g, Space::physical);
  const double measure = big.freq_cell_volume();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index xi = g.unravel(i);
    ComplexCompensatedSum acc;
    for (std::size_t t = 0; t < big.size(); ++t) {
      if (weight[t] == complex(0.0)) continue;
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += g.coord(xi[a]) * total[t][a];
      acc.add(weight[t] * std::polar(1.0, kTwoPi * phase));
    }
    out.output[i] = acc.value() * measure;
  }
  return out;
}

MultiplierSymbol transpose_symbol(const MultiplierSymbol& sigma, int j) {
  const int m = sigma.m();
  const int n = sigma.n();
  require(j >= 1 && j <= m, "transpose slot out of range");
  const int slot = j - 1;
  std::optional<SupportHint> hint;
  if (sigma.support_hint()) {
    // The map is an involution, so one norm bounds both directions.
    const double c = transpose_map_norm(m, j);
    hint = SupportHint{sigma.support_hint()->inner / c, sigma.support_hint()->outer * c};
  }
  if (sigma.has_closed_form()) {
    const SymbolFn fn = sigma.closed_form();
    return MultiplierSymbol::from_closed_form(
        m, n, sigma.grid(),
        [fn, m, n, slot](std::span<const double> xi) {
          std::array<double, kMaxDim> y{};
          for (int a = 0; a < m * n; ++a) y[a] = xi[a];
          for (int a = 0; a < n; ++a) {
            double s = 0.0;
            for (int b = 0; b < m; ++b) s += xi[b * n + a];
            y[slot * n + a] = -s;
          }
          return fn(std::span<const double>(y.data(), m * n));
        },
        hint);
  }
  const Grid& g = sigma.grid();
  const int half = g.points() / 2;
  SampledField out(g, Space::frequency);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index idx = g.unravel(i);
    Index src = idx;
    bool on_grid = true;
    for (int a = 0; a < n; ++a) {
      int s = 0;
      for (int b = 0; b < m; ++b) s += g.freq_index(idx[b * n + a]);
      const int target = -s + half;
      on_grid = on_grid && target >= 0 && target < g.points();
      src[slot * n + a] = target;
    }
    if (on_grid) {
      out[i] = sigma.at(g.ravel(src));
      continue;
    }
    // Off-grid source point: allowed only if the hint puts it outside the support.
    double r2 = 0.0;
    for (int a = 0; a < m * n; ++a) {
      const double v = (src[a] - half) * g.freq_spacing();
      r2 += v * v;
    }
    if (!sigma.support_hint() || std::sqrt(r2) <= sigma.support_hint()->outer) {
      throw ValidationError("transpose source leaves the frequency grid inside the symbol support");
    }
  }
  return MultiplierSymbol::from_values(m, n, std::move(out), hint);
}

SampledField coordinate_map(const SampledField& f, int m, int j) {
  require(f.space() == Space::physical, "coordinate_map expects a physical-space field");
  require(m >= 1 && f.grid().dim() % m == 0, "field dimension not divisible by m");
  require(j >= 1 && j <= m, "coordinate slot out of range");
  const Grid& g = f.grid();
  const int n = g.dim() / m;
  const int M = g.points();
  // -(x_1 + ... + x_m) sits at index (m+1) M/2 - sum i_b (mod M).
  const long base = static_cast<long>(m + 1) * M / 2;
  SampledField out(g, Space::physical);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index idx = g.unravel(i);
    Index src = idx;
    for (int a = 0; a < n; ++a) {
      long s = 0;
      for (int b = 0; b < m; ++b) s += idx[b * n + a];
      src[(j - 1) * n + a] = static_cast<int>(((base - s) % M + M) % M);
    }
    out[i] = f[g.ravel(src)];
  }
  return out;
}

complex pairing(const SampledField& u, const SampledField& v) {
  require(u.grid() == v.grid() && u.space() == Space::physical && v.space() == Space::physical,
          "pairing needs physical fields on one grid");
  ComplexCompensatedSum acc;
  for (std::size_t i = 0; i < u.size(); ++i) acc.add(u[i] * v[i]);
  return acc.value() * u.grid().cell_volume();
}

double dilated_symbol_norm(const MultiplierSymbol& sigma, int k, double (*profile)(double), const SobolevIndex& idx) {
  const MultiplierSymbol d = dilate_symbol(sigma, k);
  const Grid& g = d.grid();
  SampledField F(g, Space::frequency);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double weight = 1.0;
    if (profile != nullptr) {
      const auto xi = freq_point(g, i);
      weight = profile(norm_of(std::span<const double>(xi.data(), g.dim())));
    }
    if (weight != 0.0) F[i] = weight * d.at(i);
  }
  return lorentz_sobolev_norm(frequency_as_physical(F), idx);
}

DominationReport pointwise_domination_check(const MultiplierSymbol& sigma, int k, std::span<const SampledField> fs,
                                            double q, double s, std::span<const Index> sample_points) {
  const Grid& g = check_inputs(sigma, fs);
  const int m = sigma.m();
  const int n = sigma.n();
  const double mn = m * n;
  require(s > mn / 2 && s < mn, "domination check needs mn/2 < s < mn");
  require(q > mn / s, "domination check needs q > mn/s");

  DominationReport rep;
  rep.symbol_norm = dilated_symbol_norm(sigma, k, nullptr, {s, mn / s, 1.0});

  std::vector<SampledField> spectra;
  std::vector<SampledField> maximal;
  const MaximalConfig cfg{q, full_radius_set(g)};
  for (const auto& f : fs) {
    spectra.push_back(forward_transform(f));
    maximal.push_back(maximal_function(f, cfg));
  }
  SampledField joint = tensor_product(spectra);
  for (std::size_t i = 0; i < joint.size(); ++i) joint[i] *= sigma.at(i);
  const SampledField conv = inverse_transform(joint);
  for (const Index& x : sample_points) {
    const double lhs = std::abs(conv[sigma.grid().ravel(x)]);
    double rhs = rep.symbol_norm;
    for (int j = 0; j < m; ++j) {
      Index sub{};
      for (int a = 0; a < n; ++a) sub[a] = x[j * n + a];
      rhs *= maximal[j][g.ravel(sub)].real();
    }
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    if (rhs > 0.0) {
      rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    } else if (lhs > 0.0) {
      rep.max_ratio = kInf;
    }
  }
  return rep;
}

}  // namespace hlab
