#include "hlab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace hlab {

namespace {

double edge(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

// Sum over every j in Z of chi(r / 2^j); at most two terms are nonzero.
double chi_dyadic_sum(double r) {
  const int j0 = static_cast<int>(std::floor(std::log2(r)));
  double acc = 0.0;
  for (int j = j0 - 2; j <= j0 + 2; ++j) acc += annulus_bump(std::ldexp(r, -j));
  return acc;
}

complex interpolate(const SampledField& f, std::span<const double> xi, bool& inside) {
  const Grid& g = f.grid();
  const int M = g.points();
  std::array<int, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  inside = true;
  for (int a = 0; a < g.dim(); ++a) {
    const double u = xi[a] / g.freq_spacing() + M / 2;
    if (u < 0.0 || u > M - 1) {
      inside = false;
      return 0.0;
    }
    base[a] = std::min(static_cast<int>(std::floor(u)), M - 2);
    frac[a] = u - base[a];
  }
  complex acc = 0.0;
  for (int corner = 0; corner < (1 << g.dim()); ++corner) {
    Index idx{};
    double w = 1.0;
    for (int a = 0; a < g.dim(); ++a) {
      const int bit = (corner >> a) & 1;
      idx[a] = base[a] + bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    if (w != 0.0) acc += w * f[g.ravel(idx)];
  }
  return acc;
}

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = edge(u);
  return a / (a + edge(1.0 - u));
}

double plateau(double r, double a0, double a1, double b1, double b0) {
  if (r <= a0 || r >= b0) return 0.0;
  return smooth_step((r - a0) / (a1 - a0)) * smooth_step((b0 - r) / (b0 - b1));
}

double annulus_bump(double r) {
  if (r <= 0.5 || r >= 2.0) return 0.0;
  const double v = (r - 1.25) / 0.75;
  return std::exp(1.0 - 1.0 / (1.0 - v * v));
}

double psi_profile(double r) {
  if (r <= 0.5 || r >= 2.0) return 0.0;
  return annulus_bump(r) / chi_dyadic_sum(r);
}

double phi_profile(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  // Only j = 0 of sum_{j <= 0} psi(2^{-j} r) meets the annulus here.
  return psi_profile(r);
}

double theta_profile(double r, int m) {
  const double sm = std::sqrt(static_cast<double>(m));
  return plateau(r, 0.125 / sm, 0.25 * sm, 4.0 * sm, 8.0 * sm);
}

double gamma_profile(double r) { return plateau(r, 0.99, 0.999, 1.001, 1.01); }

double lambda_profile(double r) {
  const double s3 = std::sqrt(3.0);
  return plateau(r, 0.25, 0.5 / s3, 2.0 * s3, 4.0);
}

int LPFamily::log2_m() const {
  int l = 0;
  while ((2 << l) <= m_) ++l;
  return l;
}

double LPFamily::partition_sum(double r) const {
  double acc = 0.0;
  for (int k = window_.k_min; k <= window_.k_max; ++k) acc += psi_profile(std::ldexp(r, -k));
  return acc;
}

AnnulusConstants LPFamily::theta_annulus() const {
  const double sm = std::sqrt(static_cast<double>(m_));
  return {0.125 / sm, 0.25 * sm, 4.0 * sm, 8.0 * sm};
}

AnnulusConstants LPFamily::lambda_annulus() const {
  const double s3 = std::sqrt(3.0);
  return {0.25, 0.5 / s3, 2.0 * s3, 4.0};
}

LPFamily build_family(int m, int n, DyadicWindow window, const Grid* freq_grid) {
  require(m >= 1 && n >= 1 && m * n <= kMaxDim, "family needs m, n >= 1 and mn <= 4");
  require(window.k_min <= window.k_max, "empty dyadic window");
  if (freq_grid != nullptr) {
    require(std::ldexp(1.0, window.k_min) >= freq_grid->freq_spacing() * (1 - 1e-12),
            "dyadic window reaches below the frequency spacing");
    require(std::ldexp(1.0, window.k_max) <= freq_grid->nyquist() * (1 + 1e-12),
            "dyadic window reaches beyond the Nyquist frequency");
  }
  LPFamily fam;
  fam.m_ = m;
  fam.n_ = n;
  fam.window_ = window;
  // Certificates on a log-uniform sweep of the guarded band.
  const double lo = std::ldexp(1.0, window.k_min + 1);
  const double hi = std::ldexp(1.0, window.k_max - 1);
  double defect = 0.0;
  if (lo <= hi) {
    const int samples = 64 * window.octaves();
    for (int i = 0; i <= samples; ++i) {
      const double r = lo * std::pow(hi / lo, static_cast<double>(i) / samples);
      defect = std::max(defect, std::abs(fam.partition_sum(r) - 1.0));
      defect = std::max(defect, std::abs(phi_profile(r) + [&] {
                          double acc = 0.0;
                          for (int j = 1; j <= 64; ++j) acc += psi_profile(std::ldexp(r, -j));
                          return acc;
                        }() - 1.0));
    }
  }
  if (defect > 1e-9) throw Error("partition of unity certificate failed");
  for (double r : {0.0, 0.5, 2.0, 3.0, 100.0}) {
    if (psi_profile(r) != 0.0) throw Error("psi support certificate failed");
  }
  fam.partition_defect_ = defect;
  return fam;
}

MultiplierSymbol dilate_symbol(const MultiplierSymbol& sigma, int k) {
  const double scale = std::ldexp(1.0, k);
  std::optional<SupportHint> hint;
  if (sigma.support_hint()) {
    hint = SupportHint{sigma.support_hint()->inner / scale, sigma.support_hint()->outer / scale};
    // The dilated support ball must fit inside the frequency cube.
    require(hint->outer <= sigma.grid().nyquist(), "dilation pushes the support off the frequency grid");
  }
  if (sigma.has_closed_form()) {
    const SymbolFn fn = sigma.closed_form();
    const int dim = sigma.grid().dim();
    return MultiplierSymbol::from_closed_form(
        sigma.m(), sigma.n(), sigma.grid(),
        [fn, scale, dim](std::span<const double> xi) {
          std::array<double, kMaxDim> y{};
          for (int a = 0; a < dim; ++a) y[a] = scale * xi[a];
          return fn(std::span<const double>(y.data(), dim));
        },
        hint);
  }
  const SampledField src = sigma.sampled();
  const Grid& g = src.grid();
  SampledField out(g, Space::frequency);
  const double peak = std::max(hlab::max_abs(src), 1e-300);
  // Off-grid arguments read as zero only if the samples vanish on the grid rim.
  bool rim_zero = true;
  for (std::size_t j = 0; j < g.size() && rim_zero; ++j) {
    const Index idx = g.unravel(j);
    bool rim = false;
    for (int a = 0; a < g.dim(); ++a) rim = rim || idx[a] == 0 || idx[a] == g.points() - 1;
    rim_zero = !(rim && std::abs(src[j]) > 1e-12 * peak);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto xi = freq_point(g, i);
    for (int a = 0; a < g.dim(); ++a) xi[a] *= scale;
    bool inside = true;
    out[i] = interpolate(src, std::span<const double>(xi.data(), g.dim()), inside);
    if (!inside && !rim_zero) throw ValidationError("dilation pushes the support off the frequency grid");
  }
  // Exact for k >= 0 (grid points map to grid points); otherwise bound by
  // the largest second difference / 8.
  double err = 0.0;
  if (k < 0) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Index idx = g.unravel(i);
      for (int a = 0; a < g.dim(); ++a) {
        if (idx[a] == 0 || idx[a] == g.points() - 1) continue;
        Index lo = idx, hi = idx;
        lo[a] -= 1;
        hi[a] += 1;
        err = std::max(err, std::abs(src[g.ravel(lo)] - 2.0 * src[i] + src[g.ravel(hi)]) / 8.0);
      }
    }
  }
  return MultiplierSymbol::from_values(sigma.m(), sigma.n(), std::move(out)).with_interpolation_error(err);
}

SymbolDecomposition decompose(const MultiplierSymbol& sigma, const LPFamily& fam) {
  require(sigma.m() == fam.m() && sigma.n() == fam.n(), "symbol and family disagree on (m, n)");
  const Grid& g = sigma.grid();
  const int m = fam.m();
  const int n = fam.n();
  const int shift = 5 + fam.log2_m();
  const DyadicWindow w = fam.window();

  std::vector<SampledField> parts(m, SampledField(g, Space::frequency));
  SampledField high(g, Space::frequency);
  double defect = 0.0;
  double peak = 0.0;
  std::vector<double> radius(m);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = freq_point(g, i);
    for (int j = 0; j < m; ++j) radius[j] = norm_of(std::span<const double>(xi.data() + j * n, n));
    const complex s = sigma.at(i);
    peak = std::max(peak, std::abs(s));
    complex total = 0.0;
    for (int l = 0; l < m; ++l) {
      double acc = 0.0;
      for (int k = w.k_min; k <= w.k_max; ++k) {
        double term = psi_profile(std::ldexp(radius[l], -k));
        if (term == 0.0) continue;
        for (int j = 0; j < m && term != 0.0; ++j) {
          if (j == l) continue;
          // sum over k_j < k is phi(./2^{k-1}); over k_j <= k is phi(./2^k).
          term *= phi_profile(std::ldexp(radius[j], -(j < l ? k - 1 : k)));
        }
        acc += term;
      }
      parts[l][i] = s * acc;
      total += parts[l][i];
    }
    double acc_high = 0.0;
    for (int k = w.k_min; k <= w.k_max; ++k) {
      double term = psi_profile(std::ldexp(radius[0], -k));
      if (term == 0.0) continue;
      for (int j = 1; j < m; ++j) term *= phi_profile(std::ldexp(radius[j], -(k - shift)));
      acc_high += term;
    }
    high[i] = s * acc_high;
    defect = std::max(defect, std::abs(total - s));
  }
  if (defect > 1e-9 * std::max(peak, 1.0)) {
    throw ValidationError("symbol support is not inside the dyadic window");
  }
  SymbolDecomposition out;
  out.k_window = w;
  out.reconstruction_defect = defect;
  SampledField low = linear_combination(1.0, parts[0], -1.0, high);
  for (auto& p : parts) out.parts.push_back(MultiplierSymbol::from_values(m, n, std::move(p)));
  out.low = MultiplierSymbol::from_values(m, n, std::move(low));
  out.high = MultiplierSymbol::from_values(m, n, std::move(high));
  return out;
}

SampledField project(const SampledField& g, const LPFamily& fam, ProjectionKind kind, int k) {
  require(k >= fam.window().k_min && k <= fam.window().k_max, "projection index outside the window");
  const bool physical = g.space() == Space::physical;
  SampledField G = physical ? forward_transform(g) : g;
  const int e = kind == ProjectionKind::low_shifted ? k - 5 - fam.log2_m() : k;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const auto xi = freq_point(G.grid(), i);
    const double r = std::ldexp(norm_of(std::span<const double>(xi.data(), G.grid().dim())), -e);
    G[i] *= kind == ProjectionKind::band ? psi_profile(r) : phi_profile(r);
  }
  return physical ? inverse_transform(G) : G;
}

std::string family_json(const LPFamily& fam) {
  auto annulus = [](const AnnulusConstants& a) {
    return nlohmann::ordered_json{{"support_inner", a.support_inner},
                                  {"plateau_inner", a.plateau_inner},
                                  {"plateau_outer", a.plateau_outer},
                                  {"support_outer", a.support_outer}};
  };
  nlohmann::ordered_json j;
  j["m"] = fam.m();
  j["n"] = fam.n();
  j["window"] = {fam.window().k_min, fam.window().k_max};
  j["psi"] = annulus(fam.psi_annulus());
  j["Psi_m"] = annulus(fam.psi_annulus());
  j["Theta_m"] = annulus(fam.theta_annulus());
  j["Gamma"] = annulus(fam.gamma_annulus());
  j["Lambda_m"] = annulus(fam.lambda_annulus());
  j["phi"] = annulus({0.0, 0.0, 1.0, 2.0});
  j["partition_defect"] = fam.partition_defect();
  return j.dump(2);
}

void write_family(const std::string& prefix, const LPFamily& fam, const Grid& freq_grid) {
  auto dump = [&](const std::string& name, auto&& profile) {
    SampledField f = SampledField::sample(freq_grid, Space::frequency,
                                          [&](std::span<const double> xi) { return complex(profile(norm_of(xi))); });
    write_field_file(prefix + "_" + name + ".hlab", f);
  };
  dump("psi", psi_profile);
  dump("phi", phi_profile);
  dump("Theta_m", [&](double r) { return theta_profile(r, fam.m()); });
  dump("Gamma", gamma_profile);
  dump("Lambda_m", lambda_profile);
  std::ofstream out(prefix + ".json");
  if (!out) throw Error("cannot open " + prefix + ".json");
  out << family_json(fam) << '\n';
}

}  // namespace hlab
