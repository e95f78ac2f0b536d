#include "hlab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hlab/summation.hpp"

namespace hlab {

void LorentzIndex::validate() const {
  require(p > 0.0 && q > 0.0, "Lorentz exponents must be positive");
  require(!(std::isinf(p) && !std::isinf(q)), "L^{inf,q} with q < inf is not supported");
}

double Rearrangement::distribution(double s) const {
  // levels are decreasing, so {f* > s} = [0, t_i) for the last level above s.
  double t = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] > s) t = breakpoints[i + 1];
  }
  return t;
}

double Rearrangement::integral() const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    acc.add(levels[i] * (breakpoints[i + 1] - breakpoints[i]));
  }
  return acc.value();
}

double cell_measure(const SampledField& f) {
  return f.space() == Space::physical ? f.grid().cell_volume() : f.grid().freq_cell_volume();
}

double distribution_function(const SampledField& f, double s) {
  require(s >= 0.0, "distribution_function needs s >= 0");
  std::size_t count = 0;
  for (const complex& z : f.values()) count += std::abs(z) > s ? 1 : 0;
  return static_cast<double>(count) * cell_measure(f);
}

Rearrangement rearrange_magnitudes(std::span<const double> magnitudes, double cell) {
  std::vector<std::size_t> order;
  order.reserve(magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    require(magnitudes[i] >= 0.0 && std::isfinite(magnitudes[i]), "magnitudes must be finite and >= 0");
    if (magnitudes[i] > 0.0) order.push_back(i);
  }
  // Ties go to the lower linear index.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return magnitudes[a] != magnitudes[b] ? magnitudes[a] > magnitudes[b] : a < b;
  });
  Rearrangement r;
  std::size_t i = 0;
  while (i < order.size()) {
    const double level = magnitudes[order[i]];
    std::size_t j = i;
    while (j < order.size() && magnitudes[order[j]] == level) ++j;
    r.levels.push_back(level);
    r.breakpoints.push_back(static_cast<double>(j) * cell);
    i = j;
  }
  return r;
}

Rearrangement decreasing_rearrangement(const SampledField& f) {
  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mags[i] = std::abs(f[i]);
  return rearrange_magnitudes(mags, cell_measure(f));
}

double lorentz_norm(const Rearrangement& r, const LorentzIndex& idx) {
  idx.validate();
  if (r.levels.empty()) return 0.0;
  if (std::isinf(idx.p)) return r.levels.front();
  const double inv_p = 1.0 / idx.p;
  if (std::isinf(idx.q)) {
    // t^{1/p} v increases on each step; its sup is approached at the right end.
    double best = 0.0;
    for (std::size_t i = 0; i < r.levels.size(); ++i) {
      best = std::max(best, std::pow(r.breakpoints[i + 1], inv_p) * r.levels[i]);
    }
    return best;
  }
  const double a = idx.q / idx.p;
  CompensatedSum acc;
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const double t0 = r.breakpoints[i];
    const double t1 = r.breakpoints[i + 1];
    // t1^a - t0^a without cancellation.
    const double dt = t0 == 0.0 ? std::pow(t1, a) : std::pow(t0, a) * std::expm1(a * std::log(t1 / t0));
    acc.add(std::pow(r.levels[i], idx.q) * dt / a);
  }
  return std::pow(acc.value(), 1.0 / idx.q);
}

double lorentz_norm(const SampledField& f, const LorentzIndex& idx) {
  return lorentz_norm(decreasing_rearrangement(f), idx);
}

double conjugate_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

HolderPairing holder_pairing(const SampledField& f, const SampledField& g, const LorentzIndex& idx) {
  require(idx.p > 1.0 && std::isfinite(idx.p), "holder_pairing needs 1 < p < inf");
  require(idx.q >= 1.0, "holder_pairing needs q >= 1");
  require(f.grid() == g.grid() && f.space() == g.space(), "holder_pairing: fields on different grids");
  CompensatedSum acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc.add(std::abs(f[i] * g[i]));
  HolderPairing out;
  out.lhs = acc.value() * cell_measure(f);
  out.rhs = lorentz_norm(f, idx) *
            lorentz_norm(g, {conjugate_exponent(idx.p), conjugate_exponent(idx.q)});
  return out;
}

double lorentz_embedding_constant(double p, double q1, double q2) {
  require(q2 <= q1, "embedding needs q2 <= q1");
  const double e = 1.0 / q2 - (std::isinf(q1) ? 0.0 : 1.0 / q1);
  return std::pow(q2 / p, e);
}

void write_rearrangement_csv(std::ostream& out, const Rearrangement& r) {
  out << "breakpoint,level\n";
  out.precision(17);
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    out << r.breakpoints[i + 1] << ',' << r.levels[i] << '\n';
  }
}

}  // namespace hlab
