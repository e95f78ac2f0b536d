#include "hlab/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace hlab {

double norm_of(std::span<const double> xi) {
  double r2 = 0.0;
  for (double v : xi) r2 += v * v;
  return std::sqrt(r2);
}

std::array<double, kMaxDim> freq_point(const Grid& grid, std::size_t i) {
  const Index idx = grid.unravel(i);
  std::array<double, kMaxDim> xi{};
  for (int a = 0; a < grid.dim(); ++a) xi[a] = grid.freq(idx[a]);
  return xi;
}

MultiplierSymbol MultiplierSymbol::from_closed_form(int m, int n, const Grid& grid, SymbolFn fn,
                                                    std::optional<SupportHint> hint) {
  require(m >= 1 && n >= 1 && m * n == grid.dim(), "symbol grid must be mn-dimensional");
  require(static_cast<bool>(fn), "closed form must be callable");
  MultiplierSymbol s;
  s.m_ = m;
  s.n_ = n;
  s.grid_ = grid;
  s.fn_ = std::move(fn);
  s.hint_ = hint;
  return s;
}

MultiplierSymbol MultiplierSymbol::from_values(int m, int n, SampledField values,
                                               std::optional<SupportHint> hint) {
  require(values.space() == Space::frequency, "symbol values must live in frequency space");
  require(m >= 1 && n >= 1 && m * n == values.grid().dim(), "symbol grid must be mn-dimensional");
  MultiplierSymbol s;
  s.m_ = m;
  s.n_ = n;
  s.grid_ = values.grid();
  s.values_ = std::move(values);
  s.hint_ = hint;
  if (hint) s.certify_support();
  return s;
}

complex MultiplierSymbol::at(std::size_t i) const {
  if (values_) return (*values_)[i];
  const auto xi = freq_point(grid_, i);
  return fn_(std::span<const double>(xi.data(), grid_.dim()));
}

complex MultiplierSymbol::eval(std::span<const double> xi) const {
  if (!fn_) throw Error("symbol has no closed form");
  return fn_(xi);
}

SampledField MultiplierSymbol::sampled() const {
  if (values_) return *values_;
  SampledField out(grid_, Space::frequency);
  for (std::size_t i = 0; i < grid_.size(); ++i) out[i] = at(i);
  out.check_finite();
  return out;
}

double MultiplierSymbol::max_abs() const {
  double best = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) best = std::max(best, std::abs(at(i)));
  return best;
}

void MultiplierSymbol::certify_support() const {
  if (!hint_) return;
  const double scale = std::max(max_abs(), 1e-300);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const auto xi = freq_point(grid_, i);
    const double r = norm_of(std::span<const double>(xi.data(), grid_.dim()));
    if (r >= hint_->inner && r <= hint_->outer) continue;
    if (std::abs(at(i)) > 1e-12 * scale) throw ValidationError("symbol does not vanish outside its support hint");
  }
}

}  // namespace hlab

namespace hlab {

Grid dual_grid(const Grid& grid) { return make_grid(grid.dim(), grid.nyquist(), grid.points()); }

SampledField frequency_as_physical(const SampledField& F) {
  require(F.space() == Space::frequency, "frequency_as_physical expects frequency samples");
  return SampledField(dual_grid(F.grid()), std::vector<complex>(F.values().begin(), F.values().end()),
                      Space::physical);
}

}  // namespace hlab
