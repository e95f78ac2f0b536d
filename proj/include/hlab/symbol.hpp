#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hlab/field_core.hpp"

namespace hlab {

/** Radial annulus inner <= |xi| <= outer outside of which a symbol vanishes. */
struct SupportHint {
  double inner = 0.0;
  double outer = 0.0;
};

using SymbolFn = std::function<complex(std::span<const double>)>;

/**
 * A bounded symbol on an mn-dimensional frequency grid. Either sampled
 * values, a closed-form evaluator, or both. The closed form is what makes
 * dilations exact.
 */
class MultiplierSymbol {
 public:
  MultiplierSymbol() = default;

  static MultiplierSymbol from_closed_form(int m, int n, const Grid& grid, SymbolFn fn,
                                           std::optional<SupportHint> hint = std::nullopt);
  /** values must be a frequency-space field on an mn-dim grid. */
  static MultiplierSymbol from_values(int m, int n, SampledField values,
                                      std::optional<SupportHint> hint = std::nullopt);

  int m() const { return m_; }
  int n() const { return n_; }
  const Grid& grid() const { return grid_; }
  bool has_closed_form() const { return static_cast<bool>(fn_); }
  bool has_values() const { return values_.has_value(); }
  const std::optional<SupportHint>& support_hint() const { return hint_; }
  /** Bound on the error of interpolated samples; 0 when exact. */
  double interpolation_error() const { return interp_error_; }

  /** Value at grid slot i. */
  complex at(std::size_t i) const;
  /** Closed-form value at an arbitrary point; throws without a closed form. */
  complex eval(std::span<const double> xi) const;
  const SymbolFn& closed_form() const { return fn_; }

  /** All grid samples as a frequency-space field. */
  SampledField sampled() const;
  double max_abs() const;

  /** Throws unless the symbol vanishes (within 1e-12 of its max) outside the hint. */
  void certify_support() const;

  MultiplierSymbol with_interpolation_error(double e) const {
    MultiplierSymbol out = *this;
    out.interp_error_ = e;
    return out;
  }

 private:
  int m_ = 0;
  int n_ = 0;
  Grid grid_;
  std::optional<SampledField> values_;
  SymbolFn fn_;
  std::optional<SupportHint> hint_;
  double interp_error_ = 0.0;
};

/** Euclidean norm of a point. */
double norm_of(std::span<const double> xi);

/** Frequency coordinates of slot i. */
std::array<double, kMaxDim> freq_point(const Grid& grid, std::size_t i);

}  // namespace hlab

namespace hlab {

/**
 * Grid on which frequency samples of `grid` sit as ordinary points:
 * half-width M/(4L), same M, so point j is xi_j.
 */
Grid dual_grid(const Grid& grid);

/** Reinterprets frequency samples as a physical-space function of xi. */
SampledField frequency_as_physical(const SampledField& F);

}  // namespace hlab
