#pragma once

#include <span>
#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/fourier_calculus.hpp"
#include "hlab/symbol.hpp"

namespace hlab {

enum class Method { spectral, direct };

struct OperatorApplication {
  SampledField output;
  Method method = Method::spectral;
  /** max |spectral - direct| / max |direct|, when a direct check ran. */
  double residual = 0.0;
  bool residual_checked = false;
};

/// Term budget per output point for apply_direct.
inline constexpr std::size_t kDirectBudget = std::size_t{1} << 22;

/**
 * Largest |xi| per axis an input may carry: Nyquist / (2m). Keeps every
 * sum xi_1 + ... + xi_m away from the periodic wrap.
 */
double alias_safe_band(const Grid& grid, int m);

/** Throws AliasingError if f-hat has content above the alias-safe band. */
void check_alias_safe(const SampledField& f, int m);

/**
 * T_sigma(f_1, ..., f_m): tensor of the spectra, times sigma, inverse
 * transform on the mn-grid, then restriction to the diagonal.
 */
OperatorApplication apply(const MultiplierSymbol& sigma, std::span<const SampledField> fs,
                          bool check_direct = false, double tolerance = 1e-8);

/** Literal nested sum over every frequency tuple; tiny grids only. */
OperatorApplication apply_direct(const MultiplierSymbol& sigma, std::span<const SampledField> fs);

/**
 * sigma^{*j}(xi) = sigma(..., -(xi_1 + ... + xi_m), ...) with j 1-based.
 * Sampled symbols are remapped on integer frequency indices; sources that
 * fall off the grid read as 0 only when the support hint guarantees it.
 */
/** Operator norm of the slot-j transpose map on (R^n)^m. */
double transpose_map_norm(int m, int j);

MultiplierSymbol transpose_symbol(const MultiplierSymbol& sigma, int j);

/** T^j f(x) = f(..., -(x_1 + ... + x_m), ...) with periodic wrap, j 1-based. */
SampledField coordinate_map(const SampledField& f, int m, int j);

/** Bilinear pairing integral u v dx (no conjugation). */
complex pairing(const SampledField& u, const SampledField& v);

struct DominationReport {
  double symbol_norm = 0.0;  // |sigma(2^k .)|_{L_s^{mn/s,1}}
  std::vector<double> lhs;
  std::vector<double> rhs;
  double max_ratio = 0.0;
};

/**
 * |sigma^vee * (f_1 x ... x f_m)(x)| against
 * |sigma(2^k .)|_{L_s^{mn/s,1}} M_q f_1(x_1) ... M_q f_m(x_m) at the given
 * mn-dim sample points. Needs mn/2 < s < mn and q > mn/s.
 */
DominationReport pointwise_domination_check(const MultiplierSymbol& sigma, int k,
                                            std::span<const SampledField> fs, double q, double s,
                                            std::span<const Index> sample_points);

/** |sigma(2^k .) g|_{L_s^{r,q}} with g a radial profile in |xi| (e.g. Psi^(m)). */
double dilated_symbol_norm(const MultiplierSymbol& sigma, int k, double (*profile)(double),
                           const SobolevIndex& idx);

}  // namespace hlab
