#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hlab/error.hpp"

namespace hlab {

using complex = std::complex<double>;

inline constexpr int kMaxDim = 4;
inline constexpr std::size_t kDefaultSampleCap = std::size_t{1} << 26;

using Index = std::array<int, kMaxDim>;

/**
 * Periodic cube [-L, L)^d sampled with M points per axis.
 *
 * Physical samples sit at x_i = -L + i h, h = 2L/M. Frequency samples use
 * centered indexing: slot j holds xi = (j - M/2) / (2L).
 */
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  int points() const { return points_; }
  double spacing() const { return 2.0 * half_width_ / points_; }
  double freq_spacing() const { return 1.0 / (2.0 * half_width_); }
  std::size_t size() const { return size_; }
  /** h^d */
  double cell_volume() const;
  /** (1/(2L))^d */
  double freq_cell_volume() const;
  /** Largest resolvable |xi| along an axis, M/(4L). */
  double nyquist() const { return points_ / (4.0 * half_width_); }

  double coord(int i) const { return -half_width_ + i * spacing(); }
  double freq(int j) const { return (j - points_ / 2) * freq_spacing(); }
  /** Signed integer frequency index k = j - M/2 for slot j. */
  int freq_index(int j) const { return j - points_ / 2; }

  Index unravel(std::size_t linear) const;
  std::size_t ravel(const Index& idx) const;

  /** Same L and M, different dimension. */
  Grid with_dim(int dim) const;

  bool operator==(const Grid& other) const = default;

 private:
  friend Grid make_grid(int, double, int, std::size_t);
  int dim_ = 0;
  double half_width_ = 0.0;
  int points_ = 0;
  std::size_t size_ = 0;
};

/** Validates and builds a grid; rejects odd or small M and M^d above the cap. */
Grid make_grid(int dim, double half_width, int points_per_axis,
               std::size_t sample_cap = kDefaultSampleCap);

enum class Space : std::uint8_t { physical = 0, frequency = 1 };

/** Complex samples on a Grid, row-major with the last axis fastest. */
class SampledField {
 public:
  SampledField() = default;
  SampledField(Grid grid, Space space);
  SampledField(Grid grid, std::vector<complex> values, Space space);

  const Grid& grid() const { return grid_; }
  Space space() const { return space_; }
  std::span<const complex> values() const { return values_; }
  std::span<complex> values() { return values_; }
  complex operator[](std::size_t i) const { return values_[i]; }
  complex& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /** Throws if any entry is NaN or infinite. */
  void check_finite() const;

  /** Fills physical samples (or frequency samples) from a pointwise rule. */
  template <class Fn>
  static SampledField sample(const Grid& grid, Space space, Fn&& fn) {
    SampledField out(grid, space);
    std::array<double, kMaxDim> point{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Index idx = grid.unravel(i);
      for (int a = 0; a < grid.dim(); ++a) {
        point[a] = space == Space::physical ? grid.coord(idx[a]) : grid.freq(idx[a]);
      }
      out.values_[i] = fn(std::span<const double>(point.data(), grid.dim()));
    }
    out.check_finite();
    return out;
  }

 private:
  Grid grid_;
  std::vector<complex> values_;
  Space space_ = Space::physical;
};

/** Riemann-sum transform h^d * sum f(x) e^{-2 pi i x.xi}, centered output. */
SampledField forward_transform(const SampledField& f);
/** Inverse of forward_transform; (1/(2L))^d * sum F(xi) e^{2 pi i x.xi}. */
SampledField inverse_transform(const SampledField& F);

/** out(x_1,...,x_m) = f_1(x_1) ... f_m(x_m). Works in either space. */
SampledField tensor_product(std::span<const SampledField> factors);

/** out(x) = F(x, ..., x) for an mn-dimensional physical field. */
SampledField diagonal_restrict(const SampledField& F, int m);

struct QuadratureResult {
  complex value;
  double abs_error_estimate = 0.0;
  bool estimated = false;
};

/**
 * Riemann sum of a physical field. With a refined sampling of the same
 * function, the error estimate is |I_refined - I|.
 */
QuadratureResult integrate(const SampledField& f, const SampledField* refined = nullptr);

/** Pointwise helpers used throughout. */
SampledField pointwise_product(const SampledField& a, const SampledField& b);
SampledField linear_combination(complex a, const SampledField& f, complex b, const SampledField& g);
SampledField abs_field(const SampledField& f);

/** L^2 norm with the grid measure (physical: h^d; frequency: (1/2L)^d). */
double l2_norm(const SampledField& f);
double max_abs(const SampledField& f);

/** Binary dump: "HLAB1", u32 dim, u32 M, f64 L, u8 space, then (re, im) f64 pairs. */
void write_field(std::ostream& out, const SampledField& f);
SampledField read_field(std::istream& in);
void write_field_file(const std::string& path, const SampledField& f);
SampledField read_field_file(const std::string& path);

}  // namespace hlab
