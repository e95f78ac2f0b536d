#include "hlab/field_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "hlab/summation.hpp"

namespace hlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Unnormalized in-place DFT over all axes. sign = FFTW_FORWARD or FFTW_BACKWARD.
void dft_inplace(std::vector<complex>& data, const Grid& grid, int sign) {
  std::array<int, kMaxDim> n{};
  for (int a = 0; a < grid.dim(); ++a) n[a] = grid.points();
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    // The FFTW planner is not re-entrant.
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(grid.dim(), n.data(), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("fftw_plan_dft failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// Slot j of a centered array <-> slot (j + M/2) mod M of an FFT-ordered array,
// with the (-1)^k phase from the x_0 = -L origin.
std::vector<complex> recenter(const std::vector<complex>& src, const Grid& grid, double scale) {
  std::vector<complex> out(src.size());
  const int half = grid.points() / 2;
  for (std::size_t i = 0; i < src.size(); ++i) {
    Index idx = grid.unravel(i);
    int parity = 0;
    for (int a = 0; a < grid.dim(); ++a) {
      parity += idx[a] - half;
      idx[a] = (idx[a] + half) % grid.points();
    }
    const double s = (parity & 1) ? -scale : scale;
    out[i] = s * src[grid.ravel(idx)];
  }
  return out;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void write_f64(std::ostream& out, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) out.put(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) {
    const int c = in.get();
    if (c == EOF) throw ValidationError("field dump truncated");
    v |= static_cast<std::uint32_t>(c & 0xff) << (8 * b);
  }
  return v;
}

double read_f64(std::istream& in) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    const int c = in.get();
    if (c == EOF) throw ValidationError("field dump truncated");
    bits |= static_cast<std::uint64_t>(c & 0xff) << (8 * b);
  }
  return std::bit_cast<double>(bits);
}

constexpr char kMagic[5] = {'H', 'L', 'A', 'B', '1'};

}  // namespace

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

double Grid::freq_cell_volume() const { return std::pow(freq_spacing(), dim_); }

Index Grid::unravel(std::size_t linear) const {
  Index idx{};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(linear % static_cast<std::size_t>(points_));
    linear /= static_cast<std::size_t>(points_);
  }
  return idx;
}

std::size_t Grid::ravel(const Index& idx) const {
  std::size_t linear = 0;
  for (int a = 0; a < dim_; ++a) linear = linear * static_cast<std::size_t>(points_) + idx[a];
  return linear;
}

Grid Grid::with_dim(int dim) const { return make_grid(dim, half_width_, points_); }

Grid make_grid(int dim, double half_width, int points_per_axis, std::size_t sample_cap) {
  require(dim >= 1 && dim <= kMaxDim, "grid dimension must be in {1,2,3,4}, got " + std::to_string(dim));
  require(points_per_axis >= 8 && points_per_axis % 2 == 0,
          "points per axis must be even and >= 8, got " + std::to_string(points_per_axis));
  require(half_width > 0.0 && std::isfinite(half_width), "half width must be positive");
  std::size_t size = 1;
  for (int a = 0; a < dim; ++a) {
    size *= static_cast<std::size_t>(points_per_axis);
    if (size > sample_cap) {
      throw BudgetError("grid of " + std::to_string(points_per_axis) + "^" + std::to_string(dim) +
                        " samples exceeds cap " + std::to_string(sample_cap));
    }
  }
  Grid g;
  g.dim_ = dim;
  g.half_width_ = half_width;
  g.points_ = points_per_axis;
  g.size_ = size;
  return g;
}

SampledField::SampledField(Grid grid, Space space)
    : grid_(grid), values_(grid.size(), complex{0.0, 0.0}), space_(space) {}

SampledField::SampledField(Grid grid, std::vector<complex> values, Space space)
    : grid_(grid), values_(std::move(values)), space_(space) {
  require(values_.size() == grid_.size(), "field values do not match grid size");
  check_finite();
}

void SampledField::check_finite() const {
  for (const complex& z : values_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("field contains a non-finite sample");
    }
  }
}

SampledField forward_transform(const SampledField& f) {
  require(f.space() == Space::physical, "forward_transform expects a physical-space field");
  std::vector<complex> data(f.values().begin(), f.values().end());
  dft_inplace(data, f.grid(), FFTW_FORWARD);
  return SampledField(f.grid(), recenter(data, f.grid(), f.grid().cell_volume()), Space::frequency);
}

SampledField inverse_transform(const SampledField& F) {
  require(F.space() == Space::frequency, "inverse_transform expects a frequency-space field");
  std::vector<complex> data(F.values().begin(), F.values().end());
  data = recenter(data, F.grid(), F.grid().freq_cell_volume());
  dft_inplace(data, F.grid(), FFTW_BACKWARD);
  return SampledField(F.grid(), std::move(data), Space::physical);
}

SampledField tensor_product(std::span<const SampledField> factors) {
  require(!factors.empty(), "tensor_product needs at least one factor");
  const Grid& base = factors.front().grid();
  const Space space = factors.front().space();
  for (const auto& f : factors) {
    require(f.grid() == base, "tensor_product factors must share one grid");
    require(f.space() == space, "tensor_product factors must share one space");
  }
  const int m = static_cast<int>(factors.size());
  const int n = base.dim();
  require(m * n <= kMaxDim, "tensor_product: m*n must be <= 4");
  const Grid out_grid = base.with_dim(m * n);
  SampledField out(out_grid, space);
  for (std::size_t i = 0; i < out_grid.size(); ++i) {
    const Index idx = out_grid.unravel(i);
    complex value{1.0, 0.0};
    for (int j = 0; j < m; ++j) {
      Index sub{};
      for (int a = 0; a < n; ++a) sub[a] = idx[j * n + a];
      value *= factors[j][base.ravel(sub)];
    }
    out[i] = value;
  }
  return out;
}

SampledField diagonal_restrict(const SampledField& F, int m) {
  require(F.space() == Space::physical, "diagonal_restrict expects a physical-space field");
  require(m >= 1 && F.grid().dim() % m == 0, "field dimension not divisible by m");
  const int n = F.grid().dim() / m;
  const Grid out_grid = F.grid().with_dim(n);
  SampledField out(out_grid, Space::physical);
  for (std::size_t i = 0; i < out_grid.size(); ++i) {
    const Index sub = out_grid.unravel(i);
    Index idx{};
    for (int j = 0; j < m; ++j) {
      for (int a = 0; a < n; ++a) idx[j * n + a] = sub[a];
    }
    out[i] = F[F.grid().ravel(idx)];
  }
  return out;
}

QuadratureResult integrate(const SampledField& f, const SampledField* refined) {
  require(f.space() == Space::physical, "integrate expects a physical-space field");
  auto riemann = [](const SampledField& g) {
    ComplexCompensatedSum acc;
    for (const complex& z : g.values()) acc.add(z);
    return acc.value() * g.grid().cell_volume();
  };
  QuadratureResult result;
  result.value = riemann(f);
  if (refined != nullptr) {
    require(refined->space() == Space::physical, "refined field must be physical");
    result.abs_error_estimate = std::abs(riemann(*refined) - result.value);
    result.estimated = true;
  }
  return result;
}

SampledField pointwise_product(const SampledField& a, const SampledField& b) {
  require(a.grid() == b.grid() && a.space() == b.space(), "pointwise_product: mismatched fields");
  SampledField out(a.grid(), a.space());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

SampledField linear_combination(complex a, const SampledField& f, complex b, const SampledField& g) {
  require(f.grid() == g.grid() && f.space() == g.space(), "linear_combination: mismatched fields");
  SampledField out(f.grid(), f.space());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = a * f[i] + b * g[i];
  return out;
}

SampledField abs_field(const SampledField& f) {
  SampledField out(f.grid(), f.space());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::abs(f[i]);
  return out;
}

double l2_norm(const SampledField& f) {
  CompensatedSum acc;
  for (const complex& z : f.values()) acc.add(std::norm(z));
  const double cell =
      f.space() == Space::physical ? f.grid().cell_volume() : f.grid().freq_cell_volume();
  return std::sqrt(acc.value() * cell);
}

double max_abs(const SampledField& f) {
  double m = 0.0;
  for (const complex& z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

void write_field(std::ostream& out, const SampledField& f) {
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, static_cast<std::uint32_t>(f.grid().dim()));
  write_u32(out, static_cast<std::uint32_t>(f.grid().points()));
  write_f64(out, f.grid().half_width());
  out.put(static_cast<char>(f.space()));
  for (const complex& z : f.values()) {
    write_f64(out, z.real());
    write_f64(out, z.imag());
  }
  if (!out) throw Error("failed writing field dump");
}

SampledField read_field(std::istream& in) {
  char magic[5];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ValidationError("not an HLAB1 field dump");
  }
  const auto dim = static_cast<int>(read_u32(in));
  const auto points = static_cast<int>(read_u32(in));
  const double half_width = read_f64(in);
  const int tag = in.get();
  if (tag != 0 && tag != 1) throw ValidationError("bad space tag in field dump");
  const Grid grid = make_grid(dim, half_width, points);
  std::vector<complex> values(grid.size());
  for (auto& z : values) {
    const double re = read_f64(in);
    const double im = read_f64(in);
    z = {re, im};
  }
  return SampledField(grid, std::move(values), static_cast<Space>(tag));
}

void write_field_file(const std::string& path, const SampledField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  write_field(out, f);
}

SampledField read_field_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_field(in);
}

}  // namespace hlab
