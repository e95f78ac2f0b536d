#include "hlab/fourier_calculus.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "hlab/summation.hpp"

namespace hlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Visits every 1-D line along `axis`: fn(offset, stride) for each line start.
template <class Fn>
void for_each_line(const Grid& g, int axis, Fn&& fn) {
  std::size_t stride = 1;
  for (int a = g.dim() - 1; a > axis; --a) stride *= static_cast<std::size_t>(g.points());
  const std::size_t block = stride * static_cast<std::size_t>(g.points());
  for (std::size_t base = 0; base < g.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) fn(base + off, stride);
  }
}

// Periodic window sums of width w along one axis, starting at each index.
void window_sum_axis(std::vector<double>& data, const Grid& g, int axis, int w) {
  const int M = g.points();
  std::vector<long double> prefix(2 * M + 1);
  for_each_line(g, axis, [&](std::size_t start, std::size_t stride) {
    prefix[0] = 0.0L;
    for (int i = 0; i < 2 * M; ++i) prefix[i + 1] = prefix[i] + data[start + (i % M) * stride];
    for (int i = 0; i < M; ++i) data[start + i * stride] = static_cast<double>(prefix[i + w] - prefix[i]);
  });
}

// out[i] = max over starts j in [i - w + 1, i] (periodic) of data[j].
void window_max_axis(std::vector<double>& data, const Grid& g, int axis, int w) {
  const int M = g.points();
  std::vector<double> line(M);
  for_each_line(g, axis, [&](std::size_t start, std::size_t stride) {
    for (int i = 0; i < M; ++i) line[i] = data[start + i * stride];
    std::deque<int> dq;  // indices into the unrolled sequence, values decreasing
    for (int u = -w + 1; u < M; ++u) {
      const int src = ((u % M) + M) % M;
      while (!dq.empty() && line[((dq.back() % M) + M) % M] <= line[src]) dq.pop_back();
      dq.push_back(u);
      while (dq.front() <= u - w) dq.pop_front();
      if (u >= 0) data[start + u * stride] = line[((dq.front() % M) + M) % M];
    }
  });
}

}  // namespace

double bessel_symbol(double xi_squared, double s) {
  return std::pow(1.0 + kTwoPi * kTwoPi * xi_squared, s / 2.0);
}

SampledField bessel_potential(const SampledField& f, double s, Direction direction) {
  require(s >= 0.0, "bessel_potential needs s >= 0");
  SampledField F = f.space() == Space::physical ? forward_transform(f) : f;
  const Grid& g = F.grid();
  const double e = direction == Direction::forward ? s : -s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index idx = g.unravel(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += g.freq(idx[a]) * g.freq(idx[a]);
    F[i] *= bessel_symbol(r2, e);
  }
  return f.space() == Space::physical ? inverse_transform(F) : F;
}

double lorentz_sobolev_norm(const SampledField& f, const SobolevIndex& idx) {
  require(f.space() == Space::physical, "lorentz_sobolev_norm expects a physical-space field");
  if (idx.s == 0.0) return lorentz_norm(f, idx.lorentz());
  return lorentz_norm(bessel_potential(f, idx.s, Direction::forward), idx.lorentz());
}

std::vector<double> full_radius_set(const Grid& grid) {
  std::vector<double> out;
  for (int w = 1; w <= grid.points(); ++w) out.push_back(0.5 * w * grid.spacing());
  return out;
}

std::vector<double> dyadic_radius_set(const Grid& grid) {
  std::vector<double> out;
  for (int w = 1; w <= grid.points(); w *= 2) out.push_back(0.5 * w * grid.spacing());
  return out;
}

SampledField maximal_function(const SampledField& f, const MaximalConfig& cfg) {
  require(f.space() == Space::physical, "maximal_function expects a physical-space field");
  require(cfg.r > 0.0, "maximal power r must be positive");
  require(!cfg.radius_set.empty(), "radius_set must be nonempty");
  const Grid& g = f.grid();
  std::vector<int> widths;
  for (std::size_t i = 0; i < cfg.radius_set.size(); ++i) {
    const double rho = cfg.radius_set[i];
    require(i == 0 || rho > cfg.radius_set[i - 1], "radius_set must be ascending");
    require(rho <= g.half_width() * (1 + 1e-12), "radius exceeds the domain half-width");
    const double cells = 2.0 * rho / g.spacing();
    const int w = static_cast<int>(std::lround(cells));
    require(w >= 1 && std::abs(cells - w) < 1e-9 * std::max(1.0, cells), "radius is not grid aligned");
    widths.push_back(w);
  }
  std::vector<double> powered(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) powered[i] = std::pow(std::abs(f[i]), cfg.r);

  std::vector<double> best(g.size(), 0.0);
  std::vector<double> work;
  for (int w : widths) {
    work = powered;
    for (int a = 0; a < g.dim(); ++a) window_sum_axis(work, g, a, w);
    const double inv = 1.0 / std::pow(static_cast<double>(w), g.dim());
    for (double& v : work) v *= inv;
    for (int a = 0; a < g.dim(); ++a) window_max_axis(work, g, a, w);
    for (std::size_t i = 0; i < g.size(); ++i) best[i] = std::max(best[i], work[i]);
  }
  SampledField out(g, Space::physical);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::pow(std::max(best[i], 0.0), 1.0 / cfg.r);
  return out;
}

SampledField shifted_samples(const SampledField& f, const Index& x, int k) {
  require(f.space() == Space::physical, "shifted_samples expects a physical-space field");
  const Grid& g = f.grid();
  const int M = g.points();
  const double scale = std::ldexp(1.0, -k);
  // Coefficients c_j = F_j / (2L) per axis, contracted one axis at a time.
  const SampledField F = forward_transform(f);
  std::vector<complex> data(F.values().begin(), F.values().end());
  std::vector<complex> line(M);
  std::vector<complex> kernel(static_cast<std::size_t>(M) * M);
  for (int a = 0; a < g.dim(); ++a) {
    const double xa = g.coord(x[a]);
    for (int i = 0; i < M; ++i) {
      const double z = xa - g.coord(i) * scale;
      for (int j = 0; j < M; ++j) {
        kernel[static_cast<std::size_t>(i) * M + j] = std::polar(g.freq_spacing(), kTwoPi * g.freq(j) * z);
      }
    }
    for_each_line(g, a, [&](std::size_t start, std::size_t stride) {
      for (int i = 0; i < M; ++i) {
        ComplexCompensatedSum acc;
        for (int j = 0; j < M; ++j) acc.add(kernel[static_cast<std::size_t>(i) * M + j] * data[start + j * stride]);
        line[i] = acc.value();
      }
      for (int i = 0; i < M; ++i) data[start + i * stride] = line[i];
    });
  }
  return SampledField(g, std::move(data), Space::physical);
}

double shifted_weight_profile(const SampledField& f, const Index& x, int k, double s) {
  const Grid& g = f.grid();
  require(s > 0.0 && s < g.dim(), "shifted_weight_profile needs 0 < s < d");
  SampledField v = shifted_samples(f, x, k);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index idx = g.unravel(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += g.coord(idx[a]) * g.coord(idx[a]);
    v[i] *= bessel_symbol(r2, -s);
  }
  return lorentz_norm(v, {g.dim() / s, kInf});
}

}  // namespace hlab
