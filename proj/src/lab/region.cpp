#include <array>
#include <functional>
#include <cmath>
#include <vector>

#include "hlab/error.hpp"
#include "hlab/lab.hpp"

namespace hlab {

namespace {

constexpr double kBand = 1e-9;

struct Facet {
  std::vector<double> normal;
  double offset;  // normal . x <= offset inside
};

// Solves the m x m system a x = b by Gaussian elimination with partial pivoting.
bool solve(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t m = b.size();
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-14) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < m; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(m, 0.0);
  for (std::size_t c = m; c-- > 0;) {
    double v = b[c];
    for (std::size_t k = c + 1; k < m; ++k) v -= a[c][k] * x[k];
    x[c] = v / a[c][c];
  }
  return true;
}

// Facets of the convex hull of a small full-dimensional point set: every
// hyperplane through m of the points with all points on one side.
std::vector<Facet> hull_facets(const std::vector<std::vector<double>>& pts, int m) {
  std::vector<Facet> facets;
  const std::size_t count = pts.size();
  std::vector<std::size_t> pick(m);
  std::function<void(std::size_t, int)> choose = [&](std::size_t start, int depth) {
    if (depth == m) {
      // Normal n with n . (p_i - p_0) = 0, fixed by one free coordinate.
      for (int free = 0; free < m; ++free) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (int i = 1; i < m; ++i) {
          std::vector<double> row(m);
          for (int c = 0; c < m; ++c) row[c] = pts[pick[i]][c] - pts[pick[0]][c];
          a.push_back(row);
          b.push_back(0.0);
        }
        std::vector<double> row(m, 0.0);
        row[free] = 1.0;
        a.push_back(row);
        b.push_back(1.0);
        std::vector<double> normal;
        if (!solve(a, b, normal)) continue;
        double off = 0.0;
        for (int c = 0; c < m; ++c) off += normal[c] * pts[pick[0]][c];
        bool below = true, above = true;
        for (const auto& p : pts) {
          double v = 0.0;
          for (int c = 0; c < m; ++c) v += normal[c] * p[c];
          below = below && v <= off + 1e-12;
          above = above && v >= off - 1e-12;
        }
        if (above && !below) {
          for (double& c : normal) c = -c;
          off = -off;
          below = true;
        }
        if (below) facets.push_back({normal, off});
        break;
      }
      return;
    }
    for (std::size_t i = start; i < count; ++i) {
      pick[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
  return facets;
}

}  // namespace

RegionMembership region_check(const ExponentRegion& region) {
  const int m = region.m;
  require(m >= 1 && m <= 3, "region_check supports 1 <= m <= 3");
  require(region.n >= 1 && region.s > 0.0, "region needs n >= 1 and s > 0");
  require(static_cast<int>(region.point.size()) == m, "point must have m coordinates");
  for (double r : region.point) require(r >= 0.0 && std::isfinite(r), "coordinates must be finite and >= 0");
  const double l = region.s / (m * region.n);

  RegionMembership out;
  double sum = 0.0;
  out.inside_Q = true;
  for (double r : region.point) {
    out.inside_Q = out.inside_Q && r > 0.0 && r < l;
    sum += r;
  }
  out.inside_P = sum > 0.0 && sum < 1.0;

  // hull of closure(Q) and closure(P) = conv of cube corners, 0 and the e_j.
  std::vector<std::vector<double>> pts;
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<double> p(m);
    for (int c = 0; c < m; ++c) p[c] = (mask >> c) & 1 ? l : 0.0;
    pts.push_back(p);
  }
  for (int c = 0; c < m; ++c) {
    std::vector<double> e(m, 0.0);
    e[c] = 1.0;
    pts.push_back(e);
  }
  if (m == 1) {
    out.inside_hull = region.point[0] <= std::max(l, 1.0) + kBand;
    return out;
  }
  out.inside_hull = true;
  for (const Facet& f : hull_facets(pts, m)) {
    double v = 0.0, norm = 0.0;
    for (int c = 0; c < m; ++c) {
      v += f.normal[c] * region.point[c];
      norm += f.normal[c] * f.normal[c];
    }
    if (v > f.offset + kBand * std::sqrt(norm)) {
      out.inside_hull = false;
      break;
    }
  }
  return out;
}

}  // namespace hlab
