#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hlab/littlewood_paley.hpp"
#include "hlab/multiplier_op.hpp"
#include "hlab/random.hpp"

using namespace hlab;
using std::numbers::pi;

namespace {

double max_diff(const SampledField& a, const SampledField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Random symbol vanishing outside |xi| <= radius, with a certified hint.
MultiplierSymbol random_symbol(const Grid& big, int m, int n, double radius, std::uint64_t seed) {
  const CounterRng rng(seed, 500);
  SampledField v(big, Space::frequency);
  for (std::size_t i = 0; i < big.size(); ++i) {
    const auto xi = freq_point(big, i);
    const double r = norm_of(std::span<const double>(xi.data(), big.dim()));
    v[i] = rng.complex_normal(i) * plateau(r, -1.0, 0.0, 0.8 * radius, radius);
  }
  return MultiplierSymbol::from_values(m, n, std::move(v), SupportHint{0.0, radius});
}

std::vector<SampledField> random_inputs(const Grid& g, int m, std::uint64_t seed, bool real = false) {
  std::vector<SampledField> fs;
  for (int j = 0; j < m; ++j) {
    fs.push_back(band_limited_field(g, CounterRng(seed, 600 + j), alias_safe_band(g, m) * 0.999, real));
  }
  return fs;
}

}  // namespace

TEST_CASE("constant symbol gives the pointwise product") {
  const Grid g = make_grid(1, 4, 64);
  const auto fs = random_inputs(g, 2, 1);
  const MultiplierSymbol one =
      MultiplierSymbol::from_closed_form(2, 1, g.with_dim(2), [](std::span<const double>) { return complex(1.0); });
  const OperatorApplication out = hlab::apply(one, fs);
  CHECK(max_diff(out.output, pointwise_product(fs[0], fs[1])) < 1e-9 * max_abs(out.output));
}

TEST_CASE("modulation symbol translates") {
  const Grid g = make_grid(1, 4, 64);
  const auto fs = random_inputs(g, 2, 2);
  const int sa = 5, sb = -9;
  const double a = sa * g.spacing(), b = sb * g.spacing();
  const MultiplierSymbol mod = MultiplierSymbol::from_closed_form(2, 1, g.with_dim(2), [&](std::span<const double> xi) {
    return std::exp(complex(0, 2 * pi * (a * xi[0] + b * xi[1])));
  });
  const OperatorApplication out = hlab::apply(mod, fs);
  for (int i = 0; i < 64; ++i) {
    CHECK(std::abs(out.output[i] - fs[0][(i + sa + 64) % 64] * fs[1][(i + sb + 64) % 64]) < 1e-9);
  }
}

TEST_CASE("spectral application matches the direct sum") {
  const Grid g = make_grid(1, 3, 32);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MultiplierSymbol sigma = random_symbol(g.with_dim(2), 2, 1, 2.5, seed);
    const auto fs = random_inputs(g, 2, seed + 100);
    const OperatorApplication out = hlab::apply(sigma, fs, true);
    CHECK(out.residual_checked);
    CHECK(out.residual <= 1e-8);
  }
}

TEST_CASE("direct sum special cases") {
  const Grid g = make_grid(1, 4, 32);
  const SampledField gauss = SampledField::sample(
      g, Space::physical, [](std::span<const double> x) { return complex(std::exp(-pi * x[0] * x[0])); });
  const MultiplierSymbol one =
      MultiplierSymbol::from_closed_form(2, 1, g.with_dim(2), [](std::span<const double>) { return complex(1.0); });
  const std::vector<SampledField> gg{gauss, gauss};
  const OperatorApplication sq = apply_direct(one, gg);
  CHECK(sq.method == Method::direct);
  for (int i = 0; i < 32; ++i) CHECK(std::abs(sq.output[i] - gauss[i] * gauss[i]) < 1e-9);

  const int k1 = 5, k2 = 7;  // xi = 5/8, 7/8
  auto character = [&](int k) {
    return SampledField::sample(g, Space::physical,
                                [&](std::span<const double> x) { return std::exp(complex(0, 2 * pi * k * x[0] / 8.0)); });
  };
  const std::vector<SampledField> chars{character(k1), character(k2)};
  const MultiplierSymbol psi2 = MultiplierSymbol::from_closed_form(
      2, 1, g.with_dim(2), [](std::span<const double> xi) { return complex(psi_profile(norm_of(xi))); });
  const OperatorApplication out = apply_direct(psi2, chars);
  const double value = psi_profile(std::hypot(k1 / 8.0, k2 / 8.0));
  for (int i = 0; i < 32; ++i) {
    CHECK(std::abs(out.output[i] - value * std::exp(complex(0, 2 * pi * (k1 + k2) * g.coord(i) / 8.0))) < 1e-9);
  }
}

TEST_CASE("multilinearity") {
  const Grid g = make_grid(1, 3, 64);
  const MultiplierSymbol sigma = random_symbol(g.with_dim(2), 2, 1, 4.0, 9);
  const auto fs = random_inputs(g, 2, 3);
  const auto hs = random_inputs(g, 2, 4);
  const complex a(0.7, -0.2), b(-1.3, 0.4);
  const std::vector<SampledField> mixed{linear_combination(a, fs[0], b, hs[0]), fs[1]};
  const std::vector<SampledField> other{hs[0], fs[1]};
  const SampledField lhs = hlab::apply(sigma, mixed).output;
  const SampledField rhs = linear_combination(a, hlab::apply(sigma, fs).output, b, hlab::apply(sigma, other).output);
  CHECK(max_diff(lhs, rhs) < 1e-10 * max_abs(rhs));
}

TEST_CASE("guards") {
  const Grid g = make_grid(1, 4, 32);
  const MultiplierSymbol one =
      MultiplierSymbol::from_closed_form(2, 1, g.with_dim(2), [](std::span<const double>) { return complex(1.0); });
  const std::vector<SampledField> noisy{white_noise_field(g, CounterRng(1, 0)), white_noise_field(g, CounterRng(1, 1))};
  CHECK_THROWS_AS(hlab::apply(one, noisy), AliasingError);
  const Grid g2 = make_grid(2, 4, 64);
  const MultiplierSymbol big =
      MultiplierSymbol::from_closed_form(2, 2, g2.with_dim(4), [](std::span<const double>) { return complex(1.0); });
  const std::vector<SampledField> pair{SampledField(g2, Space::physical), SampledField(g2, Space::physical)};
  CHECK_THROWS_AS(apply_direct(big, pair), BudgetError);
  const std::vector<SampledField> mismatch{SampledField(g, Space::physical), SampledField(make_grid(1, 2, 32), Space::physical)};
  CHECK_THROWS_AS(hlab::apply(one, mismatch), ValidationError);
}

TEST_CASE("transpose symbol") {
  const Grid g = make_grid(1, 3, 32);
  const Grid big = g.with_dim(2);
  CHECK(transpose_map_norm(2, 1) == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-12));
  CHECK(transpose_map_norm(3, 2) <= std::sqrt(5.0));
  const MultiplierSymbol sigma = random_symbol(big, 2, 1, 1.6, 5);
  for (int j : {1, 2}) {
    const MultiplierSymbol twice = transpose_symbol(transpose_symbol(sigma, j), j);
    for (std::size_t i = 0; i < big.size(); ++i) CHECK(twice.at(i) == sigma.at(i));
  }
  // sigma(xi_1, xi_2) = G(xi_1)  ->  G(-xi_1 - xi_2).
  auto G = [](double x) { return complex(std::exp(-x * x), x); };
  const MultiplierSymbol first =
      MultiplierSymbol::from_closed_form(2, 1, big, [&](std::span<const double> xi) { return G(xi[0]); });
  const MultiplierSymbol t = transpose_symbol(first, 1);
  for (std::size_t i = 0; i < big.size(); i += 7) {
    const auto xi = freq_point(big, i);
    CHECK(t.at(i) == G(-xi[0] - xi[1]));
  }
  const SampledField unbounded = white_noise_field(big, CounterRng(1, 2));
  CHECK_THROWS_AS(transpose_symbol(MultiplierSymbol::from_values(
                                       2, 1, SampledField(big, std::vector<complex>(unbounded.values().begin(), unbounded.values().end()), Space::frequency)),
                                   1),
                  ValidationError);
}

TEST_CASE("duality identity for the transposes") {
  const Grid g = make_grid(1, 3, 64);
  const Grid big = g.with_dim(2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MultiplierSymbol sigma = random_symbol(big, 2, 1, 4.0, seed);
    const auto fs = random_inputs(g, 2, seed + 40);
    const SampledField hb = band_limited_field(g, CounterRng(seed, 81), alias_safe_band(g, 2) * 0.999, false);
    for (int j : {1, 2}) {
      const complex lhs = pairing(hlab::apply(transpose_symbol(sigma, j), fs).output, hb);
      std::vector<SampledField> swapped = fs;
      swapped[j - 1] = hb;
      const complex rhs = pairing(hlab::apply(sigma, swapped).output, fs[j - 1]);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("coordinate map") {
  const Grid g = make_grid(1, 2, 32);
  const SampledField a = white_noise_field(g, CounterRng(2, 0), false);
  const SampledField b = white_noise_field(g, CounterRng(2, 1), false);
  const std::vector<SampledField> ab{a, b};
  const SampledField f = tensor_product(ab);
  const SampledField t = coordinate_map(f, 2, 1);
  for (int i1 = 0; i1 < 32; ++i1) {
    for (int i2 = 0; i2 < 32; ++i2) {
      // -(x_1 + x_2) on the periodic grid.
      const double z = -(g.coord(i1) + g.coord(i2));
      const int iz = static_cast<int>(std::lround((z + 2.0) / g.spacing())) % 32;
      CHECK(t[i1 * 32 + i2] == a[(iz + 32) % 32] * b[i2]);
    }
  }
  for (int j : {1, 2}) {
    const SampledField tt = coordinate_map(coordinate_map(f, 2, j), 2, j);
    CHECK(max_diff(tt, f) == 0.0);
    CHECK(l2_norm(coordinate_map(f, 2, j)) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  }
}

TEST_CASE("pointwise domination") {
  const Grid g = make_grid(1, 8, 64);
  const Grid big = g.with_dim(2);
  const MultiplierSymbol sigma = MultiplierSymbol::from_closed_form(
      2, 1, big, [](std::span<const double> xi) { return complex(psi_profile(norm_of(xi))); }, SupportHint{0.5, 2.0});
  std::vector<Index> points;
  for (int i = 0; i < 64; i += 9)
    for (int j = 0; j < 64; j += 11) points.push_back({i, j, 0, 0});
  const std::vector<SampledField> zeros{SampledField(g, Space::physical), SampledField(g, Space::physical)};
  const DominationReport z = pointwise_domination_check(sigma, 0, zeros, 1.8, 1.3, points);
  for (double v : z.lhs) CHECK(v == 0.0);
  CHECK(z.max_ratio == 0.0);
  const auto fs = random_inputs(g, 2, 7);
  const DominationReport r = pointwise_domination_check(sigma, 0, fs, 1.8, 1.3, points);
  CHECK(r.symbol_norm > 0.0);
  CHECK(std::isfinite(r.max_ratio));
  CHECK(r.max_ratio > 0.0);
  CHECK_THROWS_AS(pointwise_domination_check(sigma, 0, fs, 1.0, 1.3, points), ValidationError);
  CHECK_THROWS_AS(pointwise_domination_check(sigma, 0, fs, 1.8, 0.9, points), ValidationError);
}
