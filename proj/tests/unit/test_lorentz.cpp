#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hlab/lorentz.hpp"
#include "hlab/random.hpp"
#include "hlab/summation.hpp"

using namespace hlab;

namespace {

// Indicator of the first `cells` cells.
SampledField indicator(const Grid& g, std::size_t cells) {
  SampledField f(g, Space::physical);
  for (std::size_t i = 0; i < cells; ++i) f[i] = 1.0;
  return f;
}

double lp_norm(const SampledField& f, double p) {
  CompensatedSum acc;
  for (const auto& z : f.values()) acc.add(std::pow(std::abs(z), p));
  return std::pow(acc.value() * f.grid().cell_volume(), 1.0 / p);
}

}  // namespace

TEST_CASE("distribution function") {
  const Grid g = make_grid(1, 4, 64);
  const SampledField f = indicator(g, 24);
  CHECK(distribution_function(f, 0.5) == doctest::Approx(3.0));
  CHECK(distribution_function(f, 1.0) == 0.0);
  CHECK(distribution_function(SampledField(g, Space::physical), 0.0) == 0.0);

  // |x|^{-1/2} > 2 iff |x| < 1/4.
  const Grid u = make_grid(1, 1, 1024);
  const SampledField p = SampledField::sample(u, Space::physical, [&](std::span<const double> x) {
    return complex(x[0] == 0.0 ? 1e6 : std::pow(std::abs(x[0]), -0.5), 0.0);
  });
  CHECK(std::abs(distribution_function(p, 2.0) - 0.5) <= u.spacing());
}

TEST_CASE("decreasing rearrangement") {
  const Grid g = make_grid(1, 4, 8);  // h = 1
  SampledField f(g, Space::physical);
  f[2] = 3.0;
  f[5] = 1.0;
  f[6] = complex(0.0, -2.0);
  const Rearrangement r = decreasing_rearrangement(f);
  CHECK(r.levels == std::vector<double>{3, 2, 1});
  CHECK(r.breakpoints == std::vector<double>{0, 1, 2, 3});

  const Rearrangement one = decreasing_rearrangement(indicator(g, 5));
  CHECK(one.levels == std::vector<double>{1});
  CHECK(one.breakpoints.back() == 5.0);

  const SampledField w = white_noise_field(make_grid(2, 2, 32), CounterRng(7, 0));
  const Rearrangement rw = decreasing_rearrangement(w);
  CompensatedSum acc;
  for (const auto& z : w.values()) acc.add(std::abs(z));
  CHECK(rw.integral() == doctest::Approx(acc.value() * w.grid().cell_volume()).epsilon(1e-13));
  for (std::size_t i = 1; i < rw.levels.size(); ++i) CHECK(rw.levels[i] < rw.levels[i - 1]);
  for (double s : {0.0, 0.1, 0.5, 1.0, 2.0, rw.levels[17], rw.levels[100]}) {
    CHECK(rw.distribution(s) == doctest::Approx(distribution_function(w, s)).epsilon(1e-14));
  }
  CHECK(rw.total_measure() <= 16.0);
}

TEST_CASE("indicator norms match the closed form") {
  const Grid g = make_grid(1, 8, 64);  // h = 0.25
  const SampledField f = indicator(g, 13);
  const double a = 13 * 0.25;
  for (double p : {0.5, 1.5, 3.0}) {
    for (double q : {0.7, 1.0, 2.5}) {
      const double expect = std::pow(p / q, 1.0 / q) * std::pow(a, 1.0 / p);
      CHECK(lorentz_norm(f, {p, q}) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(lorentz_norm(f, {p, kInf}) == doctest::Approx(std::pow(a, 1.0 / p)).epsilon(1e-14));
  }
  CHECK(lorentz_norm(f, {kInf, kInf}) == 1.0);
  CHECK_THROWS_AS(lorentz_norm(f, {kInf, 2.0}), ValidationError);
  CHECK_THROWS_AS(lorentz_norm(f, {-1.0, 2.0}), ValidationError);
  CHECK(lorentz_norm(SampledField(g, Space::physical), {2.0, 1.0}) == 0.0);
}

TEST_CASE("L^{p,p} equals L^p") {
  const Grid g = make_grid(2, 2, 32);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SampledField f = white_noise_field(g, CounterRng(seed, 1), false);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      CHECK(lorentz_norm(f, {p, p}) == doctest::Approx(lp_norm(f, p)).epsilon(1e-12));
    }
    CHECK(lorentz_norm(f, {2, 2}) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  }
}

TEST_CASE("weak-type norm of |x|^{-1/2}") {
  const Grid g = make_grid(1, 1, 4096);
  const double h = g.spacing();
  const SampledField f = SampledField::sample(g, Space::physical, [&](std::span<const double> x) {
    return complex(std::abs(x[0]) < h ? 0.0 : std::pow(std::abs(x[0]), -0.5), 0.0);
  });
  CHECK(std::abs(lorentz_norm(f, {2, kInf}) - std::sqrt(2.0)) < 0.02 * std::sqrt(2.0));
}

TEST_CASE("dilation law") {
  // Smooth compact bump; f(2x) sampled on the same grid.
  auto bump = [](double x) { return std::abs(x) < 1 ? std::exp(-1.0 / (1 - x * x)) : 0.0; };
  const Grid g = make_grid(1, 2, 2048);
  const SampledField f = SampledField::sample(g, Space::physical,
                                              [&](std::span<const double> x) { return complex(bump(x[0])); });
  const SampledField f2 = SampledField::sample(
      g, Space::physical, [&](std::span<const double> x) { return complex(bump(2 * x[0])); });
  for (LorentzIndex idx : {LorentzIndex{2, 1}, LorentzIndex{3, 2}, LorentzIndex{1.5, kInf}}) {
    const double expect = std::pow(2.0, -1.0 / idx.p) * lorentz_norm(f, idx);
    CHECK(std::abs(lorentz_norm(f2, idx) - expect) < 0.005 * expect);
  }
}

TEST_CASE("nesting with the classical constant") {
  const Grid g = make_grid(1, 4, 256);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SampledField f = band_limited_field(g, CounterRng(seed, 3), 4.0);
    for (double p : {1.5, 3.0}) {
      const double q2 = 1.0, q1 = 4.0;
      CHECK(lorentz_norm(f, {p, q1}) <= lorentz_embedding_constant(p, q1, q2) * lorentz_norm(f, {p, q2}));
      CHECK(lorentz_norm(f, {p, kInf}) <= lorentz_embedding_constant(p, kInf, q2) * lorentz_norm(f, {p, q2}));
    }
  }
}

TEST_CASE("Hoelder pairing") {
  const Grid g = make_grid(1, 4, 64);
  const SampledField e = indicator(g, 8);  // measure 1
  const HolderPairing eq = holder_pairing(e, e, {2, 2});
  CHECK(eq.lhs == doctest::Approx(1.0));
  CHECK(eq.rhs == doctest::Approx(1.0));
  const SampledField r = white_noise_field(g, CounterRng(1, 0));
  const HolderPairing zero = holder_pairing(r, SampledField(g, Space::physical), {3, 1.5});
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SampledField f = band_limited_field(g, CounterRng(seed, 10), 3.0);
    const SampledField h = band_limited_field(g, CounterRng(seed, 11), 3.0);
    const HolderPairing hp = holder_pairing(f, h, {3, 1.5});
    CHECK_MESSAGE(hp.lhs <= hp.rhs * (1 + 1e-9), "seed " << seed);
  }
  CHECK_THROWS_AS(holder_pairing(e, e, {1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(holder_pairing(e, e, {2.0, 0.5}), ValidationError);
}

TEST_CASE("rearrangement csv") {
  const Grid g = make_grid(1, 4, 8);
  SampledField f(g, Space::physical);
  f[0] = 2.0;
  f[1] = 1.0;
  std::ostringstream out;
  write_rearrangement_csv(out, decreasing_rearrangement(f));
  CHECK(out.str() == "breakpoint,level\n1,2\n2,1\n");
}
