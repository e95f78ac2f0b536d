#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hlab/error.hpp"
#include "hlab/lab.hpp"

using namespace hlab;

namespace {

ExperimentReport sample_report() {
  ExperimentReport r;
  r.scenario = {"verify-core", {{"grid_m", "32"}}, 7};
  r.metrics = {metric_le("a", 1e-9, 1e-8), metric_ge("b", 0.5, 1.0), metric_finite("c", 3.25),
               metric_finite("d", std::numeric_limits<double>::infinity())};
  r.environment = {{"grid_m", "32"}, {"half_width", "3"}};
  r.provenance = {{"generator", "hlab-splitmix-v1"}};
  return r;
}

// Closed-hull margin in 2-D: max over lambda of 1 - lambda - x1 - x2 + sum min(lambda l, x_j).
double margin(double x1, double x2, double l) {
  double best = -1e300;
  for (double lam : {0.0, 1.0, std::min(1.0, x1 / l), std::min(1.0, x2 / l)}) {
    best = std::max(best, 1.0 - lam - x1 - x2 + std::min(lam * l, x1) + std::min(lam * l, x2));
  }
  return best;
}

}  // namespace

TEST_CASE("metric verdicts") {
  CHECK(metric_le("x", 1.0, 1.0).verdict);
  CHECK_FALSE(metric_le("x", 1.1, 1.0).verdict);
  CHECK(metric_ge("x", 2.0, 1.0).verdict);
  CHECK_FALSE(metric_finite("x", std::nan("")).verdict);
  CHECK_FALSE(sample_report().pass());
  ExperimentReport ok = sample_report();
  ok.metrics.resize(1);
  CHECK(ok.pass());
}

TEST_CASE("region archetypes") {
  const RegionMembership a = region_check({2, 1, 1.2, {0.5, 0.5}});
  CHECK(a.inside_Q);
  CHECK(a.inside_hull);
  CHECK_FALSE(a.inside_P);
  CHECK(region_check({2, 1, 1.2, {0.3, 0.4}}).inside_P);
  const RegionMembership c = region_check({2, 1, 1.2, {0.9, 0.15}});
  CHECK_FALSE(c.inside_Q);
  CHECK_FALSE(c.inside_P);
  CHECK(c.inside_hull);
  CHECK_FALSE(region_check({2, 1, 1.2, {0.95, 0.5}}).inside_hull);
  CHECK_FALSE(region_check({2, 1, 1.2, {1.2, 0.0}}).inside_hull);
}

TEST_CASE("region against the closed-hull margin") {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double x1 = 0.0101 * i, x2 = 0.0099 * j;
      const double mg = margin(x1, x2, 0.6);
      if (std::abs(mg) < 1e-9) continue;
      CHECK(region_check({2, 1, 1.2, {x1, x2}}).inside_hull == (mg > 0));
    }
  }
}

TEST_CASE("region in three dimensions") {
  CHECK(region_check({3, 1, 1.5, {0.4, 0.4, 0.4}}).inside_hull);  // cube corner at s/mn = 0.5
  CHECK(region_check({3, 1, 1.5, {0.2, 0.2, 0.2}}).inside_P);
  CHECK_FALSE(region_check({3, 1, 1.5, {0.6, 0.6, 0.6}}).inside_hull);
}

TEST_CASE("json round trip") {
  const ExperimentReport r = sample_report();
  const ExperimentReport back = parse_report_json(emit(r, Format::json));
  CHECK(back == r);
  CHECK(emit(back, Format::json) == emit(r, Format::json));
}

TEST_CASE("csv has one row per metric") {
  const ExperimentReport r = sample_report();
  const std::string csv = emit(r, Format::csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.metrics.size()) + 1);
  CHECK(csv.rfind("label,value,tolerance,relation,verdict\n", 0) == 0);
}

TEST_CASE("empty report still echoes the environment") {
  ExperimentReport r;
  r.scenario.name = "region-check";
  r.environment = {{"m", "2"}};
  const std::string js = emit(r, Format::json);
  CHECK(js.find("\"m\"") != std::string::npos);
  CHECK(parse_report_json(js) == r);
  CHECK(emit(r, Format::csv) == "label,value,tolerance,relation,verdict\n");
  CHECK(emit(r, Format::human).find("region-check") != std::string::npos);
  CHECK(r.pass());
}

TEST_CASE("formats and names") {
  CHECK(parse_format("csv") == Format::csv);
  CHECK_THROWS_AS(parse_format("xml"), ValidationError);
  CHECK(scenario_names().size() == 9);
  CHECK_THROWS_AS(run(Scenario{"nope", {}, 1}), ValidationError);
  CHECK_THROWS_AS(run(Scenario{"sharpness-sweep", {{"preset", "case9"}}, 1}), ValidationError);
  CHECK_THROWS_AS(run(Scenario{"verify-core", {{"grid_m", "abc"}}, 1}), ValidationError);
}

TEST_CASE("fixed seed gives byte-identical reports") {
  const Scenario sc{"verify-core", {}, 1};
  CHECK(emit(run(sc), Format::json) == emit(run(sc), Format::json));
  const Scenario other{"verify-core", {}, 2};
  CHECK(emit(run(sc), Format::json) != emit(run(other), Format::json));
}

TEST_CASE("theorem1 smoke with a unit symbol and Gaussian inputs") {
  const ExperimentReport r = run(Scenario{"theorem1-ratio", {{"inputs", "gaussian"}, {"instances", "1"}}, 1});
  const auto it = std::find_if(r.metrics.begin(), r.metrics.end(), [](const Metric& m) { return m.label == "max_ratio_M"; });
  REQUIRE(it != r.metrics.end());
  CHECK(std::isfinite(it->value));
  CHECK(it->value > 0.0);
}
