#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hlab {

/** A named experiment with string parameters and a seed. */
struct Scenario {
  std::string name;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 1;

  /** Typed parameter lookup with a default; throws ValidationError on bad values. */
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;

  bool operator==(const Scenario&) const = default;
};

const std::vector<std::string>& scenario_names();

/**
 * One asserted or reported quantity. `relation` is "<=" or ">=" against
 * `tolerance`, or "finite" for reported values.
 */
struct Metric {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
  bool verdict = false;

  bool operator==(const Metric&) const = default;
};

Metric metric_le(std::string label, double value, double tolerance);
Metric metric_ge(std::string label, double value, double tolerance);
/** Reported quantity; passes when finite. */
Metric metric_finite(std::string label, double value);

struct ExperimentReport {
  Scenario scenario;
  std::vector<Metric> metrics;
  /** Grid, window and parameter echo, in insertion order. */
  std::vector<std::pair<std::string, std::string>> environment;
  std::vector<std::pair<std::string, std::string>> provenance;

  bool pass() const;
  bool operator==(const ExperimentReport&) const = default;
};

struct ExponentRegion {
  int m = 2;
  int n = 1;
  double s = 1.2;
  std::vector<double> point;  // (1/p_1, ..., 1/p_m)
};

struct RegionMembership {
  bool inside_Q = false;
  bool inside_P = false;
  bool inside_hull = false;
};

/**
 * Q = (0, s/mn)^m and P = {r_j >= 0, 0 < sum r < 1} by direct inequality;
 * hull(Q, P) membership against the facets of the convex hull of the
 * closures (m <= 3), inclusive within 1e-9.
 */
RegionMembership region_check(const ExponentRegion& region);

/** Runs a scenario; ValidationError for unknown names or bad parameters. */
ExperimentReport run(const Scenario& scenario);

enum class Format { json, csv, human };
Format parse_format(const std::string& name);

std::string emit(const ExperimentReport& report, Format format);
/** Inverse of emit(json). */
ExperimentReport parse_report_json(const std::string& text);

}  // namespace hlab
