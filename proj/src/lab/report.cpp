#include <cmath>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hlab/error.hpp"
#include "hlab/lab.hpp"

namespace hlab {

namespace {

using ojson = nlohmann::ordered_json;

// JSON has no inf/nan; they travel as strings.
ojson number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double json_number(const ojson& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw ValidationError("bad number in report: " + s);
}

std::string format_number(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

// csv cell quoting for labels that may carry commas.
std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::pair<std::string, std::string>> pairs_from(const ojson& j) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.emplace_back(it.key(), it.value().get<std::string>());
  return out;
}

}  // namespace

double Scenario::number(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("parameter " + key + " = '" + it->second + "' is not a number");
  }
}

int Scenario::integer(const std::string& key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::floor(v)) throw ValidationError("parameter " + key + " must be an integer");
  return static_cast<int>(v);
}

std::string Scenario::text(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Metric metric_le(std::string label, double value, double tolerance) {
  return {std::move(label), value, tolerance, "<=", value <= tolerance};
}

Metric metric_ge(std::string label, double value, double tolerance) {
  return {std::move(label), value, tolerance, ">=", value >= tolerance};
}

Metric metric_finite(std::string label, double value) {
  return {std::move(label), value, 0.0, "finite", std::isfinite(value)};
}

bool ExperimentReport::pass() const {
  for (const Metric& m : metrics) {
    if (!m.verdict) return false;
  }
  return true;
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "human") return Format::human;
  throw ValidationError("unknown format '" + name + "' (json, csv, human)");
}

std::string emit(const ExperimentReport& report, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::json: {
      ojson j;
      j["scenario"]["name"] = report.scenario.name;
      j["scenario"]["seed"] = report.scenario.seed;
      j["scenario"]["params"] = ojson::object();
      for (const auto& [k, v] : report.scenario.params) j["scenario"]["params"][k] = v;
      j["metrics"] = ojson::array();
      for (const Metric& m : report.metrics) {
        j["metrics"].push_back({{"label", m.label},
                                {"value", number_json(m.value)},
                                {"tolerance", number_json(m.tolerance)},
                                {"relation", m.relation},
                                {"verdict", m.verdict}});
      }
      j["environment"] = ojson::object();
      for (const auto& [k, v] : report.environment) j["environment"][k] = v;
      j["provenance"] = ojson::object();
      for (const auto& [k, v] : report.provenance) j["provenance"][k] = v;
      j["pass"] = report.pass();
      out << j.dump(2) << '\n';
      break;
    }
    case Format::csv:
      out << "label,value,tolerance,relation,verdict\n";
      for (const Metric& m : report.metrics) {
        out << csv_cell(m.label) << ',' << format_number(m.value) << ',' << format_number(m.tolerance) << ','
            << m.relation << ',' << (m.verdict ? "pass" : "fail") << '\n';
      }
      break;
    case Format::human: {
      out << "scenario " << report.scenario.name << "  seed " << report.scenario.seed << '\n';
      for (const auto& [k, v] : report.environment) out << "  " << std::left << std::setw(20) << k << ' ' << v << '\n';
      out << std::left << std::setw(48) << "metric" << std::right << std::setw(24) << "value" << std::setw(8)
          << "rel" << std::setw(24) << "tolerance" << std::setw(8) << "verdict" << '\n';
      for (const Metric& m : report.metrics) {
        out << std::left << std::setw(48) << m.label << std::right << std::setw(24) << std::setprecision(10) << m.value
            << std::setw(8) << m.relation << std::setw(24) << m.tolerance << std::setw(8)
            << (m.verdict ? "PASS" : "FAIL") << '\n';
      }
      out << "overall " << (report.pass() ? "PASS" : "FAIL") << '\n';
      break;
    }
  }
  return out.str();
}

ExperimentReport parse_report_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("report is not valid JSON: ") + e.what());
  }
  ExperimentReport r;
  r.scenario.name = j.at("scenario").at("name").get<std::string>();
  r.scenario.seed = j.at("scenario").at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : pairs_from(j.at("scenario").at("params"))) r.scenario.params[k] = v;
  for (const auto& m : j.at("metrics")) {
    r.metrics.push_back({m.at("label").get<std::string>(), json_number(m.at("value")), json_number(m.at("tolerance")),
                         m.at("relation").get<std::string>(), m.at("verdict").get<bool>()});
  }
  r.environment = pairs_from(j.at("environment"));
  r.provenance = pairs_from(j.at("provenance"));
  return r;
}

}  // namespace hlab
