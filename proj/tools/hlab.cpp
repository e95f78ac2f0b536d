#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hlab/error.hpp"
#include "hlab/lab.hpp"

namespace {

/// key = value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hlab::ValidationError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw hlab::ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilinear multiplier lab"};
  std::string name, config, out_path, format = "human", preset;
  std::optional<int> grid_m;
  std::optional<double> half_width;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  bool dump = false;
  app.add_option("scenario", name, "Scenario name")->required()->check(CLI::IsMember(hlab::scenario_names()));
  app.add_option("--config", config, "key = value file; flags override it");
  app.add_option("--grid-m", grid_m, "Points per axis");
  app.add_option("--half-width", half_width, "Half-width L of the periodic box");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--preset", preset, "Preset (sharpness-sweep: case1, case2, phase)");
  app.add_option("--out", out_path, "Report path (stdout when absent)");
  app.add_option("--format", format, "json, csv or human")->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--set", sets, "Extra scenario parameter key=value");
  app.add_flag("--dump-fields", dump, "Write fields and curves next to the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    hlab::Scenario sc;
    sc.name = name;
    if (!config.empty()) sc.params = read_config(config);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw hlab::ValidationError("--set expects key=value, got '" + kv + "'");
      sc.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (grid_m) sc.params["grid_m"] = std::to_string(*grid_m);
    if (half_width) {
      std::ostringstream os;
      os.precision(17);
      os << *half_width;
      sc.params["half_width"] = os.str();
    }
    if (!preset.empty()) sc.params["preset"] = preset;
    if (seed) {
      sc.seed = *seed;
    } else if (auto it = sc.params.find("seed"); it != sc.params.end()) {
      sc.seed = std::stoull(it->second);
      sc.params.erase(it);
    }
    if (dump) {
      const std::filesystem::path base = out_path.empty() ? std::filesystem::path(name) : std::filesystem::path(out_path);
      const std::filesystem::path dir = base.parent_path() / (base.stem().string() + "_fields");
      std::filesystem::create_directories(dir);
      sc.params["dump_dir"] = dir.string();
    }

    const hlab::ExperimentReport rep = hlab::run(sc);
    const std::string text = hlab::emit(rep, hlab::parse_format(format));
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      out << text;
      if (!out) throw hlab::Error("cannot write '" + out_path + "'");
    }
    return rep.pass() ? 0 : 1;
  } catch (const hlab::ValidationError& e) {
    std::cerr << "hlab: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hlab: bad number in configuration (" << e.what() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hlab: " << e.what() << "\n";
    return 2;
  }
}
