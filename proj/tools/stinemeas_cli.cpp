// Copyright 2026 The stinemeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stinemeas/acceptance.hpp"
#include "stinemeas/scenarios.hpp"

namespace fs = std::filesystem;
namespace sm = stinemeas;

namespace {

constexpr int kExitSchema = 1;
constexpr int kExitGuard = 2;
constexpr int kExitOther = 3;

sm::json read_config(const std::string& path) {
  std::ifstream in(path);
  sm::require(static_cast<bool>(in), "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return sm::json::parse(ss.str());
  } catch (const sm::json::parse_error& e) {
    throw sm::InvalidArgument(std::string("malformed JSON in '") + path + "': " + e.what());
  }
}

fs::path sibling(const fs::path& primary, const std::string& table) {
  fs::path p = primary;
  p.replace_filename(primary.stem().string() + "_" + table + primary.extension().string());
  return p;
}

// Writes all files to temporaries first, then renames them into place.
void write_all(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> tmps;
  for (const auto& [path, body] : files) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    if (!out || !(out << body) || !(out.flush())) {
      for (const auto& t : tmps) fs::remove(t);
      fs::remove(tmp);
      throw sm::Error("cannot write '" + path.string() + "'");
    }
    tmps.push_back(tmp);
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(tmps[i], files[i].first);
}

int run(const std::string& config_path, const std::string& output, std::optional<std::uint64_t> seed, bool verbose) {
  const sm::json raw = read_config(config_path);
  sm::ScenarioConfig cfg = sm::parse_scenario_config(raw);
  if (seed) cfg.seed = *seed;
  if (!output.empty()) cfg.output_path = output;
  (void)sm::run_scenario(cfg, true);

  const auto start = std::chrono::steady_clock::now();
  const sm::ScenarioOutput out = sm::run_scenario(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<std::pair<fs::path, std::string>> files;
  if (cfg.format == sm::OutputFormat::json) {
    const std::string body = sm::to_json_value(cfg, out).dump(2) + "\n";
    if (cfg.output_path) files.emplace_back(*cfg.output_path, body);
    else std::cout << body;
  } else {
    for (std::size_t i = 0; i < out.tables.size(); ++i) {
      const std::string body = sm::to_csv(out.tables[i]);
      if (cfg.output_path) {
        const fs::path primary(*cfg.output_path);
        files.emplace_back(i == 0 ? primary : sibling(primary, out.tables[i].name), body);
      } else {
        std::cout << (i ? "\n" : "") << body;
      }
    }
  }
  if (cfg.output_path) {
    sm::json outputs = sm::json::array();
    for (const auto& f : files) outputs.push_back(f.first.string());
    sm::json manifest{{"config", raw},
                      {"scenario", cfg.scenario},
                      {"seed", cfg.seed},
                      {"library_version", sm::kVersion},
                      {"wall_time_seconds", wall},
                      {"outputs", outputs}};
    fs::path mpath(*cfg.output_path);
    mpath += ".manifest.json";
    files.emplace_back(mpath, manifest.dump(2) + "\n");
    write_all(files);
  }
  if (verbose) {
    std::cerr << "scenario " << cfg.scenario << " seed " << cfg.seed << " finished in " << wall << " s\n";
    for (const auto& f : files) std::cerr << "wrote " << f.first.string() << "\n";
  }
  return 0;
}

int validate(const std::string& config_path) {
  const sm::ScenarioConfig cfg = sm::parse_scenario_config(read_config(config_path));
  (void)sm::run_scenario(cfg, true);
  std::cout << "valid " << cfg.scenario << " config\n";
  return 0;
}

int suite() {
  int failed = 0;
  for (const auto& spec : sm::acceptance_criteria()) {
    const auto r = sm::run_criterion(spec);
    std::cout << sm::format_result(r) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const sm::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const sm::json::exception& e) {
    std::cerr << "error: invalid config: " << e.what() << "\n";
    return kExitSchema;
  } catch (const sm::NumericalGuard& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stinespring measurement simulator"};
  app.require_subcommand(1);

  std::string config, output;
  std::uint64_t seed = 0;
  bool verbose = false;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario from a JSON config");
  run_cmd->add_option("--config", config, "Scenario config path")->required();
  run_cmd->add_option("--output", output, "Output path (overrides the config)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Seed (overrides the config)");
  run_cmd->add_flag("--verbose", verbose, "Report timing and written files");

  std::string vconfig;
  auto* val_cmd = app.add_subcommand("validate", "Check a config without running it");
  val_cmd->add_option("--config", vconfig, "Scenario config path")->required();

  auto* suite_cmd = app.add_subcommand("suite", "Run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitSchema;
  }

  if (run_cmd->parsed())
    return guarded([&] {
      return run(config, output, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt, verbose);
    });
  if (val_cmd->parsed()) return guarded([&] { return validate(vconfig); });
  if (suite_cmd->parsed()) return guarded(suite);
  return kExitSchema;
}
