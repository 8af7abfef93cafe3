// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmeas: run, validate and demo measurement scenarios.
//
// Exit status: 0 when every verdict passes, 2 when any verdict fails,
// 1 on configuration or runtime errors.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qmeas/errors.hpp"
#include "qmeas/scenario.hpp"

namespace {

namespace sc = qmeas::scenario;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdictFailed = 2;

struct RunOptions {
  std::optional<std::string> format;
  std::optional<std::string> out;
};

sc::ReportFormat parse_format(const std::string& name) {
  return name == "csv" ? sc::ReportFormat::kCsv : sc::ReportFormat::kJson;
}

int execute(const sc::ScenarioConfig& config, const RunOptions& opts) {
  const sc::RunReport report = sc::run_scenario(config);
  const sc::ReportFormat format = opts.format ? parse_format(*opts.format) : config.output.format;
  const std::optional<std::string> path = opts.out ? opts.out : config.output.path;
  if (path) {
    sc::emit_report(report, format, *path);
  } else {
    std::cout << sc::render_report(report, format);
  }
  std::size_t failed = 0;
  for (const sc::Verdict& v : report.verdicts) {
    if (!v.pass) {
      std::cerr << "FAIL " << v.name << ": residual " << v.residual << " > tolerance "
                << v.tolerance << "\n";
      ++failed;
    }
  }
  if (path) {
    std::cerr << report.scenario_name << ": " << report.verdicts.size() - failed << "/"
              << report.verdicts.size() << " verdicts pass, report written to " << *path
              << "\n";
  }
  return failed == 0 ? kExitPass : kExitVerdictFailed;
}

void add_report_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--format", opts.format, "Report format (overrides the scenario file)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opts.out, "Write the report to this path instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmeas: identical-particle and measurement-model scenario runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qmeas 0.1.0");

  std::string run_path;
  RunOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Run a scenario file and emit its report");
  run->add_option("scenario", run_path, "Scenario file (JSON)")->required();
  add_report_options(run, run_opts);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", validate_path, "Scenario file (JSON)")->required();

  std::string demo_name;
  bool demo_list = false;
  RunOptions demo_opts;
  CLI::App* demo = app.add_subcommand("demo", "Run a bundled scenario");
  demo->add_option("name", demo_name, "Bundled scenario name");
  demo->add_flag("--list", demo_list, "List bundled scenarios");
  add_report_options(demo, demo_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*run) {
      return execute(sc::load_scenario(run_path), run_opts);
    }
    if (*validate) {
      const sc::ScenarioConfig config = sc::load_scenario(validate_path);
      std::cout << sc::scenario_to_json(config) << "\n";
      std::cerr << validate_path << ": valid " << sc::to_string(config.kind) << " scenario\n";
      return kExitPass;
    }
    if (demo_list || demo_name.empty()) {
      for (const std::string& name : sc::bundled_scenario_names()) {
        std::cout << name << "\n";
      }
      return demo_list ? kExitPass : kExitError;
    }
    const std::optional<std::string> text = sc::bundled_scenario_text(demo_name);
    if (!text) {
      std::cerr << "error: unknown demo '" << demo_name << "' (try `qmeas demo --list`)\n";
      return kExitError;
    }
    sc::ScenarioConfig config = sc::parse_scenario(*text);
    config.output.path.reset();
    return execute(config, demo_opts);
  } catch (const qmeas::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
  } catch (const qmeas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
  }
  return kExitError;
}
