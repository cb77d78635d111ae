// Copyright 2026 The lindblad-twophoton Authors
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

// Command-line front end: run a preset or a JSON scenario and write CSV.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twophoton/csv.hpp"
#include "twophoton/errors.hpp"
#include "twophoton/experiment.hpp"

int main(int argc, char** argv) {
  using namespace twophoton;

  CLI::App app{"Qubits coupled to a damped, driven oscillator: full and effective master equations"};
  app.set_version_flag("--version", version());

  std::string preset_name;
  std::string config_path;
  std::string output;
  int threads = 1;
  std::optional<int> full_every;
  std::string show;
  bool list = false;

  auto* p = app.add_option("--preset", preset_name, "Named scenario (fig1, fig2, fig3, fig4a, fig4b)");
  auto* c = app.add_option("--config", config_path, "JSON scenario file");
  p->excludes(c);
  app.add_option("-o,--output", output, "CSV path ('-' for stdout); overrides the scenario");
  app.add_option("-j,--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--full-every", full_every, "Solve the full model at every k-th point of each sweep axis");
  app.add_option("--show-preset", show, "Print a preset as JSON and exit");
  app.add_flag("--list-presets", list, "List preset names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (list) {
    for (const auto& n : preset_names()) std::cout << n << '\n';
    return kExitOk;
  }

  try {
    if (!show.empty()) {
      std::cout << dump_config(preset(show)) << '\n';
      return kExitOk;
    }
    if (preset_name.empty() && config_path.empty()) throw ConfigError("one of --preset or --config is required");
    ScenarioConfig cfg = preset_name.empty() ? load_config(config_path) : preset(preset_name);
    if (!output.empty()) cfg.output = output;
    RunOptions opt;
    opt.threads = threads;
    opt.full_every = full_every;
    opt.log = &std::cerr;
    const RunResult result = run_scenario(cfg, opt);
    if (cfg.output.empty() || cfg.output == "-") {
      write_csv(result.table, std::cout);
    } else {
      emit_csv(result.table, cfg.output);
      std::cerr << "wrote " << result.table.rows.size() << " rows to " << cfg.output << '\n';
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
