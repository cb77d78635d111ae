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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twophoton/csv.hpp"
#include "twophoton/model.hpp"

namespace twophoton {

enum class Mode { Dynamics, Steady, Sweep, Validate };
enum class ModelKind { Effective, Full, Both };
enum class SweepAxis { AbsAlpha, Pump, Nbar };
enum class GridScale { Linear, Log };

struct GridSpec {
  SweepAxis axis = SweepAxis::Pump;
  // Either an explicit list or start/stop/count/scale.
  std::vector<double> values;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  GridScale scale = GridScale::Linear;

  std::vector<double> points() const;
};

std::string axis_name(SweepAxis axis);

// One scenario. The drive is given either as beta directly or as
// (|alpha|, arg alpha) and converted through alpha = -2 i beta / k.
struct ScenarioConfig {
  Mode mode = Mode::Dynamics;
  ModelKind model = ModelKind::Effective;
  std::vector<int> orders{1, 2};
  int n_qubits = 1;
  double g = 0.01;
  std::optional<cplx> beta;
  double abs_alpha = 0.0;
  double alpha_phase = 0.0;
  double nbar = 0.0;
  double pump = 0.0;
  double gamma_loc = 0.0;

  std::optional<int> n_cut;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double t_end = 0.0;
  int samples = 201;

  std::vector<GridSpec> sweep;
  int full_every = 5;
  std::string output;

  // Throws ConfigError.
  void validate() const;
  ModelParams params(int order) const;
};

// JSON object with the keys written by dump_config. Throws ConfigError with
// the line (parse errors) or field name (schema errors).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string dump_config(const ScenarioConfig& config);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
ScenarioConfig preset(const std::string& name);

struct RunOptions {
  int threads = 1;
  std::optional<int> full_every;  // overrides the config
  std::ostream* log = nullptr;    // validity reports and summaries
};

struct RunResult {
  Table table;
  std::vector<ValidityReport> validity;  // one per coupling order, at base parameters
  // Max |full - effective| over shared observables when both models ran.
  std::optional<double> max_full_deviation;
};

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSolver = 2;

}  // namespace twophoton
