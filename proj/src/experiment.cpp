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

#include "twophoton/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "twophoton/dynamics.hpp"
#include "twophoton/errors.hpp"
#include "twophoton/steady_state.hpp"

namespace twophoton {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// --- enum <-> string ----------------------------------------------------------

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Dynamics: return "dynamics";
    case Mode::Steady: return "steady";
    case Mode::Sweep: return "sweep";
    case Mode::Validate: return "validate";
  }
  return "";
}

std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::Effective: return "effective";
    case ModelKind::Full: return "full";
    case ModelKind::Both: return "both";
  }
  return "";
}

std::string scale_name(GridScale s) { return s == GridScale::Linear ? "linear" : "log"; }

template <typename E>
E parse_enum(const json& j, const std::string& field, std::initializer_list<std::pair<const char*, E>> table) {
  if (!j.is_string()) throw ConfigError("field '" + field + "': expected a string");
  const std::string s = j.get<std::string>();
  for (const auto& [name, value] : table) {
    if (s == name) return value;
  }
  throw ConfigError("field '" + field + "': unknown value '" + s + "'");
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError("field '" + field + "': expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("field '" + field + "': must be finite");
  return v;
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError("field '" + field + "': expected an integer");
  return j.get<int>();
}

GridSpec parse_grid(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError("field '" + field + "': expected an object");
  GridSpec g;
  bool has_axis = false;
  for (const auto& [key, value] : j.items()) {
    const std::string f = field + "." + key;
    if (key == "axis") {
      g.axis = parse_enum<SweepAxis>(value, f,
                                     {{"abs_alpha", SweepAxis::AbsAlpha}, {"P", SweepAxis::Pump}, {"nbar", SweepAxis::Nbar}});
      has_axis = true;
    } else if (key == "values") {
      if (!value.is_array()) throw ConfigError("field '" + f + "': expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) g.values.push_back(get_number(value[i], f));
    } else if (key == "start") {
      g.start = get_number(value, f);
    } else if (key == "stop") {
      g.stop = get_number(value, f);
    } else if (key == "count") {
      g.count = get_int(value, f);
    } else if (key == "scale") {
      g.scale = parse_enum<GridScale>(value, f, {{"linear", GridScale::Linear}, {"log", GridScale::Log}});
    } else {
      throw ConfigError("field '" + f + "': unknown field");
    }
  }
  if (!has_axis) throw ConfigError("field '" + field + ".axis': missing");
  return g;
}

json grid_to_json(const GridSpec& g) {
  json j;
  j["axis"] = axis_name(g.axis);
  if (!g.values.empty()) {
    j["values"] = g.values;
  } else {
    j["start"] = g.start;
    j["stop"] = g.stop;
    j["count"] = g.count;
    j["scale"] = scale_name(g.scale);
  }
  return j;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  const std::size_t end = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

// --- execution helpers --------------------------------------------------------

// Runs fn(0..n-1) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string order_tag(int order) { return std::to_string(order) + "ph"; }

// Observables on any space carrying n qubit factors (with or without the
// oscillator): mean excited population, rho_eg for one qubit, J_corr otherwise.
std::vector<Observable> qubit_observables(const HilbertSpace& space) {
  const int n = space.num_qubits();
  const QubitOps q = qubit_ops();
  const Operator excited = q.sigma_plus * q.sigma_minus;
  Operator pop_sum = Operator::zero(space);
  for (int i = 0; i < n; ++i) pop_sum = pop_sum + embed(excited, space.qubit_factor(i), space);
  std::vector<Observable> obs;
  obs.push_back({"rho_ee", cplx(1.0 / n, 0.0) * pop_sum});
  if (n == 1) {
    obs.push_back({"rho_eg", embed(q.sigma_minus, space.qubit_factor(0), space)});
  } else {
    const CollectiveOps j = collective_ops(space);
    obs.push_back({"Jcorr", j.jplus * j.jminus - pop_sum});
  }
  return obs;
}

DensityMatrix ground_qubits(int n) { return DensityMatrix::basis_state(HilbertSpace::qubits(n), 0); }

int cutoff_for(const ScenarioConfig& c, const ModelParams& p) {
  return c.n_cut ? *c.n_cut : default_fock_cutoff(p.alpha(), p.nbar);
}

DensityMatrix steady_for(const LindbladGenerator& gen, bool full) {
  const long d = gen.dim();
  SteadyStateOptions opt;
  if (!full && d * d <= opt.cap) return steady_state(gen, opt);
  return steady_state_sparse(gen);
}

// Steady-state values for one model/order at one parameter point, in the
// order of steady_observables().
std::vector<double> steady_values(const ScenarioConfig& c, const ModelParams& p, bool full) {
  const LindbladGenerator gen = full ? build_full_generator(p, cutoff_for(c, p)) : build_effective_generator(p);
  const DensityMatrix rho = steady_for(gen, full);
  std::vector<double> out;
  for (const auto& o : qubit_observables(rho.space())) {
    const cplx v = expectation(o.op, rho);
    out.push_back(o.name == "rho_eg" ? std::abs(v) : v.real());
  }
  if (p.n_qubits > 1) std::swap(out[0], out[1]);
  return out;
}

std::vector<std::string> steady_observables(int n_qubits) {
  if (n_qubits == 1) return {"rho_ee", "abs_rho_eg"};
  return {"Jcorr", "rho_ee"};
}

void apply_axis(ModelParams& p, SweepAxis axis, double value, double default_phase) {
  switch (axis) {
    case SweepAxis::AbsAlpha: {
      const cplx a = p.alpha();
      const double phase = std::abs(a) > 0.0 ? std::arg(a) : default_phase;
      p.beta = cplx(0.0, 0.5) * std::polar(value, phase) * p.k;
      break;
    }
    case SweepAxis::Pump: p.pump = value; break;
    case SweepAxis::Nbar: p.nbar = value; break;
  }
}

void log_validity(std::ostream* log, const std::string& label, const ValidityReport& r) {
  if (!log) return;
  *log << (r.verdict == Verdict::Violated ? "warning: " : "") << "validity " << label << ": epsilon=" << r.epsilon
       << " n_tilde=" << r.n_tilde << " bound_1ph=" << r.bound_one_photon << " bound_2ph=" << r.bound_two_photon
       << " P/k=" << r.pump_ratio << " verdict=" << to_string(r.verdict) << '\n';
}

double worst_bound(const ValidityReport& r) {
  return std::max({r.bound_one_photon, r.bound_two_photon, r.pump_ratio});
}

bool wants_effective(ModelKind m) { return m != ModelKind::Full; }
bool wants_full(ModelKind m) { return m != ModelKind::Effective; }

// --- modes ----------------------------------------------------------------------

RunResult run_dynamics(const ScenarioConfig& c, const RunOptions& opt, RunResult result) {
  const std::vector<double> times = linear_samples(c.t_end, c.samples);
  struct Job {
    bool full;
    int order;
  };
  std::vector<Job> jobs;
  for (bool full : {false, true}) {
    if (full ? !wants_full(c.model) : !wants_effective(c.model)) continue;
    for (int order : c.orders) jobs.push_back({full, order});
  }
  const bool many = c.n_qubits > 1;
  std::vector<std::vector<std::vector<double>>> series(jobs.size());

  parallel_for(jobs.size(), opt.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    const ModelParams p = c.params(job.order);
    EvolveOptions eo;
    eo.rel_tol = c.rel_tol;
    eo.abs_tol = c.abs_tol;
    Trajectory traj = [&] {
      if (job.full) {
        const int n_cut = cutoff_for(c, p);
        const LindbladGenerator gen = build_full_generator(p, n_cut);
        eo.observables = qubit_observables(gen.space());
        const DensityMatrix rho0 = tensor(ho_displaced_thermal(p.alpha(), p.nbar, n_cut), ground_qubits(p.n_qubits));
        return evolve(gen, rho0, c.t_end, times, eo);
      }
      const LindbladGenerator gen = build_effective_generator(p);
      eo.observables = qubit_observables(gen.space());
      return evolve(gen, ground_qubits(p.n_qubits), c.t_end, times, eo);
    }();
    series[i].push_back(traj.real_series("rho_ee"));
    if (many) series[i].push_back(traj.real_series("Jcorr"));
    if (opt.log) {
      std::ostringstream os;
      os << "dynamics " << (job.full ? "full " : "effective ") << order_tag(job.order)
         << ": steps=" << traj.accepted_steps << " rejected=" << traj.rejected_steps
         << " max_trace_error=" << traj.max_trace_error() << " min_eigenvalue=" << traj.min_eigenvalue() << '\n';
      *opt.log << os.str();
    }
  });

  // Columns grouped by model, then observable, then coupling order.
  const std::size_t per_model = c.orders.size();
  const std::vector<std::string> names = many ? std::vector<std::string>{"rho_ee", "Jcorr"}
                                              : std::vector<std::string>{"rho_ee"};
  std::vector<std::pair<std::size_t, std::size_t>> layout;  // (job, observable)
  Table& t = result.table;
  t.columns.push_back("t");
  for (std::size_t block = 0; block < jobs.size(); block += per_model) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      for (std::size_t i = block; i < block + per_model; ++i) {
        t.columns.push_back(names[k] + (jobs[i].full ? "_full_" : "_eff_") + order_tag(jobs[i].order));
        layout.emplace_back(i, k);
      }
    }
  }
  for (std::size_t r = 0; r < times.size(); ++r) {
    std::vector<double> row{times[r]};
    for (const auto& [i, k] : layout) row.push_back(series[i][k][r]);
    t.add_row(std::move(row));
  }

  if (wants_full(c.model) && wants_effective(c.model)) {
    double dev = 0.0;
    const std::size_t half = jobs.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      for (std::size_t k = 0; k < series[i].size(); ++k) {
        for (std::size_t r = 0; r < times.size(); ++r) {
          dev = std::max(dev, std::abs(series[i][k][r] - series[i + half][k][r]));
        }
      }
    }
    result.max_full_deviation = dev;
    if (opt.log) *opt.log << "max |full - effective| = " << dev << '\n';
  }
  return result;
}

RunResult run_points(const ScenarioConfig& c, const RunOptions& opt, RunResult result,
                     const std::vector<std::vector<double>>& grid, const std::vector<bool>& full_mask) {
  const bool eff = wants_effective(c.model);
  const bool full = wants_full(c.model);
  const std::size_t n_orders = c.orders.size();
  const std::size_t n_points = grid.empty() ? 1 : grid.size();

  std::vector<ModelParams> base;
  for (int order : c.orders) base.push_back(c.params(order));

  auto point_params = [&](std::size_t pt, std::size_t oi) {
    ModelParams p = base[oi];
    if (!grid.empty()) {
      for (std::size_t a = 0; a < c.sweep.size(); ++a) apply_axis(p, c.sweep[a].axis, grid[pt][a], c.alpha_phase);
    }
    return p;
  };

  struct Job {
    std::size_t point;
    std::size_t order_index;
    bool full;
  };
  std::vector<Job> jobs;
  for (std::size_t pt = 0; pt < n_points; ++pt) {
    for (std::size_t oi = 0; oi < n_orders; ++oi) {
      if (eff) jobs.push_back({pt, oi, false});
      if (full && full_mask[pt]) jobs.push_back({pt, oi, true});
    }
  }
  std::vector<std::vector<double>> values(jobs.size());
  parallel_for(jobs.size(), opt.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    values[i] = steady_values(c, point_params(job.point, job.order_index), job.full);
  });

  // Worst validity verdict over the grid.
  if (!grid.empty()) {
    for (std::size_t oi = 0; oi < n_orders; ++oi) {
      ValidityReport worst = validity(point_params(0, oi));
      for (std::size_t pt = 1; pt < n_points; ++pt) {
        const ValidityReport r = validity(point_params(pt, oi));
        if (worst_bound(r) > worst_bound(worst)) worst = r;
      }
      log_validity(opt.log, "worst over grid [" + order_tag(c.orders[oi]) + "]", worst);
    }
  }

  Table& t = result.table;
  for (const auto& g : c.sweep) t.columns.push_back(axis_name(g.axis));
  const std::vector<std::string> names = steady_observables(c.n_qubits);
  const std::size_t width = names.size();
  for (bool is_full : {false, true}) {
    if (is_full ? !full : !eff) continue;
    for (const auto& name : names) {
      for (int order : c.orders) t.columns.push_back(name + (is_full ? "_full_" : "_") + order_tag(order));
    }
  }

  std::vector<std::vector<double>> eff_vals(n_points, std::vector<double>(n_orders * width, kNaN));
  std::vector<std::vector<double>> full_vals(n_points, std::vector<double>(n_orders * width, kNaN));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& dst = jobs[i].full ? full_vals[jobs[i].point] : eff_vals[jobs[i].point];
    for (std::size_t k = 0; k < width; ++k) dst[k * n_orders + jobs[i].order_index] = values[i][k];
  }

  double dev = 0.0;
  bool have_dev = false;
  for (std::size_t pt = 0; pt < n_points; ++pt) {
    std::vector<double> row;
    if (!grid.empty()) row = grid[pt];
    if (eff) row.insert(row.end(), eff_vals[pt].begin(), eff_vals[pt].end());
    if (full) row.insert(row.end(), full_vals[pt].begin(), full_vals[pt].end());
    t.add_row(std::move(row));
    if (eff && full && full_mask[pt]) {
      for (std::size_t k = 0; k < eff_vals[pt].size(); ++k) {
        dev = std::max(dev, std::abs(eff_vals[pt][k] - full_vals[pt][k]));
        have_dev = true;
      }
    }
  }
  if (have_dev) {
    result.max_full_deviation = dev;
    if (opt.log) *opt.log << "max |full - effective| = " << dev << '\n';
  }
  return result;
}

RunResult run_sweep(const ScenarioConfig& c, const RunOptions& opt, RunResult result) {
  std::vector<std::vector<double>> axes;
  for (const auto& g : c.sweep) axes.push_back(g.points());
  std::vector<std::vector<double>> grid{{}};
  std::vector<std::vector<std::size_t>> index{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    std::vector<std::vector<std::size_t>> next_index;
    for (std::size_t r = 0; r < grid.size(); ++r) {
      for (std::size_t i = 0; i < axis.size(); ++i) {
        auto row = grid[r];
        row.push_back(axis[i]);
        auto idx = index[r];
        idx.push_back(i);
        next.push_back(std::move(row));
        next_index.push_back(std::move(idx));
      }
    }
    grid = std::move(next);
    index = std::move(next_index);
  }
  const int every = opt.full_every.value_or(c.full_every);
  std::vector<bool> mask(grid.size());
  for (std::size_t pt = 0; pt < grid.size(); ++pt) {
    mask[pt] = std::all_of(index[pt].begin(), index[pt].end(),
                           [every](std::size_t i) { return i % static_cast<std::size_t>(every) == 0; });
  }
  return run_points(c, opt, std::move(result), grid, mask);
}

RunResult run_validate(const ScenarioConfig& c, RunResult result) {
  Table& t = result.table;
  t.columns = {"l", "epsilon", "n_tilde", "bound_1ph", "bound_2ph", "pump_ratio", "verdict"};
  for (std::size_t i = 0; i < c.orders.size(); ++i) {
    const ValidityReport& r = result.validity[i];
    t.add_row({static_cast<double>(c.orders[i]), r.epsilon, r.n_tilde, r.bound_one_photon, r.bound_two_photon,
               r.pump_ratio, static_cast<double>(static_cast<int>(r.verdict))});
  }
  return result;
}

}  // namespace

// --- GridSpec / ScenarioConfig ------------------------------------------------------

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::AbsAlpha: return "abs_alpha";
    case SweepAxis::Pump: return "P";
    case SweepAxis::Nbar: return "nbar";
  }
  return "";
}

std::vector<double> GridSpec::points() const {
  if (!values.empty()) return values;
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] =
        scale == GridScale::Linear ? start + f * (stop - start) : start * std::pow(stop / start, f);
  }
  if (count >= 2) out.back() = stop;
  return out;
}

void ScenarioConfig::validate() const {
  if (orders.empty()) throw ConfigError("field 'l': at least one coupling order required");
  for (int o : orders) {
    if (o != 1 && o != 2) throw ConfigError("field 'l': coupling order must be 1 or 2");
  }
  if (n_qubits < 1) throw ConfigError("field 'N': must be >= 1");
  if (n_cut && *n_cut < 2) throw ConfigError("field 'n_cut': must be >= 2");
  if (!(rel_tol > 0.0)) throw ConfigError("field 'rel_tol': must be > 0");
  if (!(abs_tol > 0.0)) throw ConfigError("field 'abs_tol': must be > 0");
  if (full_every < 1) throw ConfigError("field 'full_every': must be >= 1");
  if (abs_alpha < 0.0) throw ConfigError("field 'abs_alpha': must be >= 0");
  for (const auto& [field, value] : {std::pair<const char*, double>{"g", g}, {"nbar", nbar}, {"P", pump},
                                     {"gamma_loc", gamma_loc}}) {
    if (!(value >= 0.0)) throw ConfigError(std::string("field '") + field + "': must be >= 0");
  }
  if (mode == Mode::Dynamics) {
    if (!(t_end > 0.0)) throw ConfigError("field 't_end': must be > 0 for dynamics");
    if (samples < 2) throw ConfigError("field 'samples': must be >= 2");
  }
  if (mode == Mode::Sweep && sweep.empty()) throw ConfigError("field 'sweep': sweep mode needs at least one axis");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const GridSpec& g = sweep[i];
    const std::string f = "sweep[" + std::to_string(i) + "]";
    if (g.values.empty()) {
      if (g.count < 2) throw ConfigError("field '" + f + ".count': grid needs at least 2 points");
      if (g.scale == GridScale::Log && !(g.start > 0.0 && g.stop > 0.0)) {
        throw ConfigError("field '" + f + "': log grid needs positive bounds");
      }
    } else if (g.values.size() < 2) {
      throw ConfigError("field '" + f + ".values': grid needs at least 2 points");
    }
    for (double v : g.points()) {
      if (v < 0.0) throw ConfigError("field '" + f + "': " + axis_name(g.axis) + " values must be >= 0");
    }
  }
  for (int o : orders) {
    try {
      params(o).validate();
    } catch (const InvalidModel& e) {
      throw ConfigError(e.what());
    }
  }
}

ModelParams ScenarioConfig::params(int order) const {
  ModelParams p;
  p.order = order;
  p.n_qubits = n_qubits;
  p.g = g;
  p.k = 1.0;
  p.beta = beta ? *beta : cplx(0.0, 0.5) * std::polar(abs_alpha, alpha_phase) * p.k;
  p.nbar = nbar;
  p.pump = pump;
  p.gamma_loc = gamma_loc;
  return p;
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ScenarioConfig c;
  bool has_alpha = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") {
      c.mode = parse_enum<Mode>(value, key,
                                {{"dynamics", Mode::Dynamics}, {"steady", Mode::Steady}, {"sweep", Mode::Sweep},
                                 {"validate", Mode::Validate}});
    } else if (key == "model") {
      c.model = parse_enum<ModelKind>(
          value, key, {{"effective", ModelKind::Effective}, {"full", ModelKind::Full}, {"both", ModelKind::Both}});
    } else if (key == "l") {
      c.orders.clear();
      if (value.is_array()) {
        for (const auto& v : value) c.orders.push_back(get_int(v, key));
      } else {
        c.orders.push_back(get_int(value, key));
      }
    } else if (key == "N") {
      c.n_qubits = get_int(value, key);
    } else if (key == "g") {
      c.g = get_number(value, key);
    } else if (key == "beta") {
      if (!value.is_array() || value.size() != 2) throw ConfigError("field 'beta': expected [re, im]");
      c.beta = cplx(get_number(value[0], key), get_number(value[1], key));
    } else if (key == "abs_alpha") {
      c.abs_alpha = get_number(value, key);
      has_alpha = true;
    } else if (key == "alpha_phase") {
      c.alpha_phase = get_number(value, key);
      has_alpha = true;
    } else if (key == "nbar") {
      c.nbar = get_number(value, key);
    } else if (key == "P") {
      c.pump = get_number(value, key);
    } else if (key == "gamma_loc") {
      c.gamma_loc = get_number(value, key);
    } else if (key == "n_cut") {
      if (!value.is_null()) c.n_cut = get_int(value, key);
    } else if (key == "rel_tol") {
      c.rel_tol = get_number(value, key);
    } else if (key == "abs_tol") {
      c.abs_tol = get_number(value, key);
    } else if (key == "t_end") {
      c.t_end = get_number(value, key);
    } else if (key == "samples") {
      c.samples = get_int(value, key);
    } else if (key == "sweep") {
      if (!value.is_array()) throw ConfigError("field 'sweep': expected an array of axes");
      for (std::size_t i = 0; i < value.size(); ++i) {
        c.sweep.push_back(parse_grid(value[i], "sweep[" + std::to_string(i) + "]"));
      }
    } else if (key == "full_every") {
      c.full_every = get_int(value, key);
    } else if (key == "output") {
      if (!value.is_string()) throw ConfigError("field 'output': expected a string");
      c.output = value.get<std::string>();
    } else {
      throw ConfigError("field '" + key + "': unknown field");
    }
  }
  if (c.beta && has_alpha) throw ConfigError("field 'beta': give either beta or abs_alpha/alpha_phase, not both");
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ScenarioConfig& c) {
  json j;
  j["mode"] = mode_name(c.mode);
  j["model"] = model_name(c.model);
  j["l"] = c.orders;
  j["N"] = c.n_qubits;
  j["g"] = c.g;
  if (c.beta) {
    j["beta"] = {c.beta->real(), c.beta->imag()};
  } else {
    j["abs_alpha"] = c.abs_alpha;
    j["alpha_phase"] = c.alpha_phase;
  }
  j["nbar"] = c.nbar;
  j["P"] = c.pump;
  j["gamma_loc"] = c.gamma_loc;
  if (c.n_cut) j["n_cut"] = *c.n_cut;
  j["rel_tol"] = c.rel_tol;
  j["abs_tol"] = c.abs_tol;
  if (c.mode == Mode::Dynamics) {
    j["t_end"] = c.t_end;
    j["samples"] = c.samples;
  }
  if (!c.sweep.empty()) {
    json axes = json::array();
    for (const auto& g : c.sweep) axes.push_back(grid_to_json(g));
    j["sweep"] = axes;
    j["full_every"] = c.full_every;
  }
  if (!c.output.empty()) j["output"] = c.output;
  return j.dump(2);
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4a", "fig4b"}; }

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.g = 0.01;
  c.orders = {1, 2};
  if (name == "fig1") {
    c.mode = Mode::Dynamics;
    c.model = ModelKind::Both;
    c.n_qubits = 1;
    c.beta = cplx(1.25, 0.0);
    c.n_cut = 40;
    c.t_end = 12500.0;  // 5 / gamma_1
    c.samples = 501;
  } else if (name == "fig2") {
    c.mode = Mode::Sweep;
    c.model = ModelKind::Both;
    c.n_qubits = 1;
    c.sweep = {GridSpec{SweepAxis::AbsAlpha, {}, 0.0, 2.5, 26, GridScale::Linear}};
  } else if (name == "fig3") {
    c.mode = Mode::Sweep;
    c.n_qubits = 2;
    c.beta = cplx(0.0, 0.0);
    c.gamma_loc = 1e-4;
    c.sweep = {GridSpec{SweepAxis::Nbar, {}, 0.0, 2.0, 40, GridScale::Linear},
               GridSpec{SweepAxis::Pump, {}, 0.0, 2.45e-3, 50, GridScale::Linear}};
  } else if (name == "fig4a") {
    c.mode = Mode::Sweep;
    c.n_qubits = 4;
    c.beta = cplx(0.0, 0.0);
    c.gamma_loc = 1e-4;
    c.nbar = 1.0;
    c.sweep = {GridSpec{SweepAxis::Pump, {}, 0.0, 2e-3, 41, GridScale::Linear}};
  } else if (name == "fig4b") {
    c.mode = Mode::Sweep;
    c.n_qubits = 4;
    c.beta = cplx(0.0, 0.0);
    c.gamma_loc = 1e-4;
    c.sweep = {GridSpec{SweepAxis::Pump, {5e-4, 7.5e-4}, 0.0, 0.0, 0, GridScale::Linear},
               GridSpec{SweepAxis::Nbar, {}, 0.0, 2.0, 41, GridScale::Linear}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.output = name + ".csv";
  c.validate();
  return c;
}

RunResult run_scenario(const ScenarioConfig& c, const RunOptions& opt) {
  c.validate();
  if (opt.full_every && *opt.full_every < 1) throw ConfigError("--full-every must be >= 1");
  RunResult result;
  for (int order : c.orders) {
    result.validity.push_back(validity(c.params(order)));
    log_validity(opt.log, "[" + order_tag(order) + "]", result.validity.back());
  }
  switch (c.mode) {
    case Mode::Dynamics: return run_dynamics(c, opt, std::move(result));
    case Mode::Steady: return run_points(c, opt, std::move(result), {}, {true});
    case Mode::Sweep: return run_sweep(c, opt, std::move(result));
    case Mode::Validate: return run_validate(c, std::move(result));
  }
  return result;
}

}  // namespace twophoton
