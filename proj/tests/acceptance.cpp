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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--quick] [--expect-fail N ...]
//
// --quick skips the full-model runs of criterion 3 (reported as SKIP).
// Criteria listed with --expect-fail still print FAIL; they only stop
// counting against the exit status, and an unexpected pass is an error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twophoton/dynamics.hpp"
#include "twophoton/errors.hpp"
#include "twophoton/model.hpp"
#include "twophoton/steady_state.hpp"

using namespace twophoton;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

// Conservation record of every dynamics run, checked by criterion 10.
struct RunRecord {
  std::string label;
  double trace_error;
  double hermiticity_error;
  double min_eigenvalue;
  std::size_t samples;
};
std::vector<RunRecord> g_runs;

bool g_quick = false;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

ModelParams base(int order, int n) {
  ModelParams p;
  p.order = order;
  p.n_qubits = n;
  p.g = 0.01;
  return p;
}

cplx beta_for(double abs_alpha, double phase = -std::numbers::pi / 2.0) {
  return cplx(0.0, 0.5) * std::polar(abs_alpha, phase);
}

Operator excited_mean(const HilbertSpace& s) {
  const QubitOps q = qubit_ops();
  Operator sum = Operator::zero(s);
  for (int i = 0; i < s.num_qubits(); ++i) sum = sum + embed(q.sigma_plus * q.sigma_minus, s.qubit_factor(i), s);
  return cplx(1.0 / s.num_qubits(), 0.0) * sum;
}

Operator jcorr_op(const HilbertSpace& s) {
  const CollectiveOps j = collective_ops(s);
  return j.jplus * j.jminus - cplx(s.num_qubits(), 0.0) * excited_mean(s);
}

Trajectory run(const std::string& label, const LindbladGenerator& gen, const DensityMatrix& rho0, double t_end,
               const std::vector<double>& times, EvolveOptions opt = {}) {
  if (opt.observables.empty()) {
    opt.observables.push_back({"rho_ee", excited_mean(gen.space())});
    if (gen.space().num_qubits() > 1) opt.observables.push_back({"Jcorr", jcorr_op(gen.space())});
  }
  Trajectory t = evolve(gen, rho0, t_end, times, opt);
  g_runs.push_back({label, t.max_trace_error(), t.max_hermiticity_error(), t.min_eigenvalue(), t.times.size()});
  return t;
}

DensityMatrix ground(int n) { return DensityMatrix::basis_state(HilbertSpace::qubits(n), 0); }

// Last time |x - target| exceeds tol, i.e. the start of the final window
// in which x stays within tol of target.
double settling_time(const std::vector<double>& t, const std::vector<double>& x, double target, double tol) {
  for (std::size_t i = x.size(); i-- > 0;) {
    if (std::abs(x[i] - target) > tol) return i + 1 < t.size() ? t[i + 1] : t.back();
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  double worst = 0.0;
  int points = 0;
  for (int order : {1, 2}) {
    for (double gamma_loc : {0.0, 1e-4}) {
      for (double a : {0.0, 0.5, 1.0, 2.0, 2.5}) {
        for (double pump : {0.0, 2e-4, 5e-4, 1e-3, 5e-3}) {
          for (double nbar : {0.0, 0.5, 1.0}) {
            ModelParams p = base(order, 1);
            p.beta = beta_for(a);
            p.pump = pump;
            p.nbar = nbar;
            p.gamma_loc = gamma_loc;
            const DensityMatrix num = steady_state(build_effective_generator(p));
            const DensityMatrix ref = one_qubit_steady_analytic(p).density_matrix();
            worst = std::max(worst, max_abs(num.matrix() - ref.matrix()));
            ++points;
          }
        }
      }
    }
  }
  return {worst < 1e-10 ? Status::Pass : Status::Fail,
          std::to_string(points) + " grid points, max elementwise |numeric - closed form| = " + fmt(worst) +
              " (tol 1e-10)"};
}

Outcome criterion2() {
  double worst = 0.0;
  int points = 0;
  for (int order : {1, 2}) {
    for (double pump : {0.0, 2e-4, 5e-4, 1e-3, 5e-3}) {
      for (double nbar : {0.0, 0.5, 1.0}) {
        ModelParams p = base(order, 2);
        p.pump = pump;
        p.nbar = nbar;
        p.gamma_loc = 1e-4;
        const double num = j_corr(steady_state(build_effective_generator(p)), 2);
        worst = std::max(worst, std::abs(num - two_qubit_jcorr_analytic(p).value));
        ++points;
      }
    }
  }
  return {worst < 1e-10 ? Status::Pass : Status::Fail,
          std::to_string(points) + " points (P x nbar x l, gamma_loc = 1e-4 k), max |J_corr - closed form| = " +
              fmt(worst) + " (tol 1e-10)"};
}

Outcome criterion3() {
  std::ostringstream os;
  bool ok = true;

  ModelParams p1 = base(1, 1), p2 = base(2, 1);
  p1.beta = p2.beta = 1.25;
  const double g1 = effective_params(p1).gamma;
  const double ratio_rates = effective_params(p2).gamma / g1;
  ok &= std::abs(ratio_rates - 26.0) < 1e-12;
  os << "gamma_2/gamma_1 = " << fmt(ratio_rates);

  // Settling time to 1% of the steady value, effective model from |g>.
  const double t_long = 40000.0;
  const auto dense = linear_samples(t_long, 16001);
  double settle[2];
  for (int i = 0; i < 2; ++i) {
    const ModelParams& p = i == 0 ? p1 : p2;
    const Trajectory t = run("c3 effective settle l=" + std::to_string(p.order), build_effective_generator(p), ground(1),
                             t_long, dense);
    const double target = one_qubit_steady_analytic(p).rho_ee;
    settle[i] = settling_time(t.times, t.real_series("rho_ee"), target, 0.01 * target);
  }
  const double ratio = settle[0] / settle[1];
  ok &= settle[0] < t_long && ratio >= 15.0 && ratio <= 40.0;
  os << "; 1% settling 1ph " << fmt(settle[0]) << "/k, 2ph " << fmt(settle[1]) << "/k, ratio " << fmt(ratio)
     << " (want [15, 40])";

  if (g_quick) {
    os << "; full model skipped";
    return {Status::Skip, os.str()};
  }
  const double t_end = 5.0 / g1;
  const auto times = linear_samples(t_end, 501);
  const int n_cut = 40;
  for (const ModelParams& p : {p1, p2}) {
    const auto start = std::chrono::steady_clock::now();
    const LindbladGenerator full = build_full_generator(p, n_cut);
    const DensityMatrix rho0 = tensor(ho_displaced_thermal(p.alpha(), p.nbar, n_cut), ground(1));
    const Trajectory tf = run("c3 full l=" + std::to_string(p.order), full, rho0, t_end, times);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const Trajectory te = run("c3 effective l=" + std::to_string(p.order), build_effective_generator(p), ground(1),
                              t_end, times);
    const auto a = tf.real_series("rho_ee");
    const auto b = te.real_series("rho_ee");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
    ok &= dev < 0.02 && seconds <= 600.0;
    os << "; full vs effective " << p.order << "ph max |d rho_ee| = " << fmt(dev) << " (tol 0.02, n_cut " << n_cut
       << ", " << fmt(seconds) << " s)";
  }
  return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome criterion4() {
  std::ostringstream os;
  bool ok = true;
  ModelParams p2 = base(2, 1);
  p2.beta = beta_for(2.5);
  const DensityMatrix s2 = steady_state(build_effective_generator(p2));
  const LargeDriveLimit lim = one_qubit_large_drive_limit(p2);
  const double x = p2.g;
  const double ee_formula = 1.0 / (2.0 + 64.0 * x * x);
  const double eg_formula = 4.0 * x / (1.0 + 32.0 * x * x);
  const double rel_ee = std::abs(s2(1, 1).real() - ee_formula) / ee_formula;
  const double rel_eg = std::abs(std::abs(s2(1, 0)) - eg_formula) / eg_formula;
  const bool ee_ok = rel_ee < 0.02;
  const bool eg_ok = rel_eg < 0.02;
  ok &= ee_ok && eg_ok && std::abs(lim.rho_ee - ee_formula) < 1e-15 && std::abs(std::abs(lim.rho_eg) - eg_formula) < 1e-15;
  os << "2ph |alpha|=2.5: rho_ee " << fmt(s2(1, 1).real()) << " vs " << fmt(ee_formula) << " (rel " << fmt(rel_ee)
     << (ee_ok ? ", ok" : ", FAIL") << "), |rho_eg| " << fmt(std::abs(s2(1, 0))) << " vs " << fmt(eg_formula) << " (rel "
     << fmt(rel_eg) << (eg_ok ? ", ok" : ", FAIL: limit drops the 1 in 1+4|alpha|^2") << ")";

  ModelParams p0 = base(2, 1);
  const DensityMatrix s0 = steady_state(build_effective_generator(p0));
  const bool zero_ok = std::abs(s0(1, 1)) < 1e-14 && std::abs(s0(1, 0)) < 1e-14;
  ok &= zero_ok;
  os << "; |alpha|=0: rho_ee " << fmt(std::abs(s0(1, 1))) << ", |rho_eg| " << fmt(std::abs(s0(1, 0)))
     << (zero_ok ? " (ok)" : " (FAIL)");

  ModelParams p1 = base(1, 1);
  p1.beta = beta_for(2.5);
  const DensityMatrix s1 = steady_state(build_effective_generator(p1));
  const bool one_ok = std::abs(s1(1, 1).real() - 0.5) / 0.5 < 0.02 && std::abs(s1(1, 0)) < 0.02;
  ok &= one_ok;
  os << "; 1ph |alpha|=2.5: rho_ee " << fmt(s1(1, 1).real()) << ", |rho_eg| " << fmt(std::abs(s1(1, 0)))
     << (one_ok ? " (ok)" : " (FAIL)");
  return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome criterion5() {
  std::ostringstream os;
  bool ok = true;
  double worst_zero = 0.0;
  double least_negative = -1.0;
  for (double nbar : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    ModelParams p = base(1, 2);
    p.gamma_loc = 1e-4;
    p.pump = 5e-4;
    p.nbar = nbar;
    worst_zero = std::max(worst_zero, std::abs(j_corr(steady_state(build_effective_generator(p)), 2)));
    if (nbar >= 0.5) {
      p.order = 2;
      least_negative = std::max(least_negative, j_corr(steady_state(build_effective_generator(p)), 2));
    }
  }
  ok = worst_zero < 1e-8 && least_negative < -1e-4;
  os << "P = 5e-4 k: 1ph max |J_corr| = " << fmt(worst_zero) << " (tol 1e-8); 2ph max J_corr for nbar >= 0.5 = "
     << fmt(least_negative) << " (want < -1e-4)";
  return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome criterion6() {
  std::ostringstream os;
  const double pump = 1.5 * 5e-4;
  const double gamma_loc = 1e-4;
  const double step = 0.05;
  std::vector<double> nbars;
  for (int i = 0; i <= 40; ++i) nbars.push_back(step * i);

  auto jc = [&](int order, double nbar) {
    ModelParams p = base(order, 4);
    p.pump = pump;
    p.gamma_loc = gamma_loc;
    p.nbar = nbar;
    return j_corr(steady_state(build_effective_generator(p)), 4);
  };

  std::vector<double> two;
  for (double n : nbars) two.push_back(jc(2, n));
  // P = gamma_2(nbar) + gamma_loc with gamma_2 = gamma_1 (1 + 2 nbar).
  const double gamma1 = 4e-4;
  const double predicted = ((pump - gamma_loc) / gamma1 - 1.0) / 2.0;
  std::size_t flip = 0;
  for (std::size_t i = 1; i < two.size(); ++i) {
    if (two[i - 1] > 0.0 && two[i] <= 0.0) {
      flip = i;
      break;
    }
  }
  const bool starts_positive = two.front() > 0.0;
  const bool ends_negative = two.back() < 0.0;
  const bool stays_negative =
      flip > 0 && std::all_of(two.begin() + static_cast<std::ptrdiff_t>(flip), two.end(), [](double v) { return v <= 0.0; });
  const bool bracketed = flip > 0 && nbars[flip - 1] - step <= predicted && predicted <= nbars[flip] + step;

  double min_one = std::numeric_limits<double>::infinity();
  for (double n : nbars) min_one = std::min(min_one, jc(1, n));

  // Long-time integration cross-check at both ends of the range.
  double lt_dev = 0.0;
  for (double nbar : {0.0, 2.0}) {
    ModelParams p = base(2, 4);
    p.pump = pump;
    p.gamma_loc = gamma_loc;
    p.nbar = nbar;
    const LindbladGenerator gen = build_effective_generator(p);
    EvolveOptions opt;
    opt.stop_at_steady = true;
    opt.steady_tol = 1e-10;
    const Trajectory t = run("c6 long-time nbar=" + fmt(nbar), gen, ground(4), 4e6, linear_samples(4e6, 4001), opt);
    if (!t.reached_steady_state) {
      lt_dev = std::numeric_limits<double>::infinity();
    } else {
      lt_dev = std::max(lt_dev, std::abs(t.records.back().at("Jcorr").real() - jc(2, nbar)));
    }
  }

  const bool ok = starts_positive && ends_negative && stays_negative && bracketed && min_one > 0.0 && lt_dev < 1e-6;
  os << "2ph N=4 P=1.5P*: J_corr(0) = " << fmt(two.front()) << ", J_corr(2) = " << fmt(two.back())
     << ", sign flip in (" << (flip ? fmt(nbars[flip - 1]) : "-") << ", " << (flip ? fmt(nbars[flip]) : "-")
     << "], predicted nbar = " << fmt(predicted) << " (grid step " << step << "); 1ph min J_corr on [0, 2] = "
     << fmt(min_one) << "; long-time vs null space |dJ_corr| = " << fmt(lt_dev);
  return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome criterion7() {
  std::ostringstream os;
  bool ok = true;
  int checked = 0;
  double worst_zero = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (int order : {1, 2}) {
      ModelParams p = base(order, n);
      p.gamma_loc = 1e-4;
      p.nbar = 0.5;
      const double threshold = effective_params(p).gamma + p.gamma_loc;
      for (double f : {0.5, 0.9, 1.0, 1.1, 1.5}) {
        p.pump = f * threshold;
        const double v = j_corr(steady_state(build_effective_generator(p)), n);
        if (f == 1.0) {
          worst_zero = std::max(worst_zero, std::abs(v));
          ok &= std::abs(v) < 1e-10;
        } else {
          ok &= (f > 1.0) ? v > 0.0 : v < 0.0;
        }
        ++checked;
      }
    }
  }
  os << checked << " points, N = 2..5, both l, nbar = 0.5, P/P* in {0.5, 0.9, 1, 1.1, 1.5}; max |J_corr| at P = P*: "
     << fmt(worst_zero);
  return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome criterion8() {
  std::ostringstream os;
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  double worst_super = 0.0;
  int mapped = 0;
  int attempts = 0;
  EvolveOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-13;
  const auto times = linear_samples(20000.0, 41);
  while (mapped < 10 && attempts < 1000) {
    ++attempts;
    ModelParams p = base(2, 2);
    p.beta = beta_for(2.5 * u(rng), 2.0 * std::numbers::pi * u(rng));
    p.nbar = 2.0 * u(rng);
    p.pump = 2e-3 * u(rng);
    p.gamma_loc = 2e-4 * u(rng);
    ModelParams m;
    try {
      m = map_two_photon_to_one_photon(p);
    } catch (const Unmappable&) {
      continue;
    }
    const LindbladGenerator g2 = build_effective_generator(p);
    const LindbladGenerator g1 = build_effective_generator(m);
    worst_super = std::max(worst_super, max_abs(liouvillian(g2) - liouvillian(g1)));
    const Trajectory t2 = run("c8 2ph point " + std::to_string(mapped), g2, ground(2), times.back(), times, opt);
    const Trajectory t1 = run("c8 mapped 1ph point " + std::to_string(mapped), g1, ground(2), times.back(), times, opt);
    for (const char* name : {"rho_ee", "Jcorr"}) {
      const auto a = t2.real_series(name);
      const auto b = t1.real_series(name);
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    ++mapped;
  }
  bool raised = false;
  double deficit = 0.0;
  ModelParams bad = base(2, 2);
  bad.beta = beta_for(1.0);
  bad.nbar = 0.5;
  bad.gamma_loc = 1e-4;
  try {
    map_two_photon_to_one_photon(bad);
  } catch (const Unmappable& e) {
    raised = true;
    deficit = e.deficit();
  }
  const bool ok = mapped == 10 && worst < 1e-8 && worst_super < 1e-12 && raised;
  os << mapped << " mappable points: max trajectory |d| (rho_ee, J_corr) = " << fmt(worst)
     << " (tol 1e-8), max superoperator |d| = " << fmt(worst_super) << "; P=0 point "
     << (raised ? "raises Unmappable, deficit " + fmt(deficit) : std::string("did NOT raise"));
  return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome criterion9() {
  std::ostringstream os;
  double worst_alt = 0.0;
  double worst_rt = 0.0;
  for (double n1 : {0.0, 0.1, 1.0, 5.0}) {
    for (double a : {0.0, 0.5, 2.5, 10.0}) {
      ModelParams p = base(2, 1);
      p.beta = beta_for(a);
      p.nbar = n1;
      const double n2 = effective_params(p).n;
      worst_alt = std::max(worst_alt, std::abs(n2_alternative(p) - n2));
      if (n1 > 0.0) {
        const double t_star = effective_temperature(temperature_from_nbar(n1), a);
        worst_rt = std::max(worst_rt, std::abs(bose_occupation(2.0 / t_star) - n2) / n2);
      }
    }
  }
  const bool ok = worst_alt < 1e-13 && worst_rt < 1e-12;
  os << "n_2 vs alternative form max |d| = " << fmt(worst_alt) << " (tol 1e-13); T* inversion max rel |d| = "
     << fmt(worst_rt) << " (tol 1e-12, consistent closed form)";
  return {ok ? Status::Pass : Status::Fail, os.str()};
}

Outcome criterion10() {
  std::ostringstream os;
  double trace = 0.0, herm = 0.0, eig = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  for (const auto& r : g_runs) {
    if (r.label.rfind("c3 effective settle", 0) == 0) continue;
    trace = std::max(trace, r.trace_error);
    herm = std::max(herm, r.hermiticity_error);
    eig = std::min(eig, r.min_eigenvalue);
    samples += r.samples;
  }
  std::size_t runs = 0;
  for (const auto& r : g_runs) runs += r.label.rfind("c3 effective settle", 0) == 0 ? 0 : 1;
  const bool ok = runs > 0 && trace < 1e-9 && herm < 1e-9 && eig > -1e-8;
  os << runs << " dynamics runs from criteria 3, 6, 8 (" << samples << " samples): max trace error " << fmt(trace)
     << ", max Hermiticity error " << fmt(herm) << ", min eigenvalue " << fmt(eig);
  if (g_quick) os << " (full-model runs skipped)";
  return {ok ? (g_quick ? Status::Skip : Status::Pass) : Status::Fail, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_flag("--quick", g_quick, "Skip the full-model runs");
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"analytic oracle, one qubit", criterion1},
      {"analytic oracle, two qubits", criterion2},
      {"relaxation with coherent drive", criterion3},
      {"large-drive endpoints", criterion4},
      {"zero-correlation line", criterion5},
      {"four-qubit sign change", criterion6},
      {"sign law", criterion7},
      {"two-photon to one-photon mapping", criterion8},
      {"consistency identities", criterion9},
      {"conservation", criterion10},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = expected.count(id) > 0;
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Skip ? "SKIP" : "FAIL";
    std::cout << tag << " criterion " << std::setw(2) << id << " [" << criteria[i].first << "] " << o.detail << " ["
              << fmt(seconds) << " s]";
    if (known && o.status == Status::Fail) std::cout << " (expected failure)";
    if (known && o.status == Status::Pass) std::cout << " (unexpected pass: remove from --expect-fail)";
    std::cout << std::endl;
    if ((o.status == Status::Fail) != known && o.status != Status::Skip) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
