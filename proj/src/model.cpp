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

#include "twophoton/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twophoton/errors.hpp"

namespace twophoton {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void require_two_photon(const ModelParams& p, const char* what) {
  p.validate();
  if (p.order != 2) throw InvalidModel(std::string(what) + ": defined for the two-photon model only");
}

cplx ipow(cplx z, int n) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

void ModelParams::validate() const {
  std::ostringstream os;
  if (order != 1 && order != 2) os << "order must be 1 or 2 (got " << order << "); ";
  if (n_qubits < 1) os << "n_qubits must be >= 1; ";
  if (!finite_nonneg(g)) os << "g must be finite and >= 0; ";
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) os << "beta must be finite; ";
  if (!(std::isfinite(k) && k > 0.0)) os << "k must be finite and > 0; ";
  if (!finite_nonneg(nbar)) os << "nbar must be finite and >= 0; ";
  if (!finite_nonneg(pump)) os << "P must be finite and >= 0; ";
  if (!finite_nonneg(gamma_loc)) os << "gamma_loc must be finite and >= 0; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw InvalidModel("ModelParams: " + msg.substr(0, msg.size() - 2));
}

double ModelParams::nbar_qubit() const { return order == 1 ? nbar : nbar_double_frequency(nbar); }

double nbar_double_frequency(double nbar) { return nbar * nbar / (1.0 + 2.0 * nbar); }

double bose_occupation(double x) { return 1.0 / std::expm1(x); }

EffectiveParams effective_params(const ModelParams& p) {
  p.validate();
  EffectiveParams e{};
  e.alpha = p.alpha();
  const double gamma1 = 4.0 * p.g * p.g / p.k;
  const double n1 = p.nbar;
  if (p.order == 1) {
    e.gamma = gamma1;
    e.n = n1;
    e.t_star_nbar = nbar_double_frequency(n1);
  } else {
    const double a2 = std::norm(e.alpha);
    const double s = 1.0 + 2.0 * n1 + 4.0 * a2;
    e.gamma = gamma1 * s;
    e.n = n1 * (n1 + 4.0 * a2) / s;
    e.t_star_nbar = e.n;
  }
  return e;
}

double n2_alternative(const ModelParams& p) {
  require_two_photon(p, "n2_alternative");
  const double n1 = p.nbar;
  const double a2 = std::norm(p.alpha());
  return nbar_double_frequency(n1) +
         4.0 * n1 * a2 * (1.0 + n1) / ((1.0 + 2.0 * n1 + 4.0 * a2) * (1.0 + 2.0 * n1));
}

double effective_temperature_nbar(const ModelParams& p) {
  require_two_photon(p, "effective_temperature_nbar");
  return effective_params(p).n;
}

double temperature_from_nbar(double nbar) {
  if (!finite_nonneg(nbar)) throw InvalidModel("temperature_from_nbar: nbar must be >= 0");
  return nbar == 0.0 ? 0.0 : 1.0 / std::log1p(1.0 / nbar);
}

double effective_temperature(double temperature, double abs_alpha) {
  if (!finite_nonneg(temperature) || !finite_nonneg(abs_alpha)) {
    throw InvalidModel("effective_temperature: arguments must be >= 0");
  }
  if (temperature == 0.0) return 0.0;
  // exp(2 hbar omega / k_B T*) = E (E + 4|a|^2 (E - 1)) / (1 + 4|a|^2 (E - 1)),
  // E = exp(hbar omega / k_B T).
  const double em1 = std::expm1(1.0 / temperature);
  const double e = em1 + 1.0;
  const double drive = 4.0 * abs_alpha * abs_alpha * em1;
  const double log_ratio = std::log(e) + std::log((e + drive) / (1.0 + drive));
  return 2.0 / log_ratio;
}

LindbladGenerator build_full_generator(const ModelParams& p, int n_cut) {
  p.validate();
  if (n_cut < 2) throw InvalidDimension("build_full_generator: n_cut must be >= 2");
  const int need = required_fock_cutoff(p.alpha(), p.nbar);
  if (need > n_cut) {
    std::ostringstream os;
    os << "build_full_generator: n_cut " << n_cut << " too small for |alpha|^2 = " << std::norm(p.alpha())
       << ", nbar = " << p.nbar << "; need n_cut >= " << need;
    throw TruncationInsufficient(os.str(), need);
  }

  const HilbertSpace space = HilbertSpace::oscillator_qubits(n_cut, p.n_qubits);
  const Operator a = embed(annihilation(n_cut), 0, space);
  const Operator ad = a.adjoint();
  const CollectiveOps j = collective_ops(space);
  const Operator al = pow(a, p.order);

  Operator h = p.g * (al * j.jplus + al.adjoint() * j.jminus);
  h = h + (std::conj(p.beta) * a + p.beta * ad);

  std::vector<Jump> jumps;
  jumps.push_back({p.k * (1.0 + p.nbar), a});
  jumps.push_back({p.k * p.nbar, ad});
  const QubitOps q = qubit_ops();
  const double nq = p.nbar_qubit();
  for (int i = 0; i < p.n_qubits; ++i) {
    const std::size_t f = space.qubit_factor(i);
    jumps.push_back({p.gamma_loc * (1.0 + nq), embed(q.sigma_minus, f, space)});
    jumps.push_back({p.gamma_loc * nq + p.pump, embed(q.sigma_plus, f, space)});
  }
  return LindbladGenerator(std::move(h), std::move(jumps));
}

LindbladGenerator build_effective_generator(const ModelParams& p) {
  const EffectiveParams e = effective_params(p);
  const HilbertSpace space = HilbertSpace::qubits(p.n_qubits);
  const CollectiveOps j = collective_ops(space);
  const cplx drive = ipow(e.alpha, p.order);
  Operator h = p.g * (drive * j.jplus + std::conj(drive) * j.jminus);

  std::vector<Jump> jumps;
  jumps.push_back({e.gamma * e.n, j.jplus});
  jumps.push_back({e.gamma * (1.0 + e.n), j.jminus});
  const QubitOps q = qubit_ops();
  const double nq = p.nbar_qubit();
  for (int i = 0; i < p.n_qubits; ++i) {
    jumps.push_back({p.gamma_loc * (1.0 + nq), embed(q.sigma_minus, static_cast<std::size_t>(i), space)});
    jumps.push_back({p.gamma_loc * nq + p.pump, embed(q.sigma_plus, static_cast<std::size_t>(i), space)});
  }
  return LindbladGenerator(std::move(h), std::move(jumps));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "ok";
    case Verdict::Marginal: return "marginal";
    case Verdict::Violated: return "violated";
  }
  return "unknown";
}

ValidityReport validity(const ModelParams& p) {
  p.validate();
  ValidityReport r{};
  r.epsilon = p.g / p.k;
  r.n_tilde = std::norm(p.alpha()) + p.nbar;
  r.bound_one_photon = p.g * std::sqrt(r.n_tilde) / p.k;
  r.bound_two_photon = r.n_tilde < 1.0 ? 0.0 : p.g * std::sqrt(r.n_tilde * (r.n_tilde - 1.0)) / p.k;
  r.pump_ratio = p.pump / p.k;
  const double worst = std::max({r.bound_one_photon, r.bound_two_photon, r.pump_ratio});
  if (worst < kValidityOk) {
    r.verdict = Verdict::Ok;
  } else if (worst < kValidityMarginal) {
    r.verdict = Verdict::Marginal;
  } else {
    r.verdict = Verdict::Violated;
  }
  return r;
}

ModelParams map_two_photon_to_one_photon(const ModelParams& p) {
  require_two_photon(p, "map_two_photon_to_one_photon");
  const EffectiveParams e = effective_params(p);
  const double n1 = p.nbar;
  const double n2 = e.n;
  const double n2_bare = nbar_double_frequency(n1);
  const double s = 1.0 + 2.0 * n1 + 4.0 * std::norm(e.alpha);

  const double excess = n2 - n2_bare;
  const double pump = p.pump - excess * p.gamma_loc / (1.0 + n2);
  // Rounding can leave P' at -1 ulp when the drive-induced excess is zero.
  const double slack = 1e-14 * (p.pump + p.gamma_loc);
  if (pump < -slack) {
    std::ostringstream os;
    os << "map_two_photon_to_one_photon: requires negative pump P' = " << pump;
    throw Unmappable(os.str(), -pump);
  }

  ModelParams out = p;
  out.order = 1;
  out.g = p.g * std::sqrt(s);
  const cplx alpha_mapped = e.alpha * e.alpha / std::sqrt(s);
  out.beta = cplx(0.0, 0.5) * alpha_mapped * p.k;
  out.nbar = n2;
  out.pump = std::max(0.0, pump);
  out.gamma_loc = p.gamma_loc * (1.0 + n2_bare) / (1.0 + n2);
  return out;
}

}  // namespace twophoton
