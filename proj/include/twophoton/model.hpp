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

#include <string>

#include "twophoton/generator.hpp"
#include "twophoton/hilbert.hpp"

namespace twophoton {

// Physical inputs shared by the full and the effective model. Rates are in
// units of the oscillator decay k; temperature enters only through the
// thermal occupation `nbar` at the oscillator frequency.
struct ModelParams {
  int order = 1;  // photons exchanged per qubit transition, 1 or 2
  int n_qubits = 1;
  double g = 0.0;
  cplx beta{0.0, 0.0};
  double k = 1.0;
  double nbar = 0.0;
  double pump = 0.0;
  double gamma_loc = 0.0;

  // Throws InvalidModel.
  void validate() const;

  cplx alpha() const { return cplx(0.0, -2.0) * beta / k; }
  // Thermal occupation at the qubit frequency order * omega.
  double nbar_qubit() const;
};

// Occupation at 2 omega from the occupation at omega, nbar^2 / (1 + 2 nbar).
double nbar_double_frequency(double nbar);

// Bose-Einstein occupation 1 / (exp(x) - 1) for x = hbar omega / (k_B T).
double bose_occupation(double x);

struct EffectiveParams {
  cplx alpha;
  double gamma;  // collective rate gamma_l
  double n;      // collective bath occupation n_l
  double t_star_nbar;  // occupation at 2 omega of the collective bath (order 2)
};

EffectiveParams effective_params(const ModelParams& p);

// Two-photon n_2 written as the bare occupation at 2 omega plus the
// drive-induced excess. Order 2 only.
double n2_alternative(const ModelParams& p);

// Occupation at 2 omega seen by the qubits through the collective bath
// (equal to n_2). Order 2 only.
double effective_temperature_nbar(const ModelParams& p);

// Closed-form collective-bath temperature T* in units of hbar omega / k_B,
// from the bath temperature T in the same units. T = 0 maps to 0.
double effective_temperature(double temperature, double abs_alpha);
// Temperature in units of hbar omega / k_B for a given occupation at omega.
double temperature_from_nbar(double nbar);

// H = g[a^l J+ + (a^dag)^l J-] + beta* a + beta a^dag on [n_cut, 2, ..., 2].
LindbladGenerator build_full_generator(const ModelParams& p, int n_cut);

// Qubit-only generator after eliminating the oscillator.
LindbladGenerator build_effective_generator(const ModelParams& p);

enum class Verdict { Ok, Marginal, Violated };
std::string to_string(Verdict v);

struct ValidityReport {
  double epsilon;           // g / k
  double n_tilde;           // |alpha|^2 + nbar
  double bound_one_photon;  // g sqrt(n~) / k
  double bound_two_photon;  // g sqrt(n~(n~-1)) / k, 0 for n~ < 1
  double pump_ratio;        // P / k
  Verdict verdict;
};

inline constexpr double kValidityOk = 0.1;
inline constexpr double kValidityMarginal = 0.3;

ValidityReport validity(const ModelParams& p);

// One-photon parameters whose effective dynamics equals the two-photon
// effective dynamics of `p`, with k' = k. Throws Unmappable if P' < 0.
ModelParams map_two_photon_to_one_photon(const ModelParams& p);

}  // namespace twophoton
