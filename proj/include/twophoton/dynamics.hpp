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

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twophoton/generator.hpp"
#include "twophoton/hilbert.hpp"

namespace twophoton {

struct Observable {
  std::string name;
  Operator op;
};

struct EvolveOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::vector<Observable> observables;
  bool keep_states = false;
  // Minimum eigenvalue is computed at every n-th sample; 0 disables it.
  int eigenvalue_every = 1;
  // Stop once ||rhs||_max < steady_tol * ||rho||_max at `steady_consecutive`
  // consecutive samples.
  bool stop_at_steady = false;
  double steady_tol = 1e-12;
  int steady_consecutive = 3;
  double max_step = std::numeric_limits<double>::infinity();
};

struct SampleDiagnostics {
  double trace_error;        // before renormalization
  double hermiticity_error;  // before re-Hermitization
  std::optional<double> min_eigenvalue;
  double fock_tail;  // population of the last two Fock levels, 0 without oscillator
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::map<std::string, cplx>> records;
  std::vector<SampleDiagnostics> diagnostics;
  std::vector<DensityMatrix> states;  // filled when keep_states is set
  std::optional<DensityMatrix> final_state;  // state at the last recorded time
  bool reached_steady_state = false;
  long accepted_steps = 0;
  long rejected_steps = 0;

  std::vector<double> real_series(const std::string& name) const;
  double max_trace_error() const;
  double max_hermiticity_error() const;
  // +inf when no sample carried an eigenvalue.
  double min_eigenvalue() const;
};

// d rho / dt. Throws InvalidDimension on mismatch.
Matrix rhs(const LindbladGenerator& gen, const DensityMatrix& rho);

// Adaptive Dormand-Prince 5(4) integration from t = 0. The state is recorded
// exactly at each of `sample_times` (strictly increasing, within [0, t_end]);
// an empty list records t_end only.
//
// Throws StepUnderflow, TraceDrift when |tr rho - 1| exceeds the 1e-9
// budget, and TruncationInsufficient when the last two Fock levels of a
// full-model state hold kFockTailTol or more.
Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0, double t_end,
                  const std::vector<double>& sample_times, const EvolveOptions& options = {});

// Evenly spaced grid of `count` points on [0, t_end], both ends included.
std::vector<double> linear_samples(double t_end, int count);

cplx expectation(const Operator& op, const DensityMatrix& rho);
// Real expectation of a Hermitian operator; throws if the imaginary residue
// exceeds 1e-10.
double expectation_real(const Operator& op, const DensityMatrix& rho);

// <J+ J-> - sum_i <sigma+^(i) sigma-^(i)> on a qubits-only space.
double j_corr(const DensityMatrix& rho, int n_qubits);

// Reduced state on the listed factors (kept in their original order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);
// Trace over the oscillator: state of all qubits.
DensityMatrix qubit_marginal(const DensityMatrix& rho);
// State of a single qubit (0-based).
DensityMatrix qubit_marginal(const DensityMatrix& rho, int qubit);

// Population of the last two Fock levels (0 for qubit-only spaces).
double fock_tail_population(const DensityMatrix& rho);

}  // namespace twophoton
