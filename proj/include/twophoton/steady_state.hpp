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

#include "twophoton/dynamics.hpp"
#include "twophoton/generator.hpp"
#include "twophoton/model.hpp"

namespace twophoton {

struct SteadyStateOptions {
  // Largest superoperator dimension d^2 handled by the dense SVD.
  int cap = 4096;
  // Second-smallest over largest singular value below this flags a
  // degenerate steady manifold.
  double degeneracy_tol = 1e-10;
  double residual_tol = 1e-11;
};

// Liouvillian as a d^2 x d^2 matrix acting on column-major vec(rho).
Matrix liouvillian(const LindbladGenerator& gen);

// Null vector of the dense Liouvillian via SVD, Hermitized and trace
// normalized. Throws CapExceeded, DegenerateSteadyState, or SolverError when
// the residual check fails.
DensityMatrix steady_state(const LindbladGenerator& gen, const SteadyStateOptions& options = {});

struct SteadyStateSvd {
  DensityMatrix rho;
  double smallest_singular;
  double second_singular;
  double largest_singular;
  double residual;
};
SteadyStateSvd steady_state_svd(const LindbladGenerator& gen, const SteadyStateOptions& options = {});

// Sparse LU on the Liouvillian with one population equation replaced by the
// trace condition. For spaces too large for the dense SVD (full model).
DensityMatrix steady_state_sparse(const LindbladGenerator& gen, double residual_tol = 1e-10);

struct LongTimeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int samples = 2000;  // detector checkpoints over [0, max_t]
  double residual_tol = 1e-9;
};

// Integrates until the steady-state detector fires. Throws NotConverged if
// max_t is reached first.
DensityMatrix steady_state_longtime(const LindbladGenerator& gen, const DensityMatrix& rho0, double max_t,
                                    const LongTimeOptions& options = {});

struct AnalyticOneQubitSteady {
  double gamma_minus;
  double gamma_plus;
  double rho_ee;
  cplx rho_eg;

  DensityMatrix density_matrix() const;
};

// Closed-form steady state of the single-qubit effective model.
AnalyticOneQubitSteady one_qubit_steady_analytic(const ModelParams& p);

struct LargeDriveLimit {
  double rho_ee;
  cplx rho_eg;
};

// Steady state when every term not growing with |alpha| is dropped (local
// rates and pump neglected).
LargeDriveLimit one_qubit_large_drive_limit(const ModelParams& p);

struct TwoQubitJcorrAnalytic {
  double r;  // 1 + 2 n_l
  double value;
};

// Closed-form steady-state J_corr of two qubits without coherent drive.
TwoQubitJcorrAnalytic two_qubit_jcorr_analytic(const ModelParams& p);

}  // namespace twophoton
