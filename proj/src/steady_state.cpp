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

#include "twophoton/steady_state.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include "twophoton/errors.hpp"

namespace twophoton {

namespace {

using SparseCol = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

Matrix drift_of(const LindbladGenerator& gen) {
  Matrix drift = cplx(0.0, -1.0) * gen.hamiltonian().matrix();
  for (const auto& j : gen.jumps()) drift -= 0.5 * j.rate * (j.op.matrix().adjoint() * j.op.matrix());
  return drift;
}

SparseCol sparse_kron(const SparseCol& a, const SparseCol& b) {
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseCol::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseCol::InnerIterator ib(b, kb); ib; ++ib) {
          trips.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                             ia.value() * ib.value());
        }
      }
    }
  }
  SparseCol out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

DensityMatrix normalize_null_vector(const HilbertSpace& space, const Vector& v) {
  const int d = space.dim();
  Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw SolverError("steady state: null vector has zero trace");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(space, std::move(rho));
}

double residual_of(const LindbladGenerator& gen, const DensityMatrix& rho) {
  Matrix r;
  gen.apply_hermitian(rho.matrix(), r);
  return max_abs(r);
}

void check_residual(double residual, double tol, const char* where) {
  if (!(residual < tol)) {
    std::ostringstream os;
    os << where << ": residual " << residual << " exceeds " << tol;
    throw SolverError(os.str());
  }
}

}  // namespace

Matrix liouvillian(const LindbladGenerator& gen) {
  const int d = gen.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix drift = drift_of(gen);
  Matrix l = kron(id, drift) + kron(drift.conjugate(), id);
  for (const auto& j : gen.jumps()) l += j.rate * kron(j.op.matrix().conjugate(), j.op.matrix());
  return l;
}

SteadyStateSvd steady_state_svd(const LindbladGenerator& gen, const SteadyStateOptions& opt) {
  const long d = gen.dim();
  if (d * d > opt.cap) {
    std::ostringstream os;
    os << "steady_state: superoperator dimension " << d * d << " exceeds cap " << opt.cap
       << "; use steady_state_longtime or steady_state_sparse";
    throw CapExceeded(os.str());
  }
  const Matrix l = liouvillian(gen);
  // BDCSVD in Eigen 3.4 occasionally returns an inaccurate smallest singular
  // vector; the slower Jacobi SVD is the fallback when the residual check fails.
  auto attempt = [&](const auto& svd) {
    const auto& sv = svd.singularValues();
    const Eigen::Index n = sv.size();
    const double largest = sv(0);
    const double smallest = sv(n - 1);
    const double second = n > 1 ? sv(n - 2) : largest;
    if (n > 1 && second < opt.degeneracy_tol * largest) {
      std::ostringstream os;
      os << "steady_state: degenerate null space (second singular value " << second << ", largest " << largest
         << ")";
      throw DegenerateSteadyState(os.str());
    }
    DensityMatrix rho = normalize_null_vector(gen.space(), svd.matrixV().col(n - 1));
    const double residual = residual_of(gen, rho);
    return SteadyStateSvd{std::move(rho), smallest, second, largest, residual};
  };
  SteadyStateSvd out = attempt(Eigen::BDCSVD<Matrix>(l, Eigen::ComputeFullV));
  if (!(out.residual < opt.residual_tol)) out = attempt(Eigen::JacobiSVD<Matrix>(l, Eigen::ComputeFullV));
  check_residual(out.residual, opt.residual_tol, "steady_state");
  return out;
}

DensityMatrix steady_state(const LindbladGenerator& gen, const SteadyStateOptions& opt) {
  return steady_state_svd(gen, opt).rho;
}

DensityMatrix steady_state_sparse(const LindbladGenerator& gen, double residual_tol) {
  const int d = gen.dim();
  const SparseCol id = Matrix::Identity(d, d).sparseView();
  const Matrix drift = drift_of(gen);
  const SparseCol k = drift.sparseView();
  const SparseCol kc = Matrix(drift.conjugate()).sparseView();
  SparseCol l = sparse_kron(id, k) + sparse_kron(kc, id);
  for (const auto& j : gen.jumps()) {
    const SparseCol x = j.op.matrix().sparseView();
    const SparseCol xc = Matrix(j.op.matrix().conjugate()).sparseView();
    l += j.rate * sparse_kron(xc, x);
  }

  // Replace the equation for rho_00 (row 0) by tr(rho) = 1.
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(l.nonZeros() + d));
  for (int c = 0; c < l.outerSize(); ++c) {
    for (SparseCol::InnerIterator it(l, c); it; ++it) {
      if (it.row() != 0) trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < d; ++i) trips.emplace_back(0, i * (d + 1), cplx(1.0, 0.0));
  SparseCol a(l.rows(), l.cols());
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();

  Eigen::SparseLU<SparseCol> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw DegenerateSteadyState("steady_state_sparse: singular system");
  Vector b = Vector::Zero(l.rows());
  b(0) = 1.0;
  const Vector v = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SolverError("steady_state_sparse: solve failed");
  DensityMatrix rho = normalize_null_vector(gen.space(), v);
  check_residual(residual_of(gen, rho), residual_tol, "steady_state_sparse");
  return rho;
}

DensityMatrix steady_state_longtime(const LindbladGenerator& gen, const DensityMatrix& rho0, double max_t,
                                    const LongTimeOptions& opt) {
  EvolveOptions eo;
  eo.rel_tol = opt.rel_tol;
  eo.abs_tol = opt.abs_tol;
  eo.stop_at_steady = true;
  eo.eigenvalue_every = 0;
  const Trajectory traj = evolve(gen, rho0, max_t, linear_samples(max_t, opt.samples), eo);
  if (!traj.reached_steady_state) {
    std::ostringstream os;
    os << "steady_state_longtime: no convergence by t = " << max_t;
    throw NotConverged(os.str());
  }
  DensityMatrix rho = *traj.final_state;
  check_residual(residual_of(gen, rho), opt.residual_tol, "steady_state_longtime");
  return rho;
}

DensityMatrix AnalyticOneQubitSteady::density_matrix() const {
  Matrix m(2, 2);
  m(0, 0) = 1.0 - rho_ee;
  m(1, 1) = rho_ee;
  m(1, 0) = rho_eg;
  m(0, 1) = std::conj(rho_eg);
  return DensityMatrix(HilbertSpace::qubit(), std::move(m));
}

AnalyticOneQubitSteady one_qubit_steady_analytic(const ModelParams& p) {
  if (p.n_qubits != 1) throw InvalidModel("one_qubit_steady_analytic: requires a single qubit");
  const EffectiveParams e = effective_params(p);
  const double nq = p.nbar_qubit();
  AnalyticOneQubitSteady s{};
  s.gamma_minus = p.gamma_loc * (1.0 + nq) + e.gamma * (1.0 + e.n);
  s.gamma_plus = p.gamma_loc * nq + e.gamma * e.n + p.pump;
  cplx drive(1.0, 0.0);
  for (int i = 0; i < p.order; ++i) drive *= e.alpha;
  const double drive2 = p.g * p.g * std::norm(drive);  // g^2 |alpha|^{2l}
  const double total = s.gamma_minus + s.gamma_plus;
  const double denom = 8.0 * drive2 + total * total;
  if (!(denom > 0.0)) throw InvalidModel("one_qubit_steady_analytic: no dissipation and no drive");
  s.rho_ee = (4.0 * drive2 + s.gamma_plus * total) / denom;
  s.rho_eg = cplx(0.0, 2.0) * p.g * drive * (s.gamma_plus - s.gamma_minus) / denom;
  return s;
}

LargeDriveLimit one_qubit_large_drive_limit(const ModelParams& p) {
  p.validate();
  if (p.order == 1) return {0.5, cplx(0.0, 0.0)};
  const double x = p.g / p.k;
  const double r = 1.0 + 2.0 * p.nbar;
  const double phi = std::arg(p.alpha());
  LargeDriveLimit lim{};
  lim.rho_ee = (1.0 + 64.0 * p.nbar * r * x * x) / (2.0 + 64.0 * r * r * x * x);
  lim.rho_eg = std::polar(4.0 * x / (1.0 + 32.0 * r * r * x * x), 2.0 * phi - std::numbers::pi / 2.0);
  return lim;
}

TwoQubitJcorrAnalytic two_qubit_jcorr_analytic(const ModelParams& p) {
  if (p.n_qubits != 2) throw InvalidModel("two_qubit_jcorr_analytic: requires two qubits");
  if (p.beta != cplx(0.0, 0.0)) throw InvalidModel("two_qubit_jcorr_analytic: requires beta = 0");
  const EffectiveParams e = effective_params(p);
  const double gl = e.gamma;
  const double r = 1.0 + 2.0 * e.n;
  const double pump = p.pump;
  const double gloc = p.gamma_loc;
  const double s = pump + gloc * r;
  const double num = pump * gl * (1.0 + r) * (pump - gl - gloc);
  const double den =
      s * s * s + 3.0 * gl * r * s * s + gl * gl * (2.0 * gloc * r * r * r + pump * (1.0 + r + 2.0 * r * r));
  if (!(den > 0.0)) throw InvalidModel("two_qubit_jcorr_analytic: vanishing denominator");
  return {r, num / den};
}

}  // namespace twophoton
