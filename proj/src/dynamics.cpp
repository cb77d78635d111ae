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

#include "twophoton/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "twophoton/errors.hpp"

namespace twophoton {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kBeta = 0.04;  // step-size stabilization exponent
constexpr double kImagResidueTol = 1e-10;

double scaled_rms(const Matrix& err, const Matrix& y0, const Matrix& y1, double atol, double rtol) {
  const Eigen::ArrayXXd scale = atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array();
  return std::sqrt((err.cwiseAbs().array() / scale).square().mean());
}

double initial_step(const LindbladGenerator& gen, const Matrix& y, const Matrix& f0, double atol,
                    double rtol) {
  const double d0 = scaled_rms(y, y, y, atol, rtol);
  const double d1 = scaled_rms(f0, y, y, atol, rtol);
  const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  const Matrix y1 = y + h0 * f0;
  Matrix f1;
  gen.apply_hermitian(y1, f1);
  const double d2 = scaled_rms(f1 - f0, y, y, atol, rtol) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min(100.0 * h0, h1);
}

double fock_tail_of(const Matrix& rho, const HilbertSpace& space) {
  if (!space.has_oscillator()) return 0.0;
  const int n_cut = space.fock_cutoff();
  const int inner = space.dim() / n_cut;
  double tail = 0.0;
  for (int n = std::max(0, n_cut - 2); n < n_cut; ++n) {
    for (int q = 0; q < inner; ++q) tail += rho(n * inner + q, n * inner + q).real();
  }
  return tail;
}

}  // namespace

std::vector<double> Trajectory::real_series(const std::string& name) const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.at(name).real());
  return out;
}

double Trajectory::max_trace_error() const {
  double m = 0.0;
  for (const auto& d : diagnostics) m = std::max(m, d.trace_error);
  return m;
}

double Trajectory::max_hermiticity_error() const {
  double m = 0.0;
  for (const auto& d : diagnostics) m = std::max(m, d.hermiticity_error);
  return m;
}

double Trajectory::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& d : diagnostics) {
    if (d.min_eigenvalue) m = std::min(m, *d.min_eigenvalue);
  }
  return m;
}

Matrix rhs(const LindbladGenerator& gen, const DensityMatrix& rho) {
  if (!(rho.space() == gen.space())) throw InvalidDimension("rhs: state and generator spaces differ");
  Matrix out;
  gen.apply_hermitian(rho.matrix(), out);
  return out;
}

std::vector<double> linear_samples(double t_end, int count) {
  if (count < 2) throw ValidationError("linear_samples: need at least two points");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (count - 1);
  t.back() = t_end;
  return t;
}

Trajectory evolve(const LindbladGenerator& gen, const DensityMatrix& rho0, double t_end,
                  const std::vector<double>& sample_times, const EvolveOptions& opt) {
  if (!(rho0.space() == gen.space())) throw InvalidDimension("evolve: state and generator spaces differ");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) throw ValidationError("evolve: tolerances must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("evolve: t_end must be finite and >= 0");
  std::vector<double> samples = sample_times.empty() ? std::vector<double>{t_end} : sample_times;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < 0.0 || samples[i] > t_end) throw ValidationError("evolve: sample time outside [0, t_end]");
    if (i > 0 && !(samples[i] > samples[i - 1])) throw ValidationError("evolve: sample times must increase");
  }

  const HilbertSpace& space = gen.space();
  const double atol = opt.abs_tol;
  const double rtol = opt.rel_tol;

  Trajectory traj;
  Matrix y = 0.5 * (rho0.matrix() + rho0.matrix().adjoint());
  int steady_count = 0;
  std::size_t next = 0;

  auto record = [&](double t, double trace_error, double herm_error) {
    const double tail = fock_tail_of(y, space);
    if (tail >= kFockTailTol) {
      std::ostringstream os;
      os << "evolve: population " << tail << " in the last two Fock levels at t = " << t
         << "; increase n_cut above " << space.fock_cutoff();
      throw TruncationInsufficient(os.str(), 0);
    }
    DensityMatrix state(space, y);
    std::map<std::string, cplx> values;
    for (const auto& o : opt.observables) values[o.name] = expectation(o.op, state);
    SampleDiagnostics diag{trace_error, herm_error, std::nullopt, tail};
    const std::size_t idx = traj.times.size();
    if (opt.eigenvalue_every > 0 && idx % static_cast<std::size_t>(opt.eigenvalue_every) == 0) {
      diag.min_eigenvalue = state.min_eigenvalue();
    }
    traj.times.push_back(t);
    traj.records.push_back(std::move(values));
    traj.diagnostics.push_back(diag);
    if (opt.keep_states) traj.states.push_back(state);
    traj.final_state = std::move(state);

    if (opt.stop_at_steady) {
      Matrix r;
      gen.apply_hermitian(y, r);
      if (max_abs(r) < opt.steady_tol * max_abs(y)) {
        ++steady_count;
      } else {
        steady_count = 0;
      }
      if (steady_count >= opt.steady_consecutive) traj.reached_steady_state = true;
    }
  };

  const double initial_trace_error = std::abs(y.trace() - cplx(1.0, 0.0));
  if (samples.front() == 0.0) {
    record(0.0, initial_trace_error, rho0.hermiticity_error());
    ++next;
  }

  Matrix k1, k2, k3, k4, k5, k6, k7, stage, ynew;
  gen.apply_hermitian(y, k1);
  double t = 0.0;
  double h = next < samples.size() ? initial_step(gen, y, k1, atol, rtol) : 0.0;
  double err_prev = 1e-4;

  while (next < samples.size() && !traj.reached_steady_state) {
    const double target = samples[next];
    h = std::min(h, opt.max_step);
    double step = h;
    bool lands = false;
    if (t + step >= target - 1e-13 * std::max(1.0, std::abs(target))) {
      step = target - t;
      lands = true;
    }
    if (step < 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "evolve: step size underflow (h = " << step << ") at t = " << t;
      throw StepUnderflow(os.str());
    }

    stage = y + (step * a21) * k1;
    gen.apply_hermitian(stage, k2);
    stage = y + step * (a31 * k1 + a32 * k2);
    gen.apply_hermitian(stage, k3);
    stage = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    gen.apply_hermitian(stage, k4);
    stage = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    gen.apply_hermitian(stage, k5);
    stage = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    gen.apply_hermitian(stage, k6);
    ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    gen.apply_hermitian(ynew, k7);
    stage = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = scaled_rms(stage, y, ynew, atol, rtol);

    if (!(err <= 1.0)) {
      ++traj.rejected_steps;
      const double fac = std::isfinite(err) ? std::max(kMinFactor, kSafety * std::pow(err, -0.2)) : kMinFactor;
      h = step * fac;
      continue;
    }

    ++traj.accepted_steps;
    const double trace = ynew.trace().real();
    const double trace_error = std::abs(trace - 1.0);
    if (trace_error > DensityMatrix::kTraceTol) {
      std::ostringstream os;
      os << "evolve: trace drift " << trace_error << " at t = " << t + step;
      throw TraceDrift(os.str());
    }
    y.swap(ynew);
    y /= trace;
    k1.swap(k7);
    k1 /= trace;
    t = lands ? target : t + step;

    const double e = std::max(err, 1e-10);
    double fac = kSafety * std::pow(e, -0.2 + 0.75 * kBeta) * std::pow(err_prev, kBeta);
    fac = std::clamp(fac, kMinFactor, kMaxFactor);
    err_prev = e;
    h = lands ? std::max(h, step * fac) : step * fac;

    if (lands) {
      record(t, trace_error, hermiticity_error(y));
      y = 0.5 * (y + y.adjoint()).eval();
      ++next;
    }
  }
  return traj;
}

cplx expectation(const Operator& op, const DensityMatrix& rho) {
  if (!(op.space() == rho.space())) throw InvalidDimension("expectation: operator and state spaces differ");
  return op.matrix().cwiseProduct(rho.matrix().transpose()).sum();
}

double expectation_real(const Operator& op, const DensityMatrix& rho) {
  const cplx v = expectation(op, rho);
  if (std::abs(v.imag()) > kImagResidueTol) {
    std::ostringstream os;
    os << "expectation_real: imaginary residue " << v.imag();
    throw ValidationError(os.str());
  }
  return v.real();
}

double j_corr(const DensityMatrix& rho, int n_qubits) {
  const HilbertSpace& space = rho.space();
  if (space.has_oscillator() || space.num_qubits() != n_qubits ||
      static_cast<int>(space.num_factors()) != n_qubits) {
    throw InvalidDimension("j_corr: state must live on a qubits-only space with n_qubits factors");
  }
  const CollectiveOps j = collective_ops(space);
  const QubitOps q = qubit_ops();
  const Operator excited = q.sigma_plus * q.sigma_minus;
  double local = 0.0;
  for (int i = 0; i < n_qubits; ++i) {
    local += expectation_real(embed(excited, static_cast<std::size_t>(i), space), rho);
  }
  return expectation_real(j.jplus * j.jminus, rho) - local;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  const HilbertSpace& space = rho.space();
  const std::size_t nf = space.num_factors();
  std::vector<bool> kept(nf, false);
  for (std::size_t k : keep) {
    if (k >= nf) throw InvalidDimension("partial_trace: factor index out of range");
    if (kept[k]) throw InvalidDimension("partial_trace: duplicate factor index");
    kept[k] = true;
  }
  if (keep.empty()) throw InvalidDimension("partial_trace: nothing to keep");

  std::vector<Factor> kept_factors;
  for (std::size_t i = 0; i < nf; ++i) {
    if (kept[i]) kept_factors.push_back(space.factors()[i]);
  }
  HilbertSpace reduced(kept_factors);

  // Split each full index into (kept index, traced index).
  const int d = space.dim();
  std::vector<int> kept_index(static_cast<std::size_t>(d));
  std::vector<int> traced_index(static_cast<std::size_t>(d));
  for (int idx = 0; idx < d; ++idx) {
    int rem = idx;
    int kidx = 0, kstride = 1, tidx = 0, tstride = 1;
    for (std::size_t f = nf; f-- > 0;) {
      const int fd = space.factor_dim(f);
      const int digit = rem % fd;
      rem /= fd;
      if (kept[f]) {
        kidx += digit * kstride;
        kstride *= fd;
      } else {
        tidx += digit * tstride;
        tstride *= fd;
      }
    }
    kept_index[static_cast<std::size_t>(idx)] = kidx;
    traced_index[static_cast<std::size_t>(idx)] = tidx;
  }

  Matrix out = Matrix::Zero(reduced.dim(), reduced.dim());
  const Matrix& m = rho.matrix();
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) {
      if (traced_index[static_cast<std::size_t>(r)] == traced_index[static_cast<std::size_t>(c)]) {
        out(kept_index[static_cast<std::size_t>(r)], kept_index[static_cast<std::size_t>(c)]) += m(r, c);
      }
    }
  }
  return DensityMatrix(std::move(reduced), std::move(out));
}

DensityMatrix qubit_marginal(const DensityMatrix& rho) {
  const HilbertSpace& space = rho.space();
  if (!space.has_oscillator()) throw InvalidDimension("qubit_marginal: state has no oscillator factor");
  std::vector<std::size_t> keep;
  for (std::size_t i = 1; i < space.num_factors(); ++i) keep.push_back(i);
  return partial_trace(rho, keep);
}

DensityMatrix qubit_marginal(const DensityMatrix& rho, int qubit) {
  return partial_trace(rho, {rho.space().qubit_factor(qubit)});
}

double fock_tail_population(const DensityMatrix& rho) { return fock_tail_of(rho.matrix(), rho.space()); }

}  // namespace twophoton
