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

#include "twophoton/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "twophoton/errors.hpp"

namespace twophoton {

namespace {

int product_of_dims(const std::vector<Factor>& factors) {
  int total = 1;
  for (const auto& f : factors) total *= f.dim;
  return total;
}

void require_same_space(const Operator& a, const Operator& b, const char* what) {
  if (!(a.space() == b.space())) {
    throw InvalidDimension(std::string(what) + ": operands live on different spaces");
  }
}

}  // namespace

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidDimension("HilbertSpace: no factors");
  for (const auto& f : factors_) {
    if (f.kind == FactorKind::Qubit && f.dim != 2) {
      throw InvalidDimension("HilbertSpace: qubit factor must have dimension 2");
    }
    if (f.kind == FactorKind::Fock && f.dim < 1) {
      throw InvalidDimension("HilbertSpace: Fock factor must have dimension >= 1");
    }
  }
  total_dim_ = product_of_dims(factors_);
}

HilbertSpace HilbertSpace::fock(int n_cut) { return HilbertSpace({{FactorKind::Fock, n_cut}}); }

HilbertSpace HilbertSpace::qubit() { return HilbertSpace({{FactorKind::Qubit, 2}}); }

HilbertSpace HilbertSpace::qubits(int n) {
  if (n < 1) throw InvalidDimension("HilbertSpace: need at least one qubit");
  return HilbertSpace(std::vector<Factor>(static_cast<std::size_t>(n), {FactorKind::Qubit, 2}));
}

HilbertSpace HilbertSpace::oscillator_qubits(int n_cut, int n_qubits) {
  if (n_qubits < 1) throw InvalidDimension("HilbertSpace: need at least one qubit");
  std::vector<Factor> f;
  f.push_back({FactorKind::Fock, n_cut});
  for (int i = 0; i < n_qubits; ++i) f.push_back({FactorKind::Qubit, 2});
  return HilbertSpace(std::move(f));
}

bool HilbertSpace::has_oscillator() const { return factors_.front().kind == FactorKind::Fock; }

int HilbertSpace::fock_cutoff() const { return has_oscillator() ? factors_.front().dim : 0; }

int HilbertSpace::num_qubits() const {
  return static_cast<int>(std::count_if(factors_.begin(), factors_.end(),
                                        [](const Factor& f) { return f.kind == FactorKind::Qubit; }));
}

std::size_t HilbertSpace::qubit_factor(int q) const {
  int seen = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].kind != FactorKind::Qubit) continue;
    if (seen == q) return i;
    ++seen;
  }
  throw InvalidDimension("HilbertSpace: qubit index out of range");
}

// --- Operator ---------------------------------------------------------------

Operator::Operator(HilbertSpace space, Matrix data) : space_(std::move(space)), data_(std::move(data)) {
  if (data_.rows() != data_.cols() || data_.rows() != space_.dim()) {
    std::ostringstream os;
    os << "Operator: matrix is " << data_.rows() << "x" << data_.cols() << ", space dimension is "
       << space_.dim();
    throw InvalidDimension(os.str());
  }
}

Operator Operator::identity(const HilbertSpace& space) {
  return Operator(space, Matrix::Identity(space.dim(), space.dim()));
}

Operator Operator::zero(const HilbertSpace& space) {
  return Operator(space, Matrix::Zero(space.dim(), space.dim()));
}

Operator Operator::adjoint() const { return Operator(space_, data_.adjoint()); }

double Operator::hermiticity_error() const { return twophoton::hermiticity_error(data_); }

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator+");
  return Operator(a.space_, a.data_ + b.data_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator-");
  return Operator(a.space_, a.data_ - b.data_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator*");
  return Operator(a.space_, a.data_ * b.data_);
}

Operator operator*(cplx s, const Operator& a) { return Operator(a.space_, s * a.data_); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator pow(const Operator& op, int exponent) {
  if (exponent < 0) throw InvalidDimension("pow: negative exponent");
  Operator result = Operator::identity(op.space());
  for (int i = 0; i < exponent; ++i) result = result * op;
  return result;
}

// --- DensityMatrix ------------------------------------------------------------

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix data)
    : space_(std::move(space)), data_(std::move(data)) {
  if (data_.rows() != data_.cols() || data_.rows() != space_.dim()) {
    throw InvalidDimension("DensityMatrix: shape does not match space");
  }
  if (!data_.allFinite()) throw ValidationError("DensityMatrix: non-finite entries");
  const double herm = twophoton::hermiticity_error(data_);
  if (herm > kHermiticityTol) {
    std::ostringstream os;
    os << "DensityMatrix: Hermiticity error " << herm;
    throw ValidationError(os.str());
  }
  if (trace_error() > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace error " << trace_error();
    throw ValidationError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(HilbertSpace space, const Vector& ket) {
  if (ket.size() != space.dim()) throw InvalidDimension("DensityMatrix::pure: ket size mismatch");
  const Vector psi = ket / ket.norm();
  Matrix rho = psi * psi.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(space), std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(HilbertSpace space) {
  const int d = space.dim();
  return DensityMatrix(std::move(space), Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(HilbertSpace space, int index) {
  if (index < 0 || index >= space.dim()) throw InvalidDimension("basis_state: index out of range");
  Matrix rho = Matrix::Zero(space.dim(), space.dim());
  rho(index, index) = 1.0;
  return DensityMatrix(std::move(space), std::move(rho));
}

double DensityMatrix::trace_error() const { return std::abs(data_.trace() - cplx(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const { return twophoton::hermiticity_error(data_); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// --- free functions -----------------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HilbertSpace tensor(const HilbertSpace& a, const HilbertSpace& b) {
  std::vector<Factor> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return HilbertSpace(std::move(f));
}

Operator tensor(const Operator& a, const Operator& b) {
  return Operator(tensor(a.space(), b.space()), kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(tensor(a.space(), b.space()), kron(a.matrix(), b.matrix()));
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& m) { return max_abs(m - m.adjoint()); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(a.space() == b.space())) throw InvalidDimension("trace_distance: space mismatch");
  const Matrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Operator annihilation(int n_cut) {
  if (n_cut < 2) throw InvalidDimension("annihilation: n_cut must be >= 2");
  Matrix a = Matrix::Zero(n_cut, n_cut);
  for (int n = 1; n < n_cut; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(HilbertSpace::fock(n_cut), std::move(a));
}

Operator number(int n_cut) {
  const Operator a = annihilation(n_cut);
  return a.adjoint() * a;
}

QubitOps qubit_ops() {
  const HilbertSpace q = HilbertSpace::qubit();
  Matrix sz = Matrix::Zero(2, 2);
  sz(0, 0) = -1.0;
  sz(1, 1) = 1.0;
  Matrix sp = Matrix::Zero(2, 2);
  sp(1, 0) = 1.0;  // |e><g|
  return {Operator(q, sz), Operator(q, sp), Operator(q, sp.adjoint()), Operator::identity(q)};
}

Operator embed(const Operator& op, std::size_t factor_index, const HilbertSpace& space) {
  if (factor_index >= space.num_factors()) throw InvalidDimension("embed: factor index out of range");
  if (op.dim() != space.factor_dim(factor_index)) {
    std::ostringstream os;
    os << "embed: operator dimension " << op.dim() << " does not match factor " << factor_index
       << " of dimension " << space.factor_dim(factor_index);
    throw InvalidDimension(os.str());
  }
  int left = 1;
  int right = 1;
  for (std::size_t i = 0; i < space.num_factors(); ++i) {
    if (i < factor_index) left *= space.factor_dim(i);
    if (i > factor_index) right *= space.factor_dim(i);
  }
  Matrix m = kron(Matrix::Identity(left, left), kron(op.matrix(), Matrix::Identity(right, right)));
  return Operator(space, std::move(m));
}

CollectiveOps collective_ops(const HilbertSpace& space) {
  const int n = space.num_qubits();
  if (n < 1) throw InvalidDimension("collective_ops: space has no qubits");
  const QubitOps q = qubit_ops();
  Operator jz = Operator::zero(space);
  Operator jp = Operator::zero(space);
  for (int i = 0; i < n; ++i) {
    const std::size_t f = space.qubit_factor(i);
    jz = jz + embed(q.sigma_z, f, space);
    jp = jp + embed(q.sigma_plus, f, space);
  }
  Operator jm = jp.adjoint();
  return {std::move(jz), std::move(jp), std::move(jm)};
}

CollectiveOps collective_ops(int n) { return collective_ops(HilbertSpace::qubits(n)); }

namespace {

int truncation_rule(cplx alpha, double nbar) {
  const double mean = std::norm(alpha) + nbar;
  return static_cast<int>(std::ceil(mean + 6.0 * std::sqrt(mean + 1.0))) + 4;
}

// Displaced thermal state on a working space large enough that its low
// levels are exact to double precision.
Matrix displaced_thermal_wide(cplx alpha, double nbar, int at_least) {
  if (nbar < 0.0 || !std::isfinite(nbar)) throw ValidationError("displaced thermal: nbar must be >= 0");
  int thermal_len = 0;
  if (nbar > 0.0) {
    const double ratio = nbar / (1.0 + nbar);
    thermal_len = static_cast<int>(std::ceil(std::log(1e-17) / std::log(ratio)));
  }
  const int m = std::max({64, 2 * truncation_rule(alpha, nbar) + thermal_len + 20, at_least + 40});

  Vector pops(m);
  const double ratio = nbar / (1.0 + nbar);
  double p = 1.0 / (1.0 + nbar);
  for (int n = 0; n < m; ++n) {
    pops(n) = p;
    p *= ratio;
  }
  Matrix rho = pops.asDiagonal();
  if (alpha == cplx(0.0, 0.0)) return rho;

  Matrix a = Matrix::Zero(m, m);
  for (int n = 1; n < m; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  // D = exp(K), K = alpha a^dag - conj(alpha) a; iK is Hermitian.
  const Matrix herm = cplx(0.0, 1.0) * (alpha * a.adjoint() - std::conj(alpha) * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (herm + herm.adjoint()));
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Vector phases(m);
  for (int i = 0; i < m; ++i) phases(i) = std::exp(cplx(0.0, -lambda(i)));
  const Matrix disp = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return disp * rho * disp.adjoint();
}

int cutoff_for_tail(const Matrix& wide, double tol) {
  const Eigen::Index m = wide.rows();
  double tail = 0.0;
  for (Eigen::Index n = m - 1; n >= 0; --n) {
    tail += wide(n, n).real();
    if (tail >= tol) return static_cast<int>(n) + 1;
  }
  return 1;
}

}  // namespace

int required_fock_cutoff(cplx alpha, double nbar, double tol) {
  return std::max(2, cutoff_for_tail(displaced_thermal_wide(alpha, nbar, 0), tol));
}

int default_fock_cutoff(cplx alpha, double nbar) {
  // Two spare levels keep the top of the truncated space below the tail bound.
  return std::max(truncation_rule(alpha, nbar), required_fock_cutoff(alpha, nbar) + 2);
}

DensityMatrix ho_displaced_thermal(cplx alpha, double nbar, int n_cut) {
  if (n_cut < 1) throw InvalidDimension("ho_displaced_thermal: n_cut must be >= 1");
  const Matrix wide = displaced_thermal_wide(alpha, nbar, n_cut);
  const double total = wide.trace().real();
  Matrix block = wide.topLeftCorner(n_cut, n_cut);
  const double kept = block.trace().real();
  const double tail = (total - kept) / total;
  if (tail >= kFockTailTol) {
    const int need = std::max(2, cutoff_for_tail(wide / total, kFockTailTol));
    std::ostringstream os;
    os << "Fock cutoff " << n_cut << " leaves tail population " << tail << "; need n_cut >= " << need;
    throw TruncationInsufficient(os.str(), need);
  }
  block /= kept;
  block = 0.5 * (block + block.adjoint()).eval();
  return DensityMatrix(HilbertSpace::fock(n_cut), std::move(block));
}

}  // namespace twophoton
