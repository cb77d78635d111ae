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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace twophoton {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class FactorKind { Fock, Qubit };

struct Factor {
  FactorKind kind;
  int dim;
  bool operator==(const Factor&) const = default;
};

// Ordered tensor-product space. Factor order is [oscillator, qubit 1, ...,
// qubit N] whenever the oscillator is present; qubit basis is |g>=0, |e>=1.
class HilbertSpace {
public:
  explicit HilbertSpace(std::vector<Factor> factors);

  static HilbertSpace fock(int n_cut);
  static HilbertSpace qubit();
  static HilbertSpace qubits(int n);
  static HilbertSpace oscillator_qubits(int n_cut, int n_qubits);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  int factor_dim(std::size_t i) const { return factors_.at(i).dim; }
  int dim() const { return total_dim_; }

  bool has_oscillator() const;
  int fock_cutoff() const;  // 0 without oscillator
  int num_qubits() const;
  // Index of qubit `q` (0-based) among the factors.
  std::size_t qubit_factor(int q) const;

  bool operator==(const HilbertSpace& other) const { return factors_ == other.factors_; }

private:
  std::vector<Factor> factors_;
  int total_dim_;
};

class Operator {
public:
  Operator(HilbertSpace space, Matrix data);

  static Operator identity(const HilbertSpace& space);
  static Operator zero(const HilbertSpace& space);

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return data_; }
  int dim() const { return space_.dim(); }

  Operator adjoint() const;
  double hermiticity_error() const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(cplx s, const Operator& a);

private:
  HilbertSpace space_;
  Matrix data_;
};

Operator commutator(const Operator& a, const Operator& b);
Operator pow(const Operator& op, int exponent);

// Validated state: Hermitian to `kHermiticityTol` (relative to the largest
// entry) and unit trace to `kTraceTol`.
class DensityMatrix {
public:
  static constexpr double kHermiticityTol = 1e-12;
  static constexpr double kTraceTol = 1e-9;
  static constexpr double kPositivityTol = 1e-8;

  DensityMatrix(HilbertSpace space, Matrix data);

  static DensityMatrix pure(HilbertSpace space, const Vector& ket);
  static DensityMatrix maximally_mixed(HilbertSpace space);
  // |index><index| in the computational basis.
  static DensityMatrix basis_state(HilbertSpace space, int index);

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return data_; }
  int dim() const { return space_.dim(); }
  cplx operator()(int row, int col) const { return data_(row, col); }

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

private:
  HilbertSpace space_;
  Matrix data_;
};

Matrix kron(const Matrix& a, const Matrix& b);
HilbertSpace tensor(const HilbertSpace& a, const HilbertSpace& b);
Operator tensor(const Operator& a, const Operator& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

double max_abs(const Matrix& m);
double hermiticity_error(const Matrix& m);
// Trace norm distance 0.5 * ||a - b||_1 for Hermitian arguments.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Truncated bosonic lowering operator, <n-1|a|n> = sqrt(n).
Operator annihilation(int n_cut);
Operator number(int n_cut);

struct QubitOps {
  Operator sigma_z;
  Operator sigma_plus;
  Operator sigma_minus;
  Operator identity;
};
QubitOps qubit_ops();

// Kronecker product of `op` at `factor_index` with identities elsewhere.
Operator embed(const Operator& op, std::size_t factor_index, const HilbertSpace& space);

struct CollectiveOps {
  Operator jz;
  Operator jplus;
  Operator jminus;
};
// Sums of single-qubit operators on the 2^n space.
CollectiveOps collective_ops(int n);
// Same sums, embedded on an arbitrary space that contains qubit factors.
CollectiveOps collective_ops(const HilbertSpace& space);

// Population above which the oscillator tail counts as unresolved.
inline constexpr double kFockTailTol = 1e-8;

// Default Fock cutoff for a displaced thermal state: the larger of
// ceil(|a|^2 + nbar + 6 sqrt(|a|^2 + nbar + 1)) + 4 and two levels above the
// smallest cutoff whose tail population is below kFockTailTol.
int default_fock_cutoff(cplx alpha, double nbar);

// Smallest cutoff whose tail population (sum of p_n, n >= cutoff) is < tol.
int required_fock_cutoff(cplx alpha, double nbar, double tol = kFockTailTol);

// D(alpha) rho_th(nbar) D(-alpha) truncated to n_cut levels and renormalized.
// Throws TruncationInsufficient if the discarded population is >= kFockTailTol.
DensityMatrix ho_displaced_thermal(cplx alpha, double nbar, int n_cut);

}  // namespace twophoton
