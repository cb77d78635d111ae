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

#include <vector>

#include <Eigen/SparseCore>

#include "twophoton/hilbert.hpp"

namespace twophoton {

struct Jump {
  double rate;
  Operator op;
};

// Time-independent Lindblad generator
//   d rho/dt = -i[H, rho] + sum_j rate_j (X_j rho X_j^dag - {X_j^dag X_j, rho}/2).
// Zero-rate jumps are dropped on construction.
class LindbladGenerator {
public:
  LindbladGenerator(Operator hamiltonian, std::vector<Jump> jumps);

  const HilbertSpace& space() const { return hamiltonian_.space(); }
  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  int dim() const { return hamiltonian_.dim(); }

  // Generator action on an arbitrary square matrix.
  Matrix apply(const Matrix& rho) const;

  // Same action for Hermitian `rho`. Only the lower-level arithmetic differs:
  // the result is assembled as M + M^dag, so it is exactly Hermitian.
  void apply_hermitian(const Matrix& rho, Matrix& out) const;

private:
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  // A[i, i + offset] = coeff[i - start] for i in [start, start + coeff.size()).
  struct Band {
    Eigen::Index offset;
    Eigen::Index start;
    Vector coeff;
  };

  // Operator stored as a few diagonals when that is cheaper, else sparse.
  struct Action {
    bool banded = false;
    std::vector<Band> bands;
    Sparse sparse;
    Sparse sparse_adjoint;

    static Action from(const Matrix& a);
    void left_add(const Matrix& x, Matrix& out, double scale) const;           // out += scale A x
    void right_adjoint_add(const Matrix& x, Matrix& out, double scale) const;  // out += scale x A^dag
  };

  Operator hamiltonian_;
  std::vector<Jump> jumps_;
  // drift = -iH - 1/2 sum rate X^dag X
  Action drift_;
  std::vector<std::pair<double, Action>> jump_actions_;
};

}  // namespace twophoton
