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

#include "twophoton/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "twophoton/errors.hpp"

namespace twophoton {

namespace {

constexpr double kHamiltonianHermiticityTol = 1e-12;

// In-place m <- m + m^dag.
void add_adjoint_in_place(Matrix& m) {
  const Eigen::Index d = m.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    m(j, j) = cplx(2.0 * m(j, j).real(), 0.0);
    for (Eigen::Index i = j + 1; i < d; ++i) {
      const cplx v = m(i, j) + std::conj(m(j, i));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
}

}  // namespace

LindbladGenerator::Action LindbladGenerator::Action::from(const Matrix& a) {
  Action act;
  const Eigen::Index d = a.rows();
  std::map<Eigen::Index, std::vector<std::pair<Eigen::Index, cplx>>> diagonals;
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (a(i, j) != cplx(0.0, 0.0)) {
        diagonals[j - i].emplace_back(i, a(i, j));
        ++nnz;
      }
    }
  }
  // A band costs d^2 vectorized updates; a sparse product costs about
  // nnz * d scalar ones.
  if (static_cast<Eigen::Index>(diagonals.size()) * d <= 4 * nnz) {
    act.banded = true;
    for (auto& [offset, entries] : diagonals) {
      std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      const Eigen::Index start = entries.front().first;
      Vector coeff = Vector::Zero(entries.back().first - start + 1);
      for (const auto& [i, v] : entries) coeff(i - start) = v;
      act.bands.push_back({offset, start, std::move(coeff)});
    }
  } else {
    act.sparse = a.sparseView();
    act.sparse_adjoint = Matrix(a.adjoint()).sparseView();
  }
  return act;
}

void LindbladGenerator::Action::left_add(const Matrix& x, Matrix& out, double scale) const {
  if (!banded) {
    out.noalias() += scale * (sparse * x);
    return;
  }
  for (const auto& b : bands) {
    const Eigen::Index len = b.coeff.size();
    const Vector c = scale * b.coeff;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.col(j).segment(b.start, len) += c.cwiseProduct(x.col(j).segment(b.start + b.offset, len));
    }
  }
}

void LindbladGenerator::Action::right_adjoint_add(const Matrix& x, Matrix& out, double scale) const {
  if (!banded) {
    out.noalias() += scale * (x * sparse_adjoint);
    return;
  }
  for (const auto& b : bands) {
    for (Eigen::Index j = 0; j < b.coeff.size(); ++j) {
      out.col(b.start + j) += (scale * std::conj(b.coeff(j))) * x.col(b.start + b.offset + j);
    }
  }
}

LindbladGenerator::LindbladGenerator(Operator hamiltonian, std::vector<Jump> jumps)
    : hamiltonian_(std::move(hamiltonian)) {
  const double herm = hamiltonian_.hermiticity_error();
  if (herm > kHamiltonianHermiticityTol) {
    std::ostringstream os;
    os << "LindbladGenerator: Hamiltonian Hermiticity error " << herm;
    throw InvalidModel(os.str());
  }
  for (auto& j : jumps) {
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate)) throw InvalidModel("LindbladGenerator: negative or non-finite rate");
    if (!(j.op.space() == hamiltonian_.space())) throw InvalidDimension("LindbladGenerator: jump on a different space");
    if (j.rate > 0.0) jumps_.push_back(std::move(j));
  }

  Matrix drift = cplx(0.0, -1.0) * hamiltonian_.matrix();
  for (const auto& j : jumps_) {
    drift -= 0.5 * j.rate * (j.op.matrix().adjoint() * j.op.matrix());
    jump_actions_.emplace_back(j.rate, Action::from(j.op.matrix()));
  }
  drift_ = Action::from(drift);
}

Matrix LindbladGenerator::apply(const Matrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) throw InvalidDimension("rhs: state dimension mismatch");
  Matrix out = Matrix::Zero(dim(), dim());
  drift_.left_add(rho, out, 1.0);
  drift_.right_adjoint_add(rho, out, 1.0);
  Matrix t(dim(), dim());
  for (const auto& [rate, x] : jump_actions_) {
    t.setZero();
    x.left_add(rho, t, 1.0);
    x.right_adjoint_add(t, out, rate);
  }
  return out;
}

void LindbladGenerator::apply_hermitian(const Matrix& rho, Matrix& out) const {
  thread_local Matrix t;
  out.setZero(dim(), dim());
  drift_.left_add(rho, out, 1.0);
  for (const auto& [rate, x] : jump_actions_) {
    t.setZero(dim(), dim());
    x.left_add(rho, t, 1.0);
    x.right_adjoint_add(t, out, 0.5 * rate);
  }
  add_adjoint_in_place(out);
}

}  // namespace twophoton
