// Copyright 2026 The qstab Authors
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

#include "qstab/circuits/circuit.hpp"
#include "qstab/core/error.hpp"
#include "qstab/qsim/state.hpp"

namespace qstab::qsim {

/// Product of the embedded gate unitaries in time order.
inline Matrix circuit_unitary(const circuits::Circuit& c) {
  qstab::detail::require(c.n_qubits >= 1 && c.n_qubits <= kMaxQubits, "circuit_unitary supports 1..5 qubits");
  const Eigen::Index d = Eigen::Index{1} << c.n_qubits;
  Matrix u = Matrix::Identity(d, d);
  for (const circuits::Cycle& cy : c.cycles) {
    qstab::detail::require(cy.kind != circuits::CycleKind::Channel, "circuit contains a noise channel");
    for (const circuits::Gate& g : cy.gates) {
      const Matrix gm = circuits::gate_matrix(g);
      for (Eigen::Index col = 0; col < d; ++col) detail::apply_local(u.data() + col * d, 1, c.n_qubits, gm, g.targets());
    }
  }
  return u;
}

/// Largest-entry phase alignment: max |a - phase * b| after choosing the
/// phase that matches at the largest-magnitude entry of b.
inline double phase_aligned_distance(const Matrix& a, const Matrix& b) {
  qstab::detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shapes differ");
  Eigen::Index r = 0, col = 0;
  b.cwiseAbs().maxCoeff(&r, &col);
  if (std::abs(b(r, col)) == 0.0) return a.cwiseAbs().maxCoeff();
  const cplx ratio = a(r, col) / b(r, col);
  const cplx phase = std::abs(ratio) > 0 ? ratio / std::abs(ratio) : cplx(1.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

inline bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol) {
  return phase_aligned_distance(a, b) <= tol;
}

}  // namespace qstab::qsim
