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

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include "qstab/circuits/clifford.hpp"
#include "qstab/core/error.hpp"
#include "qstab/qsim/pauli.hpp"

namespace qstab::circuits {

enum class GateKind { I, X, Y, Z, H, S, Sdg, RZ, RX, C1, CNOT, C2 };

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::I: return "I";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::RZ: return "RZ";
    case GateKind::RX: return "RX";
    case GateKind::C1: return "C1";
    case GateKind::CNOT: return "CNOT";
    case GateKind::C2: return "C2";
  }
  return "?";
}

inline int gate_arity(GateKind k) { return (k == GateKind::CNOT || k == GateKind::C2) ? 2 : 1; }

/// A gate on logical qubit indices. Rotations carry `angle` (radians,
/// RZ(t) = exp(-i t Z / 2)); C1/C2 carry an index into the enumerated
/// one- or two-qubit Clifford group.
struct Gate {
  GateKind kind = GateKind::I;
  std::array<int, 2> qubits{0, 0};
  double angle = 0.0;
  int clifford = 0;

  int arity() const { return gate_arity(kind); }
  std::span<const int> targets() const { return {qubits.data(), static_cast<std::size_t>(arity())}; }

  bool is_clifford() const { return kind != GateKind::RZ && kind != GateKind::RX; }

  static Gate single(GateKind k, int q) {
    detail::require(gate_arity(k) == 1 && k != GateKind::RZ && k != GateKind::RX && k != GateKind::C1,
                    "not a fixed single-qubit gate");
    return {k, {q, q}, 0.0, 0};
  }
  static Gate pauli(PauliLetter p, int q) {
    static constexpr GateKind kinds[4] = {GateKind::I, GateKind::X, GateKind::Y, GateKind::Z};
    return {kinds[static_cast<int>(p)], {q, q}, 0.0, 0};
  }
  static Gate rz(int q, double theta) { return {GateKind::RZ, {q, q}, theta, 0}; }
  static Gate rx(int q, double theta) { return {GateKind::RX, {q, q}, theta, 0}; }
  static Gate c1(int q, int index) {
    detail::require(index >= 0 && index < static_cast<int>(clifford1().size()), "C1 index out of range");
    return {GateKind::C1, {q, q}, 0.0, index};
  }
  static Gate cnot(int control, int target) {
    detail::require(control != target, "CNOT control equals target");
    return {GateKind::CNOT, {control, target}, 0.0, 0};
  }
  static Gate c2(int a, int b, int index) {
    detail::require(a != b, "C2 qubits must differ");
    detail::require(index >= 0 && index < static_cast<int>(clifford2().size()), "C2 index out of range");
    return {GateKind::C2, {a, b}, 0.0, index};
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Local 2^k x 2^k unitary of the gate (targets()[0] is the leftmost factor).
inline Matrix gate_matrix(const Gate& g) {
  const cplx i(0, 1);
  Matrix m(2, 2);
  switch (g.kind) {
    case GateKind::I:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z: return qsim::letter_matrix(static_cast<PauliLetter>(static_cast<int>(g.kind)));
    case GateKind::H: return detail::hadamard_matrix();
    case GateKind::S: return detail::phase_matrix();
    case GateKind::Sdg: return detail::phase_matrix().adjoint();
    case GateKind::RZ: m << std::exp(-i * (g.angle / 2)), 0, 0, std::exp(i * (g.angle / 2)); return m;
    case GateKind::RX: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      m << c, -i * s, -i * s, c;
      return m;
    }
    case GateKind::C1: return clifford1()[static_cast<std::size_t>(g.clifford)].unitary;
    case GateKind::CNOT: return detail::cnot_matrix();
    case GateKind::C2: return clifford2()[static_cast<std::size_t>(g.clifford)].unitary;
  }
  return Matrix::Identity(2, 2);
}

/// Tableau of a Clifford gate embedded in an n-qubit register.
inline Tableau gate_tableau(const Gate& g, int n) {
  const int q = g.qubits[0];
  switch (g.kind) {
    case GateKind::I:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z: return Tableau::pauli(n, q, static_cast<PauliLetter>(static_cast<int>(g.kind)));
    case GateKind::H: return Tableau::hadamard(n, q);
    case GateKind::S: return Tableau::phase(n, q);
    case GateKind::Sdg: return Tableau::phase_dagger(n, q);
    case GateKind::C1: return Tableau::embed(clifford1()[static_cast<std::size_t>(g.clifford)].tableau, n, q);
    case GateKind::CNOT: return Tableau::cnot(n, g.qubits[0], g.qubits[1]);
    case GateKind::C2: {
      const Tableau& local = clifford2()[static_cast<std::size_t>(g.clifford)].tableau;
      auto lift = [&](const PauliString& p) {
        PauliString out(n);
        out.set(g.qubits[0], p[0]);
        out.set(g.qubits[1], p[1]);
        out.set_sign(p.sign());
        return out;
      };
      Tableau t = Tableau::identity(n);
      for (int l = 0; l < 2; ++l) t.set_images(g.qubits[static_cast<std::size_t>(l)], lift(local.x_image(l)), lift(local.z_image(l)));
      return t;
    }
    case GateKind::RZ:
    case GateKind::RX: break;
  }
  throw ValidationError("gate " + std::string(gate_name(g.kind)) + " is not Clifford");
}

}  // namespace qstab::circuits
