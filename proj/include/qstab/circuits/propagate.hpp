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

#include "qstab/circuits/circuit.hpp"
#include "qstab/circuits/clifford.hpp"
#include "qstab/circuits/gate.hpp"
#include "qstab/core/error.hpp"

namespace qstab::circuits {

/// Tableau of a whole Clifford cycle on n qubits.
inline Tableau cycle_tableau(const Cycle& c, int n) {
  detail::require(c.is_clifford(), "cycle contains a non-Clifford gate");
  Tableau t = Tableau::identity(n);
  for (const Gate& g : c.gates) t = t.then(gate_tableau(g, n));
  return t;
}

/// C P C^dagger for a Clifford cycle C, by generator images only.
inline PauliString propagate_pauli(const Cycle& c, const PauliString& p) {
  detail::require(c.is_clifford(), "cycle contains a non-Clifford gate");
  PauliString out = p;
  for (const Gate& g : c.gates) out = gate_tableau(g, p.n_qubits()).conjugate(out);
  return out;
}

/// Propagates through every cycle of a Clifford circuit in time order.
inline PauliString propagate_pauli(const Circuit& circ, const PauliString& p) {
  detail::require(p.n_qubits() == circ.n_qubits, "Pauli string does not match circuit size");
  PauliString out = p;
  for (const Cycle& c : circ.cycles) out = propagate_pauli(c, out);
  return out;
}

}  // namespace qstab::circuits
