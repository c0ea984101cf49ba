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

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "qstab/circuits/circuit.hpp"
#include "qstab/core/error.hpp"

namespace qstab::circuits {

/// Physical labels of the three four-qubit chains.
inline std::array<int, 4> layout_qubits(int layout_id) {
  switch (layout_id) {
    case 1: return {0, 1, 2, 3};
    case 2: return {6, 7, 12, 11};
    case 3: return {16, 17, 18, 19};
    default: throw ValidationError("layout id must be 1, 2 or 3 (got " + std::to_string(layout_id) + ")");
  }
}

/// Logical CNOT pairs of a cycle on a chain [a,b,c,d]:
/// 1 = (a,b)||(c,d), 2 = (a,b), 3 = (b,c), 4 = (c,d).
inline std::vector<std::pair<int, int>> cycle_pairs(int cycle_id) {
  switch (cycle_id) {
    case 1: return {{0, 1}, {2, 3}};
    case 2: return {{0, 1}};
    case 3: return {{1, 2}};
    case 4: return {{2, 3}};
    default: throw ValidationError("cycle id must be 1..4 (got " + std::to_string(cycle_id) + ")");
  }
}

/// Hard cycle on logical indices of the 4-qubit register.
inline Cycle layout_cycles(int layout_id, int cycle_id) {
  layout_qubits(layout_id);
  std::vector<Gate> gates;
  for (auto [a, b] : cycle_pairs(cycle_id)) gates.push_back(Gate::cnot(a, b));
  return Cycle::hard(std::move(gates));
}

/// Same cycle expressed in physical labels.
inline std::vector<std::pair<int, int>> physical_pairs(int layout_id, int cycle_id) {
  const auto q = layout_qubits(layout_id);
  std::vector<std::pair<int, int>> out;
  for (auto [a, b] : cycle_pairs(cycle_id))
    out.emplace_back(q[static_cast<std::size_t>(a)], q[static_cast<std::size_t>(b)]);
  return out;
}

/// Cycle id (1..4) of a hard cycle of plain CNOTs on a 4-qubit chain, or 0
/// when it does not match any of them.
inline int identify_cycle(const Cycle& c) {
  if (c.kind != CycleKind::Hard) return 0;
  for (int id = 1; id <= 4; ++id) {
    const auto pairs = cycle_pairs(id);
    if (pairs.size() != c.gates.size()) continue;
    bool all = true;
    for (const Gate& g : c.gates) {
      bool found = false;
      for (auto [a, b] : pairs) found = found || (g.kind == GateKind::CNOT && g.qubits[0] == a && g.qubits[1] == b);
      all = all && found;
    }
    if (all) return id;
  }
  return 0;
}

/// Minimal register for benchmarking one cycle: the qubits it touches, in
/// increasing logical order, as a circuit of that size with the matching
/// physical labels. Returns the relabelled cycle.
struct CycleSupport {
  std::vector<int> logical;
  std::vector<int> labels;
  Cycle local;
};

inline CycleSupport cycle_support(const Cycle& c, const std::vector<int>& layout) {
  std::vector<int> qs;
  for (const Gate& g : c.gates)
    for (int q : g.targets()) qs.push_back(q);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  detail::require(!qs.empty(), "cycle has no gates");
  CycleSupport s;
  s.logical = qs;
  for (int q : qs) {
    detail::require(q >= 0 && q < static_cast<int>(layout.size()), "cycle qubit outside layout");
    s.labels.push_back(layout[static_cast<std::size_t>(q)]);
  }
  s.local = c;
  for (Gate& g : s.local.gates)
    for (int& q : g.qubits) q = static_cast<int>(std::lower_bound(qs.begin(), qs.end(), q) - qs.begin());
  return s;
}

}  // namespace qstab::circuits
