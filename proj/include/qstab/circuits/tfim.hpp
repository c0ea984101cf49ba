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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstab/circuits/circuit.hpp"
#include "qstab/core/error.hpp"
#include "qstab/qsim/measure.hpp"
#include "qstab/qsim/state.hpp"

namespace qstab::circuits {

/// Open transverse-field Ising chain. One Trotter step is U1(dt) U2(dt) with
/// U1 = exp(-i h_T dt sum Z_i) and U2 = exp(-i J dt sum X_i X_{i+1}).
struct TfimParams {
  int n_sites = 4;
  double J = 0.02;
  double h_T = 1.0;
  double dt = 10.0;
  int steps = 1;

  void validate() const {
    detail::require(n_sites >= 2 && n_sites <= qsim::kMaxQubits, "n_sites must be in [2, 5]");
    detail::require(dt >= 0.0, "dt must be non-negative");
    detail::require(steps >= 0, "steps must be non-negative");
  }
};

/// circuit1 runs bonds (1,2) and (3,4) in parallel, then bond (2,3);
/// circuit2 runs all bonds one after another.
enum class TfimVariant { Circuit1, Circuit2 };

inline TfimVariant tfim_variant_from_name(std::string_view s) {
  if (s == "circuit1" || s == "1") return TfimVariant::Circuit1;
  if (s == "circuit2" || s == "2") return TfimVariant::Circuit2;
  throw ValidationError("circuit variant must be circuit1 or circuit2 (got '" + std::string(s) + "')");
}

inline std::string tfim_variant_name(TfimVariant v) { return v == TfimVariant::Circuit1 ? "circuit1" : "circuit2"; }

namespace detail {

inline Cycle hadamard_layer(int n) {
  Cycle c = Cycle::easy();
  for (int q = 0; q < n; ++q) c.gates.push_back(Gate::single(GateKind::H, q));
  return c;
}

/// Groups of bonds (i, i+1) that share a CNOT-Rz-CNOT block.
inline std::vector<std::vector<std::pair<int, int>>> bond_groups(TfimVariant v, int n) {
  std::vector<std::vector<std::pair<int, int>>> groups;
  if (v == TfimVariant::Circuit2) {
    for (int i = 0; i + 1 < n; ++i) groups.push_back({{i, i + 1}});
    return groups;
  }
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<std::pair<int, int>> g;
    for (int i = parity; i + 1 < n; i += 2) g.emplace_back(i, i + 1);
    if (!g.empty()) groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace detail

/// One Trotter step. exp(-i J dt X_a X_b) is compiled as
/// (H x H) CNOT(a,b) RZ_b(2 J dt) CNOT(a,b) (H x H).
inline Circuit build_tfim_step(TfimVariant variant, const TfimParams& params, std::vector<int> labels = {}) {
  params.validate();
  const int n = params.n_sites;
  detail::require(labels.empty() || static_cast<int>(labels.size()) == n,
                  "layout has " + std::to_string(labels.size()) + " qubits but n_sites is " + std::to_string(n));
  Circuit c(n, std::move(labels));
  const double theta_xx = 2.0 * params.J * params.dt;
  const double theta_z = 2.0 * params.h_T * params.dt;
  c.add(detail::hadamard_layer(n));
  for (const auto& group : detail::bond_groups(variant, n)) {
    std::vector<Gate> cnots;
    Cycle rz = Cycle::easy();
    for (auto [a, b] : group) {
      cnots.push_back(Gate::cnot(a, b));
      rz.gates.push_back(Gate::rz(b, theta_xx));
    }
    c.add(Cycle::hard(cnots));
    c.add(std::move(rz));
    c.add(Cycle::hard(cnots));
  }
  c.add(detail::hadamard_layer(n));
  Cycle field = Cycle::easy();
  for (int q = 0; q < n; ++q) field.gates.push_back(Gate::rz(q, theta_z));
  c.add(std::move(field));
  return c;
}

/// params.steps repetitions of the step circuit.
inline Circuit build_tfim_circuit(TfimVariant variant, const TfimParams& params, std::vector<int> labels = {}) {
  const Circuit step = build_tfim_step(variant, params, std::move(labels));
  Circuit c(step.n_qubits, step.layout);
  for (int s = 0; s < params.steps; ++s) c.append(step);
  return c;
}

/// Hard-cycle sequence of one step, in time order.
inline std::vector<Cycle> tfim_hard_cycles(TfimVariant variant, const TfimParams& params) {
  std::vector<Cycle> out;
  for (const Cycle& c : build_tfim_step(variant, params).cycles)
    if (c.kind == CycleKind::Hard) out.push_back(c);
  return out;
}

/// <n_site> = (1 - <Z_site>)/2 with |1> occupied; site is 1-based.
template <typename State>
double occupation(const State& state, int site) {
  detail::require(site >= 1 && site <= state.n_qubits(),
                  "site " + std::to_string(site) + " out of range 1.." + std::to_string(state.n_qubits()));
  qsim::PauliString z(state.n_qubits());
  z.set(site - 1, qsim::PauliLetter::Z);
  return (1.0 - qsim::expectation_pauli(state, z)) / 2.0;
}

}  // namespace qstab::circuits
