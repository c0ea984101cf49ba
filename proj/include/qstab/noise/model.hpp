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

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/noise/channels.hpp"
#include "qstab/qsim/measure.hpp"
#include "qstab/qsim/pauli.hpp"

namespace qstab::noise {

using qsim::Confusion;

/// exp(-i angle/2 axis) applied after the ideal gate.
struct CoherentError {
  PauliString axis;
  double angle = 0.0;

  friend bool operator==(const CoherentError&, const CoherentError&) = default;
};

/// Error model of one gate class: stochastic Pauli part plus an optional
/// coherent rotation.
struct GateNoise {
  std::map<PauliString, double> pauli;
  std::optional<CoherentError> coherent;

  static GateNoise depolarizing(double lambda, int n) { return {depolarizing_probs(lambda, n), std::nullopt}; }

  bool is_ideal() const {
    for (const auto& [p, w] : pauli)
      if (w != 0.0 && !p.unsigned_copy().is_identity()) return false;
    return !coherent || coherent->angle == 0.0;
  }

  void validate(int arity) const {
    detail::check_probs(pauli, arity);
    if (coherent) {
      detail::require(coherent->axis.n_qubits() == arity, "coherent axis has the wrong size");
      coherent_overrotation(coherent->axis, coherent->angle);
    }
  }

  friend bool operator==(const GateNoise&, const GateNoise&) = default;
};

struct QubitNoise {
  double t1_us = std::numeric_limits<double>::infinity();
  double t2_us = std::numeric_limits<double>::infinity();
  Confusion readout;
  double prep_flip = 0.0;
  /// Single-qubit gate error on this qubit; falls back to the model default.
  std::optional<GateNoise> gate;

  bool has_damping() const { return std::isfinite(t1_us) || std::isfinite(t2_us); }

  void validate(int label) const {
    const std::string q = "qubit " + std::to_string(label) + ": ";
    detail::require(t1_us > 0.0 && t2_us > 0.0, q + "T1 and T2 must be positive");
    detail::require(t2_us <= 2.0 * t1_us * (1.0 + 1e-12), q + "T2 must not exceed 2*T1");
    readout.validate();
    detail::require(prep_flip >= 0.0 && prep_flip <= 1.0, q + "prep flip probability must be in [0, 1]");
    if (gate) gate->validate(1);
  }

  friend bool operator==(const QubitNoise&, const QubitNoise&) = default;
};

/// ZZ rotation between a spectator and the nearer qubit of an active pair,
/// applied during hard cycles in which that pair's gate runs.
struct Crosstalk {
  std::pair<int, int> pair;
  int spectator = 0;
  double angle = 0.0;

  friend bool operator==(const Crosstalk&, const Crosstalk&) = default;
};

struct Durations {
  double single_ns = 50.0;
  double cnot_ns = 300.0;

  friend bool operator==(const Durations&, const Durations&) = default;
};

/// All noise parameters, keyed by physical qubit labels. Pair entries match
/// either orientation.
struct NoiseModel {
  std::map<int, QubitNoise> qubits;
  GateNoise single_default;
  std::map<std::pair<int, int>, GateNoise> cnots;
  GateNoise cnot_default;
  std::vector<Crosstalk> crosstalk;
  Durations durations;

  static NoiseModel ideal() { return {}; }

  const QubitNoise& qubit(int label) const {
    static const QubitNoise kIdeal;
    auto it = qubits.find(label);
    return it == qubits.end() ? kIdeal : it->second;
  }

  const GateNoise& single(int label) const {
    const QubitNoise& q = qubit(label);
    return q.gate ? *q.gate : single_default;
  }

  const GateNoise& cnot(int a, int b) const {
    if (auto it = cnots.find({a, b}); it != cnots.end()) return it->second;
    if (auto it = cnots.find({b, a}); it != cnots.end()) return it->second;
    return cnot_default;
  }

  GateNoise* find_cnot(int a, int b) {
    if (auto it = cnots.find({a, b}); it != cnots.end()) return &it->second;
    if (auto it = cnots.find({b, a}); it != cnots.end()) return &it->second;
    return nullptr;
  }

  /// True when executing under this model equals ideal execution with
  /// ideal state preparation (readout may still be imperfect).
  bool is_coherent_ideal() const {
    if (!single_default.is_ideal() || !cnot_default.is_ideal()) return false;
    for (const auto& [l, q] : qubits)
      if (q.has_damping() || q.prep_flip != 0.0 || (q.gate && !q.gate->is_ideal())) return false;
    for (const auto& [p, g] : cnots)
      if (!g.is_ideal()) return false;
    for (const auto& c : crosstalk)
      if (c.angle != 0.0) return false;
    return true;
  }

  bool has_readout_error() const {
    for (const auto& [l, q] : qubits)
      if (!q.readout.is_ideal()) return true;
    return false;
  }

  void validate() const {
    for (const auto& [l, q] : qubits) q.validate(l);
    single_default.validate(1);
    cnot_default.validate(2);
    for (const auto& [p, g] : cnots) {
      detail::require(p.first != p.second, "CNOT pair must join distinct qubits");
      g.validate(2);
    }
    for (const auto& c : crosstalk) {
      detail::require(c.pair.first != c.pair.second, "crosstalk pair must join distinct qubits");
      detail::require(c.spectator != c.pair.first && c.spectator != c.pair.second,
                      "crosstalk spectator must not belong to its pair");
      detail::require(std::isfinite(c.angle), "crosstalk angle must be finite");
    }
    detail::require(durations.single_ns >= 0.0 && durations.cnot_ns >= 0.0, "gate durations must be non-negative");
  }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

}  // namespace qstab::noise
