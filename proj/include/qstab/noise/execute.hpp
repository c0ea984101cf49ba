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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qstab/circuits/circuit.hpp"
#include "qstab/core/error.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/noise/channels.hpp"
#include "qstab/noise/model.hpp"
#include "qstab/qsim/kraus.hpp"
#include "qstab/qsim/measure.hpp"
#include "qstab/qsim/state.hpp"

namespace qstab::noise {

using circuits::Circuit;
using circuits::Cycle;
using circuits::CycleKind;
using circuits::Gate;
using circuits::GateKind;
using qsim::DensityMatrix;
using qsim::StateVector;

/// Runs circuits under a NoiseModel resolved for one register (the
/// circuit's layout labels). Per gate the order is: ideal gate, coherent
/// rotation, Pauli channel, damping for the gate duration. Idle qubits are
/// damped for the cycle duration; crosstalk follows the gates of a hard
/// cycle. The object is immutable after construction.
class Executor {
 public:
  Executor(const NoiseModel& model, std::vector<int> layout) : layout_(std::move(layout)) {
    model.validate();
    const int n = static_cast<int>(layout_.size());
    detail::require(n >= 1 && n <= qsim::kMaxQubits, "register must have 1..5 qubits");
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        detail::require(layout_[static_cast<std::size_t>(a)] != layout_[static_cast<std::size_t>(b)],
                        "layout labels must be distinct");
    durations_ = model.durations;
    ideal_ = model.is_coherent_ideal();
    for (int q = 0; q < n; ++q) {
      const int label = layout_[static_cast<std::size_t>(q)];
      const QubitNoise& qn = model.qubit(label);
      Local loc;
      loc.gate = compile(model.single(label), 1);
      if (qn.has_damping()) {
        loc.damp_single = damping_channel(qn.t1_us, qn.t2_us, durations_.single_ns);
        loc.damp_cnot = damping_channel(qn.t1_us, qn.t2_us, durations_.cnot_ns);
      }
      if (qn.prep_flip > 0.0) {
        std::map<PauliString, double> flip{{PauliString::parse("X"), qn.prep_flip}};
        loc.prep = pauli_channel(flip, 1);
      }
      readout_.push_back(qn.readout);
      local_.push_back(std::move(loc));
    }
    pairs_.resize(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        const int la = layout_[static_cast<std::size_t>(a)], lb = layout_[static_cast<std::size_t>(b)];
        Pair& p = pairs_[static_cast<std::size_t>(a * n + b)];
        const bool reversed = model.cnots.count({la, lb}) == 0 && model.cnots.count({lb, la}) != 0;
        p.targets = reversed ? std::vector<int>{b, a} : std::vector<int>{a, b};
        p.gate = compile(model.cnot(la, lb), 2);
      }
    for (const Crosstalk& c : model.crosstalk) {
      if (c.angle == 0.0) continue;
      const int s = logical(c.spectator), a = logical(c.pair.first), b = logical(c.pair.second);
      if (s < 0 || a < 0 || b < 0) continue;
      const int near = std::abs(s - a) <= std::abs(s - b) ? a : b;
      crosstalk_.push_back({a, b, {s, near}, coherent_overrotation(PauliString::parse("ZZ"), c.angle)});
    }
  }

  int n_qubits() const { return static_cast<int>(layout_.size()); }
  const std::vector<int>& layout() const { return layout_; }
  const std::vector<qsim::Confusion>& readout() const { return readout_; }

  /// Statevector execution is used when neither the model nor the circuit
  /// introduces a channel.
  bool needs_density(const Circuit& c) const {
    if (!ideal_) return true;
    for (const Cycle& cy : c.cycles)
      if (cy.kind == CycleKind::Channel) return true;
    return false;
  }

  StateVector run_pure(const Circuit& c) const {
    check(c);
    detail::require(!needs_density(c), "circuit execution under this model requires a density matrix");
    StateVector psi(n_qubits());
    for (const Cycle& cy : c.cycles)
      for (const Gate& g : cy.gates) psi.apply_unchecked(circuits::gate_matrix(g), g.targets());
    return psi;
  }

  DensityMatrix run_density(const Circuit& c) const {
    check(c);
    DensityMatrix rho(n_qubits());
    for (int q = 0; q < n_qubits(); ++q)
      if (local_[static_cast<std::size_t>(q)].prep) apply(rho, *local_[static_cast<std::size_t>(q)].prep, {q});
    for (const Cycle& cy : c.cycles) run_cycle(rho, cy);
    return rho;
  }

  /// Outcome distribution before readout error.
  std::vector<double> probabilities(const Circuit& c) const {
    return needs_density(c) ? run_density(c).probabilities() : run_pure(c).probabilities();
  }

  /// Exact sign * <Z-string> after readout confusion.
  double expectation_exact(const Circuit& c, const PauliString& measured) const {
    return parity_expectation(probabilities(c), measured);
  }

  double parity_expectation(const std::vector<double>& probs, const PauliString& measured) const {
    const auto mask = z_mask(measured);
    const int n = n_qubits();
    double acc = 0.0;
    for (std::uint64_t idx = 0; idx < probs.size(); ++idx) {
      if (probs[idx] == 0.0) continue;
      double f = 1.0;
      for (int q = 0; q < n; ++q) {
        if (!((mask >> qsim::detail::bit_of(n, q)) & 1)) continue;
        const int bit = static_cast<int>((idx >> qsim::detail::bit_of(n, q)) & 1);
        const auto& m = readout_[static_cast<std::size_t>(q)].m;
        f *= bit == 0 ? 1.0 - 2.0 * m[0][1] : -(1.0 - 2.0 * m[1][0]);
      }
      acc += probs[idx] * f;
    }
    return measured.sign() * acc;
  }

  /// Sampled sign * <Z-string> over `shots` readouts.
  double expectation_sampled(const Circuit& c, const PauliString& measured, int shots, Rng& rng) const {
    const auto mask = z_mask(measured);
    const auto outcomes = qsim::sample_outcomes(probabilities(c), n_qubits(), readout_, shots, rng);
    long long sum = 0;
    for (std::uint64_t o : outcomes) sum += qsim::detail::parity(o & mask) ? -1 : 1;
    return measured.sign() * static_cast<double>(sum) / shots;
  }

  std::map<std::string, int> counts(const Circuit& c, int shots, Rng& rng) const {
    return qsim::counts_from_outcomes(qsim::sample_outcomes(probabilities(c), n_qubits(), readout_, shots, rng),
                                      n_qubits());
  }

 private:
  struct Compiled {
    std::optional<Matrix> coherent;
    std::optional<KrausChannel> pauli;
  };
  struct Local {
    Compiled gate;
    std::optional<KrausChannel> damp_single, damp_cnot, prep;
  };
  struct Pair {
    std::vector<int> targets;
    Compiled gate;
  };
  struct Xtalk {
    int a, b;
    std::vector<int> targets;
    Matrix u;
  };

  static Compiled compile(const GateNoise& g, int arity) {
    Compiled c;
    if (g.coherent && g.coherent->angle != 0.0) c.coherent = coherent_overrotation(g.coherent->axis, g.coherent->angle);
    bool any = false;
    for (const auto& [p, w] : g.pauli) any = any || (w != 0.0 && !p.unsigned_copy().is_identity());
    if (any) c.pauli = pauli_channel(g.pauli, arity);
    return c;
  }

  int logical(int label) const {
    for (std::size_t i = 0; i < layout_.size(); ++i)
      if (layout_[i] == label) return static_cast<int>(i);
    return -1;
  }

  void check(const Circuit& c) const {
    detail::require(c.n_qubits == n_qubits(), "circuit size does not match the executor register");
    detail::require(c.layout == layout_, "circuit layout does not match the executor register");
  }

  std::uint64_t z_mask(const PauliString& measured) const {
    detail::require(measured.n_qubits() == n_qubits(), "measured Pauli does not match register size");
    std::uint64_t mask = 0;
    for (int q = 0; q < n_qubits(); ++q) {
      detail::require(measured[q] == qsim::PauliLetter::I || measured[q] == qsim::PauliLetter::Z,
                      "only Z-type Pauli strings can be read out directly");
      if (measured[q] == qsim::PauliLetter::Z) mask |= std::uint64_t{1} << qsim::detail::bit_of(n_qubits(), q);
    }
    return mask;
  }

  static void apply(DensityMatrix& rho, const KrausChannel& ch, std::vector<int> targets) {
    qsim::apply_channel_in_place(rho, ch, targets);
  }

  void apply_compiled(DensityMatrix& rho, const Compiled& c, const std::vector<int>& targets) const {
    if (c.coherent) rho.apply_unchecked(*c.coherent, targets);
    if (c.pauli) apply(rho, *c.pauli, targets);
  }

  void run_cycle(DensityMatrix& rho, const Cycle& cy) const {
    const int n = n_qubits();
    if (cy.kind == CycleKind::Channel) {
      qsim::apply_channel_in_place(rho, *cy.channel, cy.channel_targets);
      return;
    }
    if (cy.gates.empty()) return;
    std::vector<bool> busy(static_cast<std::size_t>(n), false);
    const bool hard = cy.kind == CycleKind::Hard;
    for (const Gate& g : cy.gates) {
      rho.apply_unchecked(circuits::gate_matrix(g), g.targets());
      if (g.arity() == 1) {
        const int q = g.qubits[0];
        busy[static_cast<std::size_t>(q)] = true;
        const Local& loc = local_[static_cast<std::size_t>(q)];
        apply_compiled(rho, loc.gate, {q});
        const auto& damp = hard ? loc.damp_cnot : loc.damp_single;
        if (damp) apply(rho, *damp, {q});
      } else {
        const int a = g.qubits[0], b = g.qubits[1];
        busy[static_cast<std::size_t>(a)] = busy[static_cast<std::size_t>(b)] = true;
        const Pair& p = pairs_[static_cast<std::size_t>(a * n + b)];
        apply_compiled(rho, p.gate, p.targets);
        for (int q : {a, b})
          if (local_[static_cast<std::size_t>(q)].damp_cnot) apply(rho, *local_[static_cast<std::size_t>(q)].damp_cnot, {q});
      }
    }
    for (int q = 0; q < n; ++q) {
      if (busy[static_cast<std::size_t>(q)]) continue;
      const auto& damp = hard ? local_[static_cast<std::size_t>(q)].damp_cnot : local_[static_cast<std::size_t>(q)].damp_single;
      if (damp) apply(rho, *damp, {q});
    }
    if (!hard) return;
    for (const Xtalk& x : crosstalk_) {
      bool active = false;
      for (const Gate& g : cy.gates)
        active = active || (g.qubits[0] == x.a && g.qubits[1] == x.b) || (g.qubits[0] == x.b && g.qubits[1] == x.a);
      if (active) rho.apply_unchecked(x.u, x.targets);
    }
  }

  std::vector<int> layout_;
  Durations durations_;
  bool ideal_ = true;
  std::vector<Local> local_;
  std::vector<Pair> pairs_;
  std::vector<Xtalk> crosstalk_;
  std::vector<qsim::Confusion> readout_;
};

}  // namespace qstab::noise
