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

#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qstab/circuits/gate.hpp"
#include "qstab/core/error.hpp"
#include "qstab/core/format.hpp"
#include "qstab/qsim/kraus.hpp"

namespace qstab::circuits {

/// Easy cycles hold single-qubit gates, hard cycles hold two-qubit Clifford
/// entanglers (CNOT, or C2 for two-qubit RB). Channel cycles carry an
/// explicit Kraus channel and are never unitary.
enum class CycleKind { Easy, Hard, Channel };

struct Cycle {
  CycleKind kind = CycleKind::Easy;
  std::vector<Gate> gates;
  std::shared_ptr<const qsim::KrausChannel> channel;
  std::vector<int> channel_targets;

  static Cycle easy(std::vector<Gate> g = {}) { return {CycleKind::Easy, std::move(g), nullptr, {}}; }
  static Cycle hard(std::vector<Gate> g) { return {CycleKind::Hard, std::move(g), nullptr, {}}; }
  static Cycle noise(qsim::KrausChannel ch, std::vector<int> targets) {
    return {CycleKind::Channel, {}, std::make_shared<const qsim::KrausChannel>(std::move(ch)), std::move(targets)};
  }

  bool is_clifford() const {
    if (kind == CycleKind::Channel) return false;
    for (const Gate& g : gates)
      if (!g.is_clifford()) return false;
    return true;
  }

  /// Checks gate ranges, disjointness and the easy/hard gate classes.
  void validate(int n_qubits) const {
    std::vector<bool> used(static_cast<std::size_t>(n_qubits > 0 ? n_qubits : 0), false);
    auto claim = [&](int q) {
      detail::require(q >= 0 && q < n_qubits, "gate qubit " + std::to_string(q) + " out of range");
      detail::require(!used[static_cast<std::size_t>(q)], "cycle gates overlap on qubit " + std::to_string(q));
      used[static_cast<std::size_t>(q)] = true;
    };
    if (kind == CycleKind::Channel) {
      detail::require(channel != nullptr, "channel cycle without a channel");
      detail::require(gates.empty(), "channel cycle cannot hold gates");
      detail::require(static_cast<int>(channel_targets.size()) == channel->arity(),
                      "channel arity does not match target count");
      for (int q : channel_targets) claim(q);
      return;
    }
    for (const Gate& g : gates) {
      if (kind == CycleKind::Hard)
        detail::require(g.kind == GateKind::CNOT || g.kind == GateKind::C2,
                        "hard cycles may only contain CNOT or C2 gates");
      else
        detail::require(g.arity() == 1, "easy cycles may only contain single-qubit gates");
      for (int q : g.targets()) claim(q);
    }
  }

  friend bool operator==(const Cycle& a, const Cycle& b) {
    return a.kind == b.kind && a.gates == b.gates && a.channel == b.channel &&
           a.channel_targets == b.channel_targets;
  }
};

/// Ordered cycles over logical qubits 0..n-1. layout[q] is the physical
/// label of logical qubit q.
struct Circuit {
  int n_qubits = 0;
  std::vector<Cycle> cycles;
  std::vector<int> layout;

  Circuit() = default;
  explicit Circuit(int n, std::vector<int> labels = {}) : n_qubits(n), layout(std::move(labels)) {
    detail::require(n >= 1, "circuit needs at least one qubit");
    if (layout.empty()) {
      layout.resize(static_cast<std::size_t>(n));
      std::iota(layout.begin(), layout.end(), 0);
    }
    detail::require(static_cast<int>(layout.size()) == n, "layout size must equal qubit count");
  }

  void add(Cycle c) {
    c.validate(n_qubits);
    cycles.push_back(std::move(c));
  }

  void append(const Circuit& other) {
    detail::require(other.n_qubits == n_qubits, "circuit sizes differ");
    for (const Cycle& c : other.cycles) cycles.push_back(c);
  }

  void validate() const {
    detail::require(static_cast<int>(layout.size()) == n_qubits, "layout size must equal qubit count");
    for (const Cycle& c : cycles) c.validate(n_qubits);
  }

  int count_cycles(CycleKind k) const {
    int total = 0;
    for (const Cycle& c : cycles) total += c.kind == k ? 1 : 0;
    return total;
  }

  int count_gates(GateKind k) const {
    int total = 0;
    for (const Cycle& c : cycles)
      for (const Gate& g : c.gates) total += g.kind == k ? 1 : 0;
    return total;
  }

  int physical(int q) const { return layout[static_cast<std::size_t>(q)]; }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline GateKind gate_kind_from_name(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(GateKind::C2); ++k)
    if (gate_name(static_cast<GateKind>(k)) == name) return static_cast<GateKind>(k);
  throw ValidationError("unknown gate '" + std::string(name) + "'");
}

}  // namespace detail

/// Line-based text form:
///   circuit n=4 layout=6,7,12,11
///   easy H 0 ; H 1 ; RZ 2 0.4
///   hard CNOT 0 1 ; CNOT 2 3
/// C1/C2 gates carry a trailing group index. Channel cycles have no text form.
inline std::string to_text(const Circuit& c) {
  std::ostringstream os;
  os << "circuit n=" << c.n_qubits << " layout=";
  for (std::size_t i = 0; i < c.layout.size(); ++i) os << (i ? "," : "") << c.layout[i];
  os << '\n';
  for (const Cycle& cy : c.cycles) {
    detail::require(cy.kind != CycleKind::Channel, "channel cycles cannot be serialized");
    os << (cy.kind == CycleKind::Hard ? "hard" : "easy");
    for (std::size_t i = 0; i < cy.gates.size(); ++i) {
      const Gate& g = cy.gates[i];
      os << (i ? " ; " : " ") << gate_name(g.kind);
      for (int q : g.targets()) os << ' ' << q;
      if (g.kind == GateKind::RZ || g.kind == GateKind::RX) os << ' ' << format_double(g.angle);
      if (g.kind == GateKind::C1 || g.kind == GateKind::C2) os << ' ' << g.clifford;
    }
    os << '\n';
  }
  return os.str();
}

inline Circuit circuit_from_text(std::string_view text) {
  const auto lines = detail::split_on(text, '\n');
  Circuit circ;
  bool have_header = false;
  int line_no = 0;
  for (std::string_view line : lines) {
    ++line_no;
    const auto words = detail::split_ws(line);
    if (words.empty()) continue;
    try {
      if (!have_header) {
        if (words[0] != "circuit" || words.size() < 2) throw ValidationError("expected 'circuit n=<k>' header");
        int n = 0;
        std::vector<int> labels;
        for (std::size_t i = 1; i < words.size(); ++i) {
          if (words[i].starts_with("n=")) {
            n = static_cast<int>(parse_int(words[i].substr(2)));
          } else if (words[i].starts_with("layout=")) {
            for (auto tok : detail::split_on(words[i].substr(7), ','))
              labels.push_back(static_cast<int>(parse_int(tok)));
          } else {
            throw ValidationError("unknown header field '" + std::string(words[i]) + "'");
          }
        }
        circ = Circuit(n, std::move(labels));
        have_header = true;
        continue;
      }
      Cycle cy;
      if (words[0] == "hard")
        cy.kind = CycleKind::Hard;
      else if (words[0] == "easy")
        cy.kind = CycleKind::Easy;
      else
        throw ValidationError("expected 'easy' or 'hard'");
      const std::string_view rest = line.substr(line.find(words[0]) + words[0].size());
      for (std::string_view part : detail::split_on(rest, ';')) {
        const auto tok = detail::split_ws(part);
        if (tok.empty()) {
          if (detail::split_ws(rest).empty()) break;
          throw ValidationError("empty gate entry");
        }
        const GateKind k = detail::gate_kind_from_name(tok[0]);
        const std::size_t arity = static_cast<std::size_t>(gate_arity(k));
        const bool has_angle = k == GateKind::RZ || k == GateKind::RX;
        const bool has_index = k == GateKind::C1 || k == GateKind::C2;
        const std::size_t want = 1 + arity + ((has_angle || has_index) ? 1 : 0);
        if (tok.size() != want) throw ValidationError("wrong number of fields for " + std::string(tok[0]));
        const int a = static_cast<int>(parse_int(tok[1]));
        const int b = arity == 2 ? static_cast<int>(parse_int(tok[2])) : a;
        Gate g;
        switch (k) {
          case GateKind::RZ: g = Gate::rz(a, parse_double(tok[2])); break;
          case GateKind::RX: g = Gate::rx(a, parse_double(tok[2])); break;
          case GateKind::C1: g = Gate::c1(a, static_cast<int>(parse_int(tok[2]))); break;
          case GateKind::CNOT: g = Gate::cnot(a, b); break;
          case GateKind::C2: g = Gate::c2(a, b, static_cast<int>(parse_int(tok[3]))); break;
          default: g = Gate::single(k, a); break;
        }
        cy.gates.push_back(g);
      }
      circ.add(std::move(cy));
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, "missing circuit header");
  return circ;
}

}  // namespace qstab::circuits
