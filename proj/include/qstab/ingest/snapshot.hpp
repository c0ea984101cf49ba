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
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstab/circuits/circuit.hpp"
#include "qstab/core/error.hpp"
#include "qstab/core/format.hpp"
#include "qstab/noise/drift.hpp"
#include "qstab/noise/model.hpp"

namespace qstab::ingest {

enum class PairConvention { RawR, ProcessInfidelity };

inline std::string convention_name(PairConvention c) {
  return c == PairConvention::RawR ? "raw-r" : "process-infidelity";
}

inline PairConvention convention_from_name(std::string_view s) {
  if (s == "raw-r") return PairConvention::RawR;
  if (s == "process-infidelity") return PairConvention::ProcessInfidelity;
  throw ValidationError("pair_convention must be raw-r or process-infidelity (got '" + std::string(s) + "')");
}

struct QubitRecord {
  int qubit = 0;
  double t1_us = 0.0;
  double t2_us = 0.0;
  double readout = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;

  friend bool operator==(const QubitRecord&, const QubitRecord&) = default;
};

struct PairRecord {
  int a = 0;
  int b = 0;
  double error = 0.0;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

/// Backend properties recorded at one (day, epoch).
struct BackendSnapshot {
  std::optional<int> day;
  std::optional<noise::EpochLabel> epoch;
  PairConvention convention = PairConvention::ProcessInfidelity;
  bool convention_defaulted = true;
  std::vector<QubitRecord> qubits;
  std::vector<PairRecord> pairs;
  std::vector<std::string> warnings;

  bool empty() const { return qubits.empty() && pairs.empty(); }

  const QubitRecord* find_qubit(int q) const {
    for (const auto& r : qubits)
      if (r.qubit == q) return &r;
    return nullptr;
  }

  const PairRecord* find_pair(int a, int b) const {
    for (const auto& r : pairs)
      if ((r.a == a && r.b == b) || (r.a == b && r.b == a)) return &r;
    return nullptr;
  }

  /// Process infidelity of the pair's CNOT, converting raw RB rates with (d+1)/d.
  double pair_infidelity(const PairRecord& p) const { return convention == PairConvention::RawR ? p.error * 1.25 : p.error; }
};

namespace detail {

using qstab::detail::require;

inline std::map<std::string, std::string_view> key_values(const std::vector<std::string_view>& toks, std::size_t from,
                                                          int line) {
  std::map<std::string, std::string_view> kv;
  for (std::size_t i = from; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string_view::npos || eq == 0) throw ParseError(line, "expected key=value, got '" + std::string(toks[i]) + "'");
    if (!kv.emplace(std::string(toks[i].substr(0, eq)), toks[i].substr(eq + 1)).second)
      throw ParseError(line, "duplicate key '" + std::string(toks[i].substr(0, eq)) + "'");
  }
  return kv;
}

inline void expect_keys(const std::map<std::string, std::string_view>& kv, const std::set<std::string>& keys, int line,
                        bool all_required) {
  for (const auto& [k, v] : kv)
    if (!keys.count(k)) throw ParseError(line, "unknown key '" + k + "'");
  if (all_required)
    for (const auto& k : keys)
      if (!kv.count(k)) throw ParseError(line, "missing key '" + k + "'");
}

inline double number(std::string_view tok, int line) {
  try {
    return parse_double(tok);
  } catch (const ValidationError& e) {
    throw ParseError(line, e.what());
  }
}

inline int integer(std::string_view tok, int line) {
  try {
    const long long v = parse_int(tok);
    if (v < 0 || v > 1000000) throw ParseError(line, "integer out of range: " + std::string(tok));
    return static_cast<int>(v);
  } catch (const ValidationError& e) {
    throw ParseError(line, e.what());
  }
}

inline double probability(std::string_view tok, const char* what, int line) {
  const double v = number(tok, line);
  if (!(v >= 0.0 && v <= 1.0)) throw ParseError(line, std::string(what) + " must be in [0, 1]");
  return v;
}

inline double positive(std::string_view tok, const char* what, int line) {
  const double v = number(tok, line);
  if (!(v > 0.0) || std::isnan(v)) throw ParseError(line, std::string(what) + " must be > 0");
  return v;
}

}  // namespace detail

/// Line format:
///   snapshot day=<int> epoch=<morning|afternoon|night> pair_convention=<raw-r|process-infidelity>
///   qubit <label> t1=<us> t2=<us> ro=<p> u2=<p> u3=<p>
///   pair <a> <b> err=<p>
/// '#' starts a comment. The header is optional but must come first.
inline BackendSnapshot parse_backend_snapshot(std::string_view text) {
  BackendSnapshot snap;
  bool seen_header = false, seen_rows = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = circuits::detail::split_ws(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (toks[0] == "snapshot") {
      if (seen_header || seen_rows) throw ParseError(line_no, "snapshot header must be the first record");
      seen_header = true;
      const auto kv = detail::key_values(toks, 1, line_no);
      detail::expect_keys(kv, {"day", "epoch", "pair_convention"}, line_no, false);
      if (auto it = kv.find("day"); it != kv.end()) snap.day = detail::integer(it->second, line_no);
      if (auto it = kv.find("epoch"); it != kv.end()) {
        try {
          snap.epoch = noise::epoch_label_from_name(it->second);
        } catch (const ValidationError& e) {
          throw ParseError(line_no, e.what());
        }
      }
      if (auto it = kv.find("pair_convention"); it != kv.end()) {
        try {
          snap.convention = convention_from_name(it->second);
        } catch (const ValidationError& e) {
          throw ParseError(line_no, e.what());
        }
        snap.convention_defaulted = false;
      }
    } else if (toks[0] == "qubit") {
      seen_rows = true;
      if (toks.size() < 2) throw ParseError(line_no, "qubit row needs a label");
      QubitRecord r;
      r.qubit = detail::integer(toks[1], line_no);
      const auto kv = detail::key_values(toks, 2, line_no);
      detail::expect_keys(kv, {"t1", "t2", "ro", "u2", "u3"}, line_no, true);
      r.t1_us = detail::positive(kv.at("t1"), "t1", line_no);
      r.t2_us = detail::positive(kv.at("t2"), "t2", line_no);
      r.readout = detail::probability(kv.at("ro"), "ro", line_no);
      r.u2 = detail::probability(kv.at("u2"), "u2", line_no);
      r.u3 = detail::probability(kv.at("u3"), "u3", line_no);
      if (snap.find_qubit(r.qubit)) throw ParseError(line_no, "duplicate qubit " + std::to_string(r.qubit));
      snap.qubits.push_back(r);
    } else if (toks[0] == "pair") {
      seen_rows = true;
      if (toks.size() < 3) throw ParseError(line_no, "pair row needs two labels");
      PairRecord r;
      r.a = detail::integer(toks[1], line_no);
      r.b = detail::integer(toks[2], line_no);
      if (r.a == r.b) throw ParseError(line_no, "pair joins a qubit to itself");
      const auto kv = detail::key_values(toks, 3, line_no);
      detail::expect_keys(kv, {"err"}, line_no, true);
      r.error = detail::probability(kv.at("err"), "err", line_no);
      if (snap.find_pair(r.a, r.b)) throw ParseError(line_no, "duplicate pair");
      snap.pairs.push_back(r);
    } else {
      throw ParseError(line_no, "unknown record type '" + std::string(toks[0]) + "'");
    }
    if (end == text.size()) break;
  }
  if (snap.convention_defaulted && !snap.pairs.empty())
    snap.warnings.push_back("no pair_convention in header; assuming process-infidelity");
  return snap;
}

inline std::string to_text(const BackendSnapshot& s) {
  std::ostringstream os;
  os << "snapshot";
  if (s.day) os << " day=" << *s.day;
  if (s.epoch) os << " epoch=" << noise::epoch_label_name(*s.epoch);
  os << " pair_convention=" << convention_name(s.convention) << '\n';
  for (const auto& q : s.qubits)
    os << "qubit " << q.qubit << " t1=" << format_double(q.t1_us) << " t2=" << format_double(q.t2_us)
       << " ro=" << format_double(q.readout) << " u2=" << format_double(q.u2) << " u3=" << format_double(q.u3) << '\n';
  for (const auto& p : s.pairs) os << "pair " << p.a << ' ' << p.b << " err=" << format_double(p.error) << '\n';
  return os.str();
}

/// Noise model matching the snapshot: T1/T2 damping, symmetric readout,
/// single-qubit depolarizing with r = u2 (lambda = 2 u2) and per-pair CNOT
/// depolarizing with e_F = 15/16 lambda. T2 above 2 T1 is clipped.
inline noise::NoiseModel noise_model_from_snapshot(const BackendSnapshot& s, std::vector<std::string>* warnings = nullptr) {
  noise::NoiseModel m;
  for (const auto& q : s.qubits) {
    noise::QubitNoise n;
    n.t1_us = q.t1_us;
    n.t2_us = q.t2_us;
    if (n.t2_us > 2.0 * n.t1_us) {
      n.t2_us = 2.0 * n.t1_us;
      if (warnings) warnings->push_back("qubit " + std::to_string(q.qubit) + ": t2 clipped to 2 t1");
    }
    n.readout = qsim::Confusion::symmetric(q.readout);
    n.gate = noise::GateNoise::depolarizing(std::min(1.0, 2.0 * q.u2), 1);
    m.qubits[q.qubit] = n;
  }
  for (const auto& p : s.pairs) {
    const double e = s.pair_infidelity(p);
    qstab::detail::require(e <= 15.0 / 16.0, "pair error exceeds the fully depolarizing value");
    m.cnots[{p.a, p.b}] = noise::GateNoise::depolarizing(e * 16.0 / 15.0, 2);
  }
  m.validate();
  return m;
}

}  // namespace qstab::ingest
