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
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/core/format.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/noise/channels.hpp"
#include "qstab/noise/model.hpp"

namespace qstab::noise {

enum class EpochLabel { Morning = 0, Afternoon = 1, Night = 2 };

inline std::string epoch_label_name(EpochLabel l) {
  switch (l) {
    case EpochLabel::Morning: return "morning";
    case EpochLabel::Afternoon: return "afternoon";
    case EpochLabel::Night: return "night";
  }
  return "?";
}

inline EpochLabel epoch_label_from_name(std::string_view s) {
  if (s == "morning") return EpochLabel::Morning;
  if (s == "afternoon") return EpochLabel::Afternoon;
  if (s == "night") return EpochLabel::Night;
  throw ValidationError("epoch label must be morning, afternoon or night (got '" + std::string(s) + "')");
}

/// Overrides use dotted keys:
///   qubit.<label>.t1 | t2 | readout | prep | depolarizing
///   cnot.<a>-<b>.depolarizing | pauli.<P> | coherent_angle
///   crosstalk.<index>.angle
///   single.depolarizing
struct Epoch {
  int day = 0;
  EpochLabel label = EpochLabel::Morning;
  std::map<std::string, double> overrides;

  std::string tag() const { return std::to_string(day) + "_" + epoch_label_name(label); }
};

/// Per-epoch step standard deviations. T1/T2 steps are on the natural log,
/// the others are additive.
struct RandomWalk {
  double t1 = 0.0;
  double t2 = 0.0;
  double readout = 0.0;
  double pauli = 0.0;
  double angle = 0.0;

  bool is_zero() const { return t1 == 0 && t2 == 0 && readout == 0 && pauli == 0 && angle == 0; }
};

struct DriftSchedule {
  NoiseModel base;
  std::vector<Epoch> epochs;
  RandomWalk walk;

  int index_of(int day, EpochLabel label) const {
    for (std::size_t i = 0; i < epochs.size(); ++i)
      if (epochs[i].day == day && epochs[i].label == label) return static_cast<int>(i);
    throw ValidationError("no epoch (day " + std::to_string(day) + ", " + epoch_label_name(label) + ") in schedule");
  }

  void validate() const;
};

namespace detail {

inline std::vector<std::string_view> split_dots(std::string_view key) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= key.size(); ++i)
    if (i == key.size() || key[i] == '.') {
      parts.push_back(key.substr(start, i - start));
      start = i + 1;
    }
  return parts;
}

inline std::pair<int, int> parse_pair(std::string_view s) {
  const auto dash = s.find('-');
  require(dash != std::string_view::npos, "pair must look like <a>-<b>");
  return {static_cast<int>(parse_int(s.substr(0, dash))), static_cast<int>(parse_int(s.substr(dash + 1)))};
}

/// Applies one override; throws for keys that name no existing parameter.
inline void apply_override(NoiseModel& m, const std::string& key, double v) {
  const auto parts = split_dots(key);
  auto bad = [&](const std::string& why) { return ValidationError("override '" + key + "': " + why); };
  try {
    if (parts.size() == 3 && parts[0] == "qubit") {
      const int label = static_cast<int>(parse_int(parts[1]));
      auto it = m.qubits.find(label);
      if (it == m.qubits.end()) throw bad("qubit not in the noise model");
      QubitNoise& q = it->second;
      if (parts[2] == "t1") q.t1_us = v;
      else if (parts[2] == "t2") q.t2_us = v;
      else if (parts[2] == "readout") q.readout = Confusion::symmetric(v);
      else if (parts[2] == "prep") q.prep_flip = v;
      else if (parts[2] == "depolarizing") {
        GateNoise g = q.gate.value_or(m.single_default);
        g.pauli = depolarizing_probs(v, 1);
        q.gate = g;
      } else throw bad("unknown qubit parameter");
      return;
    }
    if (parts.size() >= 3 && parts[0] == "cnot") {
      const auto [a, b] = parse_pair(parts[1]);
      GateNoise* g = m.find_cnot(a, b);
      if (!g) throw bad("CNOT pair not in the noise model");
      if (parts.size() == 3 && parts[2] == "depolarizing") g->pauli = depolarizing_probs(v, 2);
      else if (parts.size() == 4 && parts[2] == "pauli") g->pauli[qsim::PauliString::parse(parts[3]).unsigned_copy()] = v;
      else if (parts.size() == 3 && parts[2] == "coherent_angle") {
        if (!g->coherent) throw bad("pair has no coherent error to override");
        g->coherent->angle = v;
      } else throw bad("unknown CNOT parameter");
      return;
    }
    if (parts.size() == 3 && parts[0] == "crosstalk" && parts[2] == "angle") {
      const auto i = parse_int(parts[1]);
      if (i < 0 || i >= static_cast<long long>(m.crosstalk.size())) throw bad("crosstalk index out of range");
      m.crosstalk[static_cast<std::size_t>(i)].angle = v;
      return;
    }
    if (key == "single.depolarizing") {
      m.single_default.pauli = depolarizing_probs(v, 1);
      return;
    }
  } catch (const ValidationError& e) {
    const std::string w = e.what();
    if (w.rfind("override", 0) == 0) throw;
    throw bad(w);
  }
  throw bad("unknown parameter");
}

inline double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

inline void walk_probs(std::map<PauliString, double>& probs, double sigma, Rng& rng) {
  double total = 0.0;
  for (auto& [p, w] : probs) {
    w = clip(w + sigma * rng.normal(), 0.0, 1.0);
    total += w;
  }
  if (total > 1.0)
    for (auto& [p, w] : probs) w /= total;
}

/// One random-walk step over every parameter present in the model, in a
/// fixed traversal order.
inline void walk_step(NoiseModel& m, const RandomWalk& w, Rng& rng) {
  for (auto& [label, q] : m.qubits) {
    if (w.t1 > 0 && std::isfinite(q.t1_us)) q.t1_us *= std::exp(w.t1 * rng.normal());
    if (w.t2 > 0 && std::isfinite(q.t2_us)) q.t2_us *= std::exp(w.t2 * rng.normal());
    q.t2_us = std::min(q.t2_us, 2.0 * q.t1_us);
    if (w.readout > 0) {
      const double e01 = clip(q.readout.m[0][1] + w.readout * rng.normal(), 0.0, 0.5);
      const double e10 = clip(q.readout.m[1][0] + w.readout * rng.normal(), 0.0, 0.5);
      q.readout = Confusion::asymmetric(e01, e10);
    }
    if (w.pauli > 0 && q.gate) walk_probs(q.gate->pauli, w.pauli, rng);
    if (w.angle > 0 && q.gate && q.gate->coherent) q.gate->coherent->angle += w.angle * rng.normal();
  }
  if (w.pauli > 0) {
    walk_probs(m.single_default.pauli, w.pauli, rng);
    walk_probs(m.cnot_default.pauli, w.pauli, rng);
    for (auto& [p, g] : m.cnots) walk_probs(g.pauli, w.pauli, rng);
  }
  if (w.angle > 0) {
    for (GateNoise* g : {&m.single_default, &m.cnot_default})
      if (g->coherent) g->coherent->angle += w.angle * rng.normal();
    for (auto& [p, g] : m.cnots)
      if (g.coherent) g.coherent->angle += w.angle * rng.normal();
    for (auto& c : m.crosstalk) c.angle += w.angle * rng.normal();
  }
}

}  // namespace detail

inline void DriftSchedule::validate() const {
  base.validate();
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (i > 0) {
      const Epoch& a = epochs[i - 1];
      const Epoch& b = epochs[i];
      detail::require(a.day < b.day || (a.day == b.day && a.label < b.label),
                      "epochs must be strictly time-ordered (" + a.tag() + " then " + b.tag() + ")");
    }
    NoiseModel m = base;
    for (const auto& [k, v] : epochs[i].overrides) detail::apply_override(m, k, v);
    m.validate();
  }
  for (double s : {walk.t1, walk.t2, walk.readout, walk.pauli, walk.angle})
    detail::require(std::isfinite(s) && s >= 0.0, "random-walk step sizes must be non-negative");
}

/// Base model with the epoch's overrides, then the random walk accumulated
/// over all epochs up to and including this one (stream j drives step j).
inline NoiseModel drift_params_at(const DriftSchedule& schedule, int day, EpochLabel label, std::uint64_t seed) {
  const int k = schedule.index_of(day, label);
  NoiseModel m = schedule.base;
  for (const auto& [key, v] : schedule.epochs[static_cast<std::size_t>(k)].overrides) detail::apply_override(m, key, v);
  if (!schedule.walk.is_zero()) {
    for (int j = 0; j <= k; ++j) {
      Rng rng(seed, 0xD21F7000u + static_cast<std::uint64_t>(j));
      detail::walk_step(m, schedule.walk, rng);
    }
  }
  m.validate();
  return m;
}

}  // namespace qstab::noise
