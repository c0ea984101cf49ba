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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "qstab/bench/cb.hpp"
#include "qstab/bench/rb.hpp"
#include "qstab/circuits/tfim.hpp"
#include "qstab/core/error.hpp"
#include "qstab/ingest/results.hpp"
#include "qstab/ingest/snapshot.hpp"
#include "qstab/noise/channels.hpp"
#include "qstab/noise/drift.hpp"
#include "qstab/noise/model.hpp"

namespace qstab::app {

using json = nlohmann::json;

/// Everything one run needs. The seed has no default.
struct ExperimentConfig {
  int layout = 2;
  circuits::TfimVariant variant = circuits::TfimVariant::Circuit1;
  circuits::TfimParams tfim;
  noise::DriftSchedule drift;
  bench::CbParams cb;
  bench::CbParams qcap = default_qcap();
  int qcap_steps = 20;
  bench::RbParams rb;
  double drift_k = 1.0;
  std::uint64_t seed = 0;
  std::string output = "out";
  bool exact = false;
  unsigned threads = 0;

  const noise::NoiseModel& noise() const { return drift.base; }

  static bench::CbParams default_qcap() {
    bench::CbParams p;
    p.m_list = {4, 16};
    p.n_random = 30;
    p.shots = 128;
    p.min_lengths = 2;
    return p;
  }

  void validate() const {
    circuits::layout_qubits(layout);
    tfim.validate();
    qstab::detail::require(tfim.n_sites == 4, "layouts hold 4 qubits, so tfim.n_sites must be 4");
    drift.validate();
    cb.validate();
    qcap.validate();
    rb.validate();
    qstab::detail::require(qcap_steps >= 0, "qcap.steps must be >= 0");
    qstab::detail::require(drift_k >= 0.0, "drift_k must be >= 0");
  }
};

namespace detail {

using qstab::detail::require;

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), where + " must be an object");
  for (const auto& [k, v] : j.items())
    require(allowed.count(k) > 0, "unknown key '" + k + "' in " + where);
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read(const json& j, const std::string& key, T& out, const std::string& where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

inline std::pair<int, int> pair_of(const json& j, const std::string& where) {
  require(j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer(),
          where + " must be a two-element integer array");
  return {j[0].get<int>(), j[1].get<int>()};
}

inline noise::CoherentError coherent_of(const json& j, const std::string& where) {
  check_keys(j, {"axis", "angle"}, where);
  return {qsim::PauliString::parse(get<std::string>(j, "axis", where)), get<double>(j, "angle", where)};
}

/// {depolarizing: lambda, pauli: {P: prob}, coherent: {axis, angle}}.
/// Explicit Pauli probabilities add to the depolarizing ones.
inline noise::GateNoise gate_noise_of(const json& j, int arity, const std::string& where,
                                      const std::set<std::string>& extra = {}) {
  std::set<std::string> keys = {"depolarizing", "pauli", "coherent"};
  keys.insert(extra.begin(), extra.end());
  check_keys(j, keys, where);
  noise::GateNoise g;
  if (j.contains("depolarizing")) g.pauli = noise::depolarizing_probs(get<double>(j, "depolarizing", where), arity);
  if (j.contains("pauli")) {
    require(j["pauli"].is_object(), where + ".pauli must be an object");
    for (const auto& [k, v] : j["pauli"].items()) {
      require(v.is_number(), where + ".pauli." + k + " must be a number");
      g.pauli[qsim::PauliString::parse(k).unsigned_copy()] += v.get<double>();
    }
  }
  if (j.contains("coherent")) g.coherent = coherent_of(j["coherent"], where + ".coherent");
  g.validate(arity);
  return g;
}

inline noise::NoiseModel noise_of(const json& j, const std::filesystem::path& base_dir) {
  const std::string w = "noise";
  check_keys(j, {"snapshot", "qubits", "single_default", "cnot_default", "cnots", "crosstalk", "durations"}, w);
  noise::NoiseModel m;
  if (j.contains("snapshot")) {
    const std::filesystem::path p = base_dir / get<std::string>(j, "snapshot", w);
    m = ingest::noise_model_from_snapshot(ingest::parse_backend_snapshot(ingest::read_file(p)));
  }
  if (j.contains("qubits")) {
    require(j["qubits"].is_object(), "noise.qubits must be an object keyed by label");
    for (const auto& [label, q] : j["qubits"].items()) {
      const std::string qw = "noise.qubits." + label;
      check_keys(q, {"t1", "t2", "readout", "readout_01", "readout_10", "prep", "gate"}, qw);
      const int l = static_cast<int>(parse_int(label));
      noise::QubitNoise n = m.qubits.count(l) ? m.qubits[l] : noise::QubitNoise{};
      read(q, "t1", n.t1_us, qw);
      read(q, "t2", n.t2_us, qw);
      if (q.contains("readout")) n.readout = qsim::Confusion::symmetric(get<double>(q, "readout", qw));
      if (q.contains("readout_01") || q.contains("readout_10")) {
        require(!q.contains("readout"), qw + ": give readout or readout_01/readout_10, not both");
        n.readout = qsim::Confusion::asymmetric(q.value("readout_01", 0.0), q.value("readout_10", 0.0));
      }
      read(q, "prep", n.prep_flip, qw);
      if (q.contains("gate")) n.gate = gate_noise_of(q["gate"], 1, qw + ".gate");
      m.qubits[l] = n;
    }
  }
  if (j.contains("single_default")) m.single_default = gate_noise_of(j["single_default"], 1, "noise.single_default");
  if (j.contains("cnot_default")) m.cnot_default = gate_noise_of(j["cnot_default"], 2, "noise.cnot_default");
  if (j.contains("cnots")) {
    require(j["cnots"].is_array(), "noise.cnots must be an array");
    for (std::size_t i = 0; i < j["cnots"].size(); ++i) {
      const json& c = j["cnots"][i];
      const std::string cw = "noise.cnots[" + std::to_string(i) + "]";
      require(c.is_object() && c.contains("pair"), cw + " needs a pair");
      const auto pair = pair_of(c["pair"], cw + ".pair");
      if (noise::GateNoise* existing = m.find_cnot(pair.first, pair.second)) *existing = gate_noise_of(c, 2, cw, {"pair"});
      else m.cnots[pair] = gate_noise_of(c, 2, cw, {"pair"});
    }
  }
  if (j.contains("crosstalk")) {
    require(j["crosstalk"].is_array(), "noise.crosstalk must be an array");
    for (std::size_t i = 0; i < j["crosstalk"].size(); ++i) {
      const json& c = j["crosstalk"][i];
      const std::string cw = "noise.crosstalk[" + std::to_string(i) + "]";
      check_keys(c, {"pair", "spectator", "angle"}, cw);
      require(c.contains("pair"), cw + " needs a pair");
      m.crosstalk.push_back({pair_of(c["pair"], cw + ".pair"), get<int>(c, "spectator", cw), get<double>(c, "angle", cw)});
    }
  }
  if (j.contains("durations")) {
    check_keys(j["durations"], {"single_ns", "cnot_ns"}, "noise.durations");
    read(j["durations"], "single_ns", m.durations.single_ns, "noise.durations");
    read(j["durations"], "cnot_ns", m.durations.cnot_ns, "noise.durations");
  }
  m.validate();
  return m;
}

inline void cb_of(const json& j, bench::CbParams& p, const std::string& w, bool is_qcap) {
  std::set<std::string> keys = {"m_list", "n_random", "n_decays", "twirl", "shots", "bootstrap"};
  if (is_qcap) keys.insert("steps");
  check_keys(j, keys, w);
  read(j, "m_list", p.m_list, w);
  read(j, "n_random", p.n_random, w);
  read(j, "n_decays", p.n_decays, w);
  read(j, "shots", p.shots, w);
  read(j, "bootstrap", p.bootstrap, w);
  if (j.contains("twirl")) p.twirl = bench::twirl_from_name(get<std::string>(j, "twirl", w));
}

inline void drift_of(const json& j, noise::DriftSchedule& d) {
  check_keys(j, {"epochs", "walk"}, "drift");
  if (j.contains("epochs")) {
    require(j["epochs"].is_array(), "drift.epochs must be an array");
    d.epochs.clear();
    for (std::size_t i = 0; i < j["epochs"].size(); ++i) {
      const json& e = j["epochs"][i];
      const std::string ew = "drift.epochs[" + std::to_string(i) + "]";
      check_keys(e, {"day", "label", "overrides"}, ew);
      noise::Epoch ep;
      ep.day = get<int>(e, "day", ew);
      require(ep.day >= 0, ew + ".day must be >= 0");
      if (e.contains("label")) ep.label = noise::epoch_label_from_name(get<std::string>(e, "label", ew));
      if (e.contains("overrides")) ep.overrides = get<std::map<std::string, double>>(e, "overrides", ew);
      d.epochs.push_back(std::move(ep));
    }
  }
  if (j.contains("walk")) {
    const json& w = j["walk"];
    check_keys(w, {"t1", "t2", "readout", "pauli", "angle"}, "drift.walk");
    read(w, "t1", d.walk.t1, "drift.walk");
    read(w, "t2", d.walk.t2, "drift.walk");
    read(w, "readout", d.walk.readout, "drift.walk");
    read(w, "pauli", d.walk.pauli, "drift.walk");
    read(w, "angle", d.walk.angle, "drift.walk");
  }
}

}  // namespace detail

/// Parses a config document. Relative paths resolve against base_dir.
inline ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir = ".") {
  detail::check_keys(j, {"layout", "circuit", "tfim", "noise", "drift", "cb", "qcap", "rb", "drift_k", "seed", "output",
                         "exact", "threads"},
                     "config");
  detail::require(j.contains("seed"), "config needs an explicit seed");
  ExperimentConfig c;
  const std::string w = "config";
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception&) {
    throw ValidationError("config.seed must be a non-negative integer");
  }
  detail::read(j, "layout", c.layout, w);
  if (j.contains("circuit")) c.variant = circuits::tfim_variant_from_name(detail::get<std::string>(j, "circuit", w));
  if (j.contains("tfim")) {
    const json& t = j["tfim"];
    detail::check_keys(t, {"n_sites", "J", "h_T", "dt", "steps"}, "tfim");
    detail::read(t, "n_sites", c.tfim.n_sites, "tfim");
    detail::read(t, "J", c.tfim.J, "tfim");
    detail::read(t, "h_T", c.tfim.h_T, "tfim");
    detail::read(t, "dt", c.tfim.dt, "tfim");
    detail::read(t, "steps", c.tfim.steps, "tfim");
  }
  if (j.contains("noise")) c.drift.base = detail::noise_of(j["noise"], base_dir);
  c.drift.epochs = {noise::Epoch{1, noise::EpochLabel::Morning, {}}};
  if (j.contains("drift")) detail::drift_of(j["drift"], c.drift);
  if (j.contains("cb")) detail::cb_of(j["cb"], c.cb, "cb", false);
  if (j.contains("qcap")) {
    detail::cb_of(j["qcap"], c.qcap, "qcap", true);
    detail::read(j["qcap"], "steps", c.qcap_steps, "qcap");
  }
  if (j.contains("rb")) {
    const json& r = j["rb"];
    detail::check_keys(r, {"m_list", "n_random", "shots", "bootstrap"}, "rb");
    detail::read(r, "m_list", c.rb.m_list, "rb");
    detail::read(r, "n_random", c.rb.n_random, "rb");
    detail::read(r, "shots", c.rb.shots, "rb");
    detail::read(r, "bootstrap", c.rb.bootstrap, "rb");
  }
  detail::read(j, "drift_k", c.drift_k, w);
  detail::read(j, "output", c.output, w);
  detail::read(j, "exact", c.exact, w);
  detail::read(j, "threads", c.threads, w);
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ingest::read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

}  // namespace qstab::app
