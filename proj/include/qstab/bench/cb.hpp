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
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qstab/bench/fit.hpp"
#include "qstab/bench/infidelity.hpp"
#include "qstab/circuits/circuit.hpp"
#include "qstab/circuits/clifford.hpp"
#include "qstab/circuits/layout.hpp"
#include "qstab/circuits/propagate.hpp"
#include "qstab/core/error.hpp"
#include "qstab/core/parallel.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/noise/execute.hpp"
#include "qstab/noise/model.hpp"

namespace qstab::bench {

using circuits::Circuit;
using circuits::Cycle;
using circuits::Gate;
using circuits::Tableau;
using qsim::PauliLetter;

enum class Twirl { Pauli, C1 };

inline std::string twirl_name(Twirl t) { return t == Twirl::Pauli ? "pauli" : "c1"; }

inline Twirl twirl_from_name(std::string_view s) {
  if (s == "pauli" || s == "Pauli") return Twirl::Pauli;
  if (s == "c1" || s == "C1") return Twirl::C1;
  throw ValidationError("twirl must be pauli or c1 (got '" + std::string(s) + "')");
}

struct CbParams {
  std::vector<int> m_list{2, 10, 22};
  int n_random = 48;
  int n_decays = 16;
  Twirl twirl = Twirl::Pauli;
  int shots = 128;
  int bootstrap = 200;
  int min_lengths = 3;

  void validate() const {
    std::vector<int> ms = m_list;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    detail::require(ms.size() == m_list.size(), "sequence lengths must be distinct");
    detail::require(static_cast<int>(ms.size()) >= min_lengths,
                    "CB needs at least " + std::to_string(min_lengths) + " sequence lengths");
    for (int m : ms) detail::require(m >= 1, "sequence lengths must be >= 1");
    detail::require(n_random >= 1, "n_random must be >= 1");
    detail::require(n_decays >= 1, "n_decays must be >= 1");
    detail::require(shots >= 1, "shots must be >= 1");
    detail::require(bootstrap >= 0, "bootstrap must be >= 0");
  }
};

struct CbCircuit {
  Circuit circuit;
  PauliString prepared;
  /// Z-type string with the sign that makes the ideal outcome +1.
  PauliString measured;
  int m = 0;
  int circuit_index = 0;
};

struct CbCollection {
  Cycle target;
  std::vector<int> labels;
  Twirl twirl = Twirl::Pauli;
  std::vector<int> m_list;
  int n_random = 0;
  int n_decays = 0;
  std::uint64_t seed = 0;
  std::vector<PauliString> decays;
  std::vector<CbCircuit> circuits;

  int n_qubits() const { return static_cast<int>(labels.size()); }
};

namespace detail {

inline const Tableau& c1_tab(int i) { return circuits::clifford1()[static_cast<std::size_t>(i)].tableau; }

/// Single-qubit Clifford sending +Z to +letter (identity for I and Z).
inline int prep_clifford(PauliLetter l) {
  Tableau t = Tableau::identity(1);
  if (l == PauliLetter::X) t = Tableau::hadamard(1, 0);
  if (l == PauliLetter::Y) t = Tableau::hadamard(1, 0).then(Tableau::phase(1, 0));
  return circuits::clifford1().find(t);
}

/// Basis change sending the letter to +-Z.
inline Tableau basis_change(PauliLetter l) {
  if (l == PauliLetter::X) return Tableau::hadamard(1, 0);
  if (l == PauliLetter::Y) return Tableau::phase_dagger(1, 0).then(Tableau::hadamard(1, 0));
  return Tableau::identity(1);
}

inline Cycle twirl_cycle(int n, Twirl tw, Rng& rng) {
  Cycle c = Cycle::easy();
  for (int q = 0; q < n; ++q) {
    if (tw == Twirl::Pauli)
      c.gates.push_back(Gate::pauli(static_cast<PauliLetter>(rng.below(4)), q));
    else
      c.gates.push_back(Gate::c1(q, static_cast<int>(rng.below(24))));
  }
  return c;
}

inline PauliLetter letter_after(const Tableau& one, PauliLetter l) {
  qsim::PauliString p(1);
  p.set(0, l);
  return one.conjugate(p)[0];
}

}  // namespace detail

/// Builds the CB collection for `cycle` (logical indices into `layout`).
/// The register is the cycle's support. Each circuit is: a preparation easy
/// cycle, m repetitions of (random twirl easy cycle, target), and a final
/// easy cycle merging a fresh twirl with the basis change to Z.
inline CbCollection make_cb(const Cycle& cycle, const std::vector<int>& layout, const CbParams& params,
                            std::uint64_t seed) {
  params.validate();
  detail::require(cycle.kind == circuits::CycleKind::Hard || cycle.kind == circuits::CycleKind::Easy,
                  "CB target must be a gate cycle");
  detail::require(cycle.is_clifford(), "CB target cycle must be Clifford");
  const auto support = circuits::cycle_support(cycle, layout);
  const int n = static_cast<int>(support.labels.size());

  const int population = static_cast<int>((std::uint64_t{1} << (2 * n)) - 1);
  detail::require(params.n_decays <= population + 1,
                  "n_decays exceeds the " + std::to_string(population) + " non-identity Pauli terms");
  const int k = std::min(params.n_decays, population);

  CbCollection coll;
  coll.target = support.local;
  coll.labels = support.labels;
  coll.twirl = params.twirl;
  coll.m_list = params.m_list;
  coll.n_random = params.n_random;
  coll.n_decays = k;
  coll.seed = seed;

  Rng pick(seed, 0xCB00);
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(population));
  for (int i = 0; i < population; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i + 1);
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(i) + pick.below(static_cast<std::uint64_t>(population - i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  for (auto i : idx) coll.decays.push_back(PauliString::from_index(n, i));

  const Tableau target_tab = circuits::cycle_tableau(support.local, n);
  // The twirl stream is shared by both twirl groups, so the random draws
  // (and therefore the circuit count and layout) stay aligned between them.
  Rng rng(seed, 0xCB01);
  for (const PauliString& decay : coll.decays) {
    for (int m : params.m_list) {
      for (int r = 0; r < params.n_random; ++r) {
        CbCircuit cc;
        cc.prepared = decay;
        cc.m = m;
        cc.circuit_index = r;
        cc.circuit = Circuit(n, support.labels);
        Cycle prep = Cycle::easy();
        for (int q = 0; q < n; ++q) prep.gates.push_back(Gate::c1(q, detail::prep_clifford(decay[q])));
        cc.circuit.add(std::move(prep));
        PauliString frame = decay;
        for (int rep = 0; rep < m; ++rep) {
          Cycle tw = detail::twirl_cycle(n, params.twirl, rng);
          frame = circuits::propagate_pauli(tw, frame);
          cc.circuit.add(std::move(tw));
          frame = target_tab.conjugate(frame);
          cc.circuit.add(support.local);
        }
        Cycle fin = Cycle::easy();
        for (int q = 0; q < n; ++q) {
          const Tableau rq = params.twirl == Twirl::Pauli
                                 ? Tableau::pauli(1, 0, static_cast<PauliLetter>(rng.below(4)))
                                 : detail::c1_tab(static_cast<int>(rng.below(24)));
          const PauliLetter l = detail::letter_after(rq, frame[q]);
          fin.gates.push_back(Gate::c1(q, circuits::clifford1().find(rq.then(detail::basis_change(l)))));
        }
        frame = circuits::propagate_pauli(fin, frame);
        cc.circuit.add(std::move(fin));
        cc.measured = frame;
        coll.circuits.push_back(std::move(cc));
      }
    }
  }
  return coll;
}

struct ExecOptions {
  int shots = 128;
  /// Use exact expectations (infinite-shot limit) instead of sampling.
  bool exact = false;
  unsigned threads = 0;
};

/// Runs every circuit; circuit i samples from stream (seed, i).
inline std::vector<DecayRecord> execute_collection(const CbCollection& coll, const noise::NoiseModel& model,
                                                   const ExecOptions& opt, std::uint64_t seed) {
  detail::require(opt.shots >= 1, "shots must be >= 1");
  const noise::Executor ex(model, coll.labels);
  std::vector<DecayRecord> out(coll.circuits.size());
  parallel_for(coll.circuits.size(), [&](std::size_t i) {
    const CbCircuit& cc = coll.circuits[i];
    DecayRecord& rec = out[i];
    rec.pauli = cc.prepared;
    rec.m = cc.m;
    rec.circuit_index = cc.circuit_index;
    if (opt.exact) {
      rec.expectation = ex.expectation_exact(cc.circuit, cc.measured);
      rec.shot_error = 0.0;
    } else {
      Rng rng(seed, static_cast<std::uint64_t>(i));
      rec.expectation = ex.expectation_sampled(cc.circuit, cc.measured, opt.shots, rng);
      rec.shot_error = std::sqrt(std::max(0.0, 1.0 - rec.expectation * rec.expectation) / opt.shots);
    }
  }, opt.threads);
  return out;
}

/// Fits each decay term of a record table (in first-appearance order).
inline std::vector<DecayFit> fit_all(const std::vector<DecayRecord>& records, const FitOptions& opt,
                                     std::uint64_t seed) {
  std::vector<PauliString> order;
  std::map<std::string, std::vector<DecayRecord>> by;
  for (const auto& r : records) {
    auto [it, inserted] = by.try_emplace(r.pauli.str());
    if (inserted) order.push_back(r.pauli);
    it->second.push_back(r);
  }
  std::vector<DecayFit> fits;
  for (std::size_t i = 0; i < order.size(); ++i)
    fits.push_back(fit_decay(by.at(order[i].str()), opt, Rng(seed, 0xF17000 + i)));
  return fits;
}

struct CbResult {
  std::vector<DecayRecord> records;
  std::vector<DecayFit> fits;
  InfidelityEstimate estimate;
  int n_qubits = 0;
};

/// make_cb, execute, fit and aggregate, all driven by one seed.
inline CbResult run_cb(const Cycle& cycle, const std::vector<int>& layout, const noise::NoiseModel& model,
                       const CbParams& params, std::uint64_t seed, bool exact = false, unsigned threads = 0) {
  const CbCollection coll = make_cb(cycle, layout, params, seed);
  CbResult res;
  res.n_qubits = coll.n_qubits();
  res.records = execute_collection(coll, model, {params.shots, exact, threads}, Rng(seed, 0xE0).split(1)());
  res.fits = fit_all(res.records, {params.min_lengths, params.bootstrap}, Rng(seed, 0xF0)());
  res.estimate = estimate_process_infidelity(res.fits, res.n_qubits);
  res.estimate.source = Source::CB;
  return res;
}

}  // namespace qstab::bench
