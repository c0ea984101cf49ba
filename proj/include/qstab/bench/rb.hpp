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
#include <vector>

#include "qstab/bench/fit.hpp"
#include "qstab/bench/infidelity.hpp"
#include "qstab/circuits/circuit.hpp"
#include "qstab/circuits/clifford.hpp"
#include "qstab/core/error.hpp"
#include "qstab/core/parallel.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/noise/execute.hpp"
#include "qstab/noise/model.hpp"

namespace qstab::bench {

struct RbParams {
  std::vector<int> m_list{1, 4, 16, 48, 96};
  int n_random = 30;
  int shots = 128;
  int bootstrap = 200;

  void validate() const {
    std::vector<int> ms = m_list;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    detail::require(ms.size() == m_list.size(), "RB sequence lengths must be distinct");
    detail::require(ms.size() >= 3, "RB needs at least 3 sequence lengths");
    for (int m : ms) detail::require(m >= 1, "RB sequence lengths must be >= 1");
    detail::require(n_random >= 1 && shots >= 1 && bootstrap >= 0, "invalid RB sample sizes");
  }
};

struct RbResult {
  double A = 0.0;
  double p = 0.0;
  double sigma_p = 0.0;
  double r = 0.0;
  double sigma_r = 0.0;
  InfidelityEstimate estimate;
  std::vector<DecayRecord> records;
};

struct RbSequence {
  circuits::Circuit circuit;
  int m = 0;
  int circuit_index = 0;
};

/// m uniformly random Cliffords followed by the inverse of their product.
/// One-qubit Cliffords sit in easy cycles; two-qubit ones in hard cycles.
inline std::vector<RbSequence> make_rb(const std::vector<int>& labels, const RbParams& params, std::uint64_t seed) {
  params.validate();
  const int n = static_cast<int>(labels.size());
  detail::require(n == 1 || n == 2, "RB supports one or two qubits");
  const auto& group = n == 1 ? circuits::clifford1() : circuits::clifford2();
  auto gate = [n](int idx) { return n == 1 ? Gate::c1(0, idx) : Gate::c2(0, 1, idx); };
  auto cycle = [n](Gate g) { return n == 1 ? Cycle::easy({g}) : Cycle::hard({g}); };
  Rng rng(seed, 0x4B00);
  std::vector<RbSequence> out;
  for (int m : params.m_list) {
    for (int r = 0; r < params.n_random; ++r) {
      RbSequence s{Circuit(n, labels), m, r};
      Tableau total = Tableau::identity(n);
      for (int k = 0; k < m; ++k) {
        const int idx = static_cast<int>(rng.below(group.size()));
        total = total.then(group[static_cast<std::size_t>(idx)].tableau);
        s.circuit.add(cycle(gate(idx)));
      }
      s.circuit.add(cycle(gate(group.find(total.inverse()))));
      out.push_back(std::move(s));
    }
  }
  return out;
}

/// Survival probability of |0..0> fitted as A p^m + 1/2^n.
inline RbResult run_rb(const std::vector<int>& labels, const RbParams& params, const noise::NoiseModel& model,
                       std::uint64_t seed, bool exact = false, unsigned threads = 0) {
  const auto seqs = make_rb(labels, params, seed);
  const int n = static_cast<int>(labels.size());
  const int d = 1 << n;
  const double floor = 1.0 / d;
  const noise::Executor ex(model, labels);
  std::vector<DecayRecord> recs(seqs.size());
  const std::uint64_t exec_seed = Rng(seed, 0x4BE0)();
  parallel_for(seqs.size(), [&](std::size_t i) {
    const auto probs = ex.probabilities(seqs[i].circuit);
    double survival = 0.0;
    if (exact) {
      for (std::uint64_t b = 0; b < probs.size(); ++b) {
        double f = probs[b];
        for (int q = 0; q < n; ++q) {
          const int bit = static_cast<int>((b >> qsim::detail::bit_of(n, q)) & 1);
          f *= ex.readout()[static_cast<std::size_t>(q)].m[bit][0];
        }
        survival += f;
      }
    } else {
      Rng rng(exec_seed, i);
      const auto outcomes = qsim::sample_outcomes(probs, n, ex.readout(), params.shots, rng);
      survival = static_cast<double>(std::count(outcomes.begin(), outcomes.end(), 0u)) / params.shots;
    }
    DecayRecord& rec = recs[i];
    rec.pauli = PauliString(n);
    rec.m = seqs[i].m;
    rec.circuit_index = seqs[i].circuit_index;
    rec.expectation = survival - floor;
    rec.shot_error = exact ? 0.0 : std::sqrt(survival * (1.0 - survival) / params.shots);
  }, threads);
  const DecayFit fit = fit_decay(recs, {3, params.bootstrap}, Rng(seed, 0x4BF0));
  RbResult res;
  res.A = fit.A;
  res.p = fit.p;
  res.sigma_p = fit.sigma_p;
  const auto conv = rb_to_process_infidelity(fit.p, d);
  res.r = conv.r;
  res.sigma_r = (d - 1.0) / d * fit.sigma_p;
  res.estimate.e_F = conv.e_F;
  res.estimate.sigma = res.sigma_r * (d + 1.0) / d;
  res.estimate.source = Source::RB;
  res.records = std::move(recs);
  return res;
}

}  // namespace qstab::bench
