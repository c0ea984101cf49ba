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
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qstab/bench/infidelity.hpp"
#include "qstab/core/error.hpp"

namespace qstab::qcap {

using bench::InfidelityEstimate;
using bench::Source;

namespace detail {
using qstab::detail::require;
}  // namespace detail

/// Capacity bound versus Trotter step count. steps[i] = i, from 0.
struct QcapCurve {
  Source source = Source::CB;
  std::vector<int> steps;
  std::vector<double> bound;
  std::vector<double> sigma;
  std::string variant;
  int layout = 0;

  std::size_t size() const { return steps.size(); }

  friend bool operator==(const QcapCurve&, const QcapCurve&) = default;
};

/// One independent error variable: infidelity e with uncertainty sigma,
/// occurring `per_step` times in every Trotter step.
struct Term {
  double e = 0.0;
  double sigma = 0.0;
  int per_step = 1;
};

/// Q(N) = 1 - prod_i (1 - e_i)^(N per_step_i), each factor clamped to
/// [0, 1]. sigma(N) from first-order propagation over the independent terms.
inline QcapCurve compose_bound(const std::vector<Term>& terms, int steps, Source source) {
  detail::require(steps >= 0, "step count must be non-negative");
  for (const Term& t : terms) {
    detail::require(std::isfinite(t.e) && t.e >= 0.0, "infidelity must be finite and non-negative");
    detail::require(std::isfinite(t.sigma) && t.sigma >= 0.0, "sigma must be finite and non-negative");
    detail::require(t.per_step >= 0, "per-step count must be non-negative");
  }
  QcapCurve c;
  c.source = source;
  for (int n = 0; n <= steps; ++n) {
    std::vector<double> powers(terms.size());
    double prod = 1.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const double f = std::clamp(1.0 - terms[i].e, 0.0, 1.0);
      powers[i] = std::pow(f, static_cast<double>(n) * terms[i].per_step);
      prod *= powers[i];
    }
    double var = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const Term& t = terms[i];
      const double k = static_cast<double>(n) * t.per_step;
      if (k == 0.0 || t.sigma == 0.0 || t.e >= 1.0) continue;
      double others = 1.0;
      for (std::size_t j = 0; j < terms.size(); ++j)
        if (j != i) others *= powers[j];
      const double grad = k * std::pow(1.0 - t.e, k - 1.0) * others;
      var += grad * grad * t.sigma * t.sigma;
    }
    c.steps.push_back(n);
    c.bound.push_back(std::clamp(1.0 - prod, 0.0, 1.0));
    c.sigma.push_back(std::sqrt(var));
  }
  return c;
}

/// RB-derived curve from one error rate per CNOT occurrence in a step. Each
/// occurrence is an independent variable with infidelity (d+1)/d r.
inline QcapCurve qcap_rb_curve(const std::vector<double>& rates, int d, int steps,
                               const std::vector<double>& sigmas = {}) {
  bench::detail::check_dimension(d);
  detail::require(sigmas.empty() || sigmas.size() == rates.size(), "need one sigma per rate");
  std::vector<Term> terms;
  const double scale = (d + 1.0) / d;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double r = rates[i];
    detail::require(std::isfinite(r) && r >= 0.0 && r <= 1.0, "error rate must be in [0, 1]");
    terms.push_back({scale * r, sigmas.empty() ? 0.0 : scale * sigmas[i], 1});
  }
  return compose_bound(terms, steps, Source::RB);
}

/// Keyed form: `sequence` lists the key of every error occurrence in one
/// step; occurrences sharing a key share one estimate (and its sigma).
template <typename Key>
std::vector<Term> keyed_terms(const std::map<Key, InfidelityEstimate>& estimates, const std::vector<Key>& sequence,
                              const std::string& what) {
  std::map<Key, int> counts;
  for (const Key& k : sequence) ++counts[k];
  std::vector<Term> terms;
  for (const auto& [k, n] : counts) {
    auto it = estimates.find(k);
    detail::require(it != estimates.end(), "missing " + what + " estimate for an entry of the step sequence");
    terms.push_back({it->second.e_F, it->second.sigma, n});
  }
  return terms;
}

/// CB-derived curve: per-step sequence of hard-cycle ids with an estimate
/// for each distinct cycle.
inline QcapCurve qcap_cb_curve(const std::map<int, InfidelityEstimate>& cycle_estimates,
                               const std::vector<int>& step_cycles, int steps) {
  return compose_bound(keyed_terms(cycle_estimates, step_cycles, "cycle"), steps, Source::CB);
}

/// RB-derived curve from per-pair process-infidelity estimates (already
/// converted from r) and the pairs of every CNOT in one step.
inline QcapCurve qcap_rb_curve(const std::map<std::pair<int, int>, InfidelityEstimate>& pair_estimates,
                               const std::vector<std::pair<int, int>>& step_pairs, int steps) {
  return compose_bound(keyed_terms(pair_estimates, step_pairs, "pair"), steps, Source::RB);
}

/// First step whose bound exceeds `threshold`, if any. Informational only.
inline std::optional<int> first_step_above(const QcapCurve& c, double threshold = 0.5) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.bound[i] > threshold) return c.steps[i];
  return std::nullopt;
}

enum class Verdict { Consistent, DriftDetected };

inline std::string verdict_name(Verdict v) { return v == Verdict::Consistent ? "consistent" : "drift-detected"; }

inline Verdict compare_values(double a, double sa, double b, double sb, double k = 1.0) {
  detail::require(k >= 0.0, "sigma multiplier must be non-negative");
  detail::require(sa >= 0.0 && sb >= 0.0, "sigmas must be non-negative");
  const double gap = std::abs(a - b);
  const double tol = (sa + sb) == 0.0 ? 0.0 : k * (sa + sb);
  return gap > tol ? Verdict::DriftDetected : Verdict::Consistent;
}

inline Verdict compare_estimates(const InfidelityEstimate& a, const InfidelityEstimate& b, double k = 1.0) {
  return compare_values(a.e_F, a.sigma, b.e_F, b.sigma, k);
}

inline std::vector<Verdict> compare_estimates(const QcapCurve& a, const QcapCurve& b, double k = 1.0) {
  detail::require(a.steps == b.steps, "curves are on different step grids");
  detail::require(a.bound.size() == a.size() && a.sigma.size() == a.size() && b.bound.size() == b.size() &&
                      b.sigma.size() == b.size(),
                  "malformed curve");
  std::vector<Verdict> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(compare_values(a.bound[i], a.sigma[i], b.bound[i], b.sigma[i], k));
  return out;
}

}  // namespace qstab::qcap
