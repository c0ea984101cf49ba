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
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "qstab/bench/fit.hpp"
#include "qstab/core/error.hpp"

namespace qstab::bench {

enum class Source { CB, RB };

inline std::string source_name(Source s) { return s == Source::CB ? "CB" : "RB"; }

inline Source source_from_name(const std::string& s) {
  if (s == "CB") return Source::CB;
  if (s == "RB") return Source::RB;
  throw ValidationError("source must be CB or RB (got '" + s + "')");
}

struct InfidelityEstimate {
  double e_F = 0.0;
  double sigma = 0.0;
  Source source = Source::CB;
  std::string target;
  int day = 0;
  std::string epoch;

  friend bool operator==(const InfidelityEstimate&, const InfidelityEstimate&) = default;
};

/// F = (1 + (4^n - 1) mean_k p_k) / 4^n, e_F = 1 - F. The variance combines
/// the propagated sigma_p and, for K < 4^n - 1 sampled terms, the
/// finite-population sampling variance of the mean.
inline InfidelityEstimate estimate_process_infidelity(const std::vector<DecayFit>& fits, int n_qubits) {
  detail::require(n_qubits >= 1 && n_qubits <= 5, "qubit count must be in [1, 5]");
  detail::require(!fits.empty(), "no decay fits to aggregate");
  std::set<std::string> seen;
  for (const auto& f : fits) {
    detail::require(f.pauli.n_qubits() == n_qubits, "decay term " + f.pauli.str() + " has the wrong size");
    detail::require(!f.pauli.is_identity(), "the identity is not a decay term");
    detail::require(seen.insert(f.pauli.letters_str()).second, "duplicate decay term " + f.pauli.letters_str());
  }
  const double d2 = static_cast<double>(std::uint64_t{1} << (2 * n_qubits));
  const double population = d2 - 1.0;
  const double k = static_cast<double>(fits.size());
  double mean = 0.0, var_fit = 0.0;
  for (const auto& f : fits) {
    mean += f.p;
    var_fit += f.sigma_p * f.sigma_p;
  }
  mean /= k;
  double s2 = 0.0;
  for (const auto& f : fits) s2 += (f.p - mean) * (f.p - mean);
  s2 = fits.size() > 1 ? s2 / (k - 1.0) : 0.0;
  const double var_mean = var_fit / (k * k) + (1.0 - k / population) * s2 / k;
  InfidelityEstimate e;
  e.e_F = std::clamp(1.0 - (1.0 + population * mean) / d2, 0.0, 1.0);
  e.sigma = (population / d2) * std::sqrt(std::max(0.0, var_mean));
  e.source = Source::CB;
  return e;
}

struct RbConversion {
  double r = 0.0;
  double e_F = 0.0;
};

namespace detail {
inline void check_dimension(int d) {
  require(d >= 2 && (d & (d - 1)) == 0, "dimension must be a power of two >= 2 (got " + std::to_string(d) + ")");
}
}  // namespace detail

/// r = ((d-1)/d)(1-p), e_F = r (d+1)/d.
inline RbConversion rb_to_process_infidelity(double p, int d) {
  detail::check_dimension(d);
  detail::require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "decay p must be in [0, 1]");
  const double dd = static_cast<double>(d);
  const double r = (dd - 1.0) / dd * (1.0 - p);
  return {r, r * (dd + 1.0) / dd};
}

inline RbConversion rb_rate_to_process_infidelity(double r, int d) {
  detail::check_dimension(d);
  detail::require(std::isfinite(r) && r >= 0.0 && r <= 1.0, "error rate r must be in [0, 1]");
  const double dd = static_cast<double>(d);
  return {r, r * (dd + 1.0) / dd};
}

}  // namespace qstab::bench
