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
#include <utility>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/qsim/kraus.hpp"
#include "qstab/qsim/pauli.hpp"

namespace qstab::noise {

using qsim::KrausChannel;
using qsim::Matrix;
using qsim::PauliString;
using qsim::cplx;

namespace detail {
using qstab::detail::require;

inline void check_probs(const std::map<PauliString, double>& probs, int n) {
  double total = 0.0;
  for (const auto& [p, w] : probs) {
    require(p.n_qubits() == n, "Pauli error string " + p.str() + " has the wrong size");
    require(std::isfinite(w) && w >= 0.0, "negative Pauli error probability for " + p.str());
    total += w;
  }
  require(total <= 1.0 + 1e-12, "Pauli error probabilities sum to more than 1");
}

}  // namespace detail

/// Weights lambda / 4^n on every non-identity Pauli.
inline std::map<PauliString, double> depolarizing_probs(double lambda, int n) {
  detail::require(std::isfinite(lambda) && lambda >= 0.0 && lambda <= 1.0, "depolarizing lambda must be in [0, 1]");
  std::map<PauliString, double> out;
  if (lambda == 0.0) return out;
  const double w = lambda / static_cast<double>(std::uint64_t{1} << (2 * n));
  for (const PauliString& p : qsim::non_identity_paulis(n)) out[p] = w;
  return out;
}

/// Fidelity f_Q = sum_P w_P (+1 if P commutes with Q else -1), identity
/// getting the remainder.
inline double pauli_fidelity(const std::map<PauliString, double>& probs, const PauliString& q) {
  double f = 1.0;
  for (const auto& [p, w] : probs)
    if (!p.unsigned_copy().is_identity() && !p.commutes_with(q)) f -= 2.0 * w;
  return f;
}

/// Kraus set {sqrt(p_P) P} with the remainder on the identity.
inline KrausChannel pauli_channel(const std::map<PauliString, double>& probs, int n) {
  detail::require(n >= 1 && n <= qsim::kMaxQubits, "Pauli channel size must be in [1, 5]");
  detail::check_probs(probs, n);
  double rest = 1.0;
  std::vector<std::pair<double, PauliString>> terms;
  for (const auto& [p, w] : probs) {
    if (w == 0.0) continue;
    if (p.unsigned_copy().is_identity()) continue;
    terms.emplace_back(w, p.unsigned_copy());
    rest -= w;
  }
  terms.insert(terms.begin(), {std::max(0.0, rest), PauliString(n)});
  return KrausChannel::from_pauli_mixture(std::move(terms));
}

/// rho -> (1 - lambda) rho + lambda I / 2^n.
inline KrausChannel depolarizing_channel(double lambda, int n) { return pauli_channel(depolarizing_probs(lambda, n), n); }

/// Amplitude damping with gamma = 1 - exp(-dt/T1) followed by pure
/// dephasing, so coherences decay by exp(-dt/T2) in total. T1/T2 in
/// microseconds, duration in nanoseconds.
inline KrausChannel damping_channel(double t1_us, double t2_us, double duration_ns) {
  detail::require(t1_us > 0.0, "T1 must be positive");
  detail::require(t2_us > 0.0, "T2 must be positive");
  detail::require(t2_us <= 2.0 * t1_us * (1.0 + 1e-12), "T2 must not exceed 2*T1");
  detail::require(std::isfinite(duration_ns) && duration_ns >= 0.0, "duration must be non-negative");
  const double dt = duration_ns * 1e-3;
  const double gamma = std::isinf(t1_us) ? 0.0 : -std::expm1(-dt / t1_us);
  const double inv_t2 = std::isinf(t2_us) ? 0.0 : 1.0 / t2_us;
  const double inv_2t1 = std::isinf(t1_us) ? 0.0 : 0.5 / t1_us;
  const double dephase = std::min(1.0, std::exp(-dt * (inv_t2 - inv_2t1)));
  const double pz = (1.0 - dephase) / 2.0;
  Matrix k0(2, 2), k1(2, 2), z(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  z << 1, 0, 0, -1;
  std::vector<Matrix> ops;
  if (gamma == 0.0 && pz == 0.0) return KrausChannel::identity(1);
  ops.push_back(std::sqrt(1.0 - pz) * k0);
  if (gamma > 0.0) ops.push_back(std::sqrt(1.0 - pz) * k1);
  if (pz > 0.0) {
    ops.push_back(std::sqrt(pz) * z * k0);
    if (gamma > 0.0) ops.push_back(std::sqrt(pz) * z * k1);
  }
  return KrausChannel(std::move(ops));
}

/// exp(-i angle/2 P) = cos(angle/2) I - i sin(angle/2) P.
inline Matrix coherent_overrotation(const PauliString& axis, double angle) {
  detail::require(!axis.unsigned_copy().is_identity(), "rotation axis must be a non-identity Pauli");
  detail::require(std::isfinite(angle), "rotation angle must be finite");
  const Matrix p = axis.matrix();
  const Eigen::Index d = p.rows();
  return std::cos(angle / 2.0) * Matrix::Identity(d, d) - cplx(0, 1) * std::sin(angle / 2.0) * p;
}

}  // namespace qstab::noise
