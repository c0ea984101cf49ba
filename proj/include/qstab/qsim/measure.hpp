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
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/core/rng.hpp"
#include "qstab/qsim/pauli.hpp"
#include "qstab/qsim/state.hpp"

namespace qstab::qsim {

namespace detail {

inline double checked_real(cplx v) {
  qstab::detail::require(std::abs(v.imag()) <= 1e-10, "Pauli expectation has an imaginary part");
  return std::clamp(v.real(), -1.0, 1.0);
}

inline cplx i_pow(int k) {
  static const cplx table[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  return table[((k % 4) + 4) % 4];
}

}  // namespace detail

/// sign * <psi|P|psi>.
inline double expectation_pauli(const StateVector& psi, const PauliString& p) {
  qstab::detail::require(p.n_qubits() == psi.n_qubits(), "Pauli string does not match state size");
  const auto m = detail::masks_for(p, psi.n_qubits(), {});
  const cplx iy = detail::i_pow(m.n_y);
  cplx acc = 0;
  const auto d = static_cast<std::uint64_t>(psi.dim());
  for (std::uint64_t k = 0; k < d; ++k) {
    const double s = detail::parity(k & m.z) ? -1.0 : 1.0;
    acc += std::conj(psi.amplitude(k ^ m.x)) * s * psi.amplitude(k);
  }
  return detail::checked_real(static_cast<double>(p.sign()) * iy * acc);
}

/// sign * Tr(P rho).
inline double expectation_pauli(const DensityMatrix& rho, const PauliString& p) {
  qstab::detail::require(p.n_qubits() == rho.n_qubits(), "Pauli string does not match state size");
  const auto m = detail::masks_for(p, rho.n_qubits(), {});
  const cplx iy = detail::i_pow(m.n_y);
  cplx acc = 0;
  const auto d = static_cast<std::uint64_t>(rho.dim());
  const Matrix& r = rho.matrix();
  // Tr(P rho) = sum_l <l xor x| P |l> rho(l, l xor x).
  for (std::uint64_t l = 0; l < d; ++l) {
    const double s = detail::parity(l & m.z) ? -1.0 : 1.0;
    acc += s * r(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l ^ m.x));
  }
  return detail::checked_real(static_cast<double>(p.sign()) * iy * acc);
}

/// Row-stochastic readout confusion for one qubit: entry [true][reported].
struct Confusion {
  std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};

  static Confusion ideal() { return {}; }
  /// Symmetric confusion from a single scalar readout error.
  static Confusion symmetric(double error) { return asymmetric(error, error); }
  static Confusion asymmetric(double p1_given_0, double p0_given_1) {
    Confusion c;
    c.m = {{{1.0 - p1_given_0, p1_given_0}, {p0_given_1, 1.0 - p0_given_1}}};
    return c;
  }

  bool is_ideal() const { return m[0][1] == 0.0 && m[1][0] == 0.0; }

  void validate(double tol = 1e-12) const {
    for (const auto& row : m) {
      qstab::detail::require(row[0] >= 0.0 && row[1] >= 0.0, "confusion matrix has negative entries");
      qstab::detail::require(std::abs(row[0] + row[1] - 1.0) <= tol,
                             "confusion matrix row does not sum to 1");
    }
  }

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Born-rule sampling of basis indices followed by independent per-qubit
/// readout flips. `readout` is either empty (ideal) or has one entry per
/// qubit.
inline std::vector<std::uint64_t> sample_outcomes(const std::vector<double>& probabilities, int n_qubits,
                                                  const std::vector<Confusion>& readout, int shots,
                                                  Rng& rng) {
  qstab::detail::require(shots >= 1, "shots must be >= 1");
  qstab::detail::require(readout.empty() || static_cast<int>(readout.size()) == n_qubits,
                         "readout list must be empty or have one entry per qubit");
  bool ideal = true;
  for (const Confusion& c : readout) {
    c.validate();
    ideal = ideal && c.is_ideal();
  }
  std::vector<double> cdf(probabilities.size());
  double run = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) cdf[i] = (run += probabilities[i]);

  std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
  for (auto& o : out) {
    const double u = rng.uniform() * run;
    std::size_t idx = 0;
    while (idx + 1 < cdf.size() && u >= cdf[idx]) ++idx;
    std::uint64_t bits = idx;
    if (!ideal) {
      for (int q = 0; q < n_qubits; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << detail::bit_of(n_qubits, q);
        const int truth = (bits & bit) ? 1 : 0;
        if (rng.bernoulli(readout[static_cast<std::size_t>(q)].m[truth][1 - truth])) bits ^= bit;
      }
    }
    o = bits;
  }
  return out;
}

inline std::string bitstring(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index & (std::uint64_t{1} << detail::bit_of(n_qubits, q))) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

inline std::map<std::string, int> counts_from_outcomes(const std::vector<std::uint64_t>& outcomes,
                                                       int n_qubits) {
  std::map<std::string, int> counts;
  for (std::uint64_t o : outcomes) ++counts[bitstring(o, n_qubits)];
  return counts;
}

template <typename State>
std::map<std::string, int> sample_counts(const State& state, const std::vector<Confusion>& readout,
                                         int shots, std::uint64_t seed) {
  Rng rng(seed);
  return counts_from_outcomes(
      sample_outcomes(state.probabilities(), state.n_qubits(), readout, shots, rng), state.n_qubits());
}

}  // namespace qstab::qsim
