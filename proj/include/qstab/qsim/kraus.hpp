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

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/qsim/pauli.hpp"
#include "qstab/qsim/state.hpp"

namespace qstab::qsim {

/// Completely positive trace-preserving map in Kraus form on k qubits.
///
/// Construction validates trace preservation (sum K^dagger K = I within
/// 1e-9) and complete positivity of the Choi matrix. Channels that are
/// Pauli mixtures additionally remember their weights so density-matrix
/// application can take the permutation fast path.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> operators) : ops_(std::move(operators)) {
    validate();
  }

  static KrausChannel identity(int arity) {
    return KrausChannel({Matrix::Identity(Eigen::Index{1} << arity, Eigen::Index{1} << arity)});
  }

  /// Kraus set {sqrt(w) P}; weights must be non-negative and sum to 1.
  static KrausChannel from_pauli_mixture(std::vector<std::pair<double, PauliString>> terms) {
    detail::require(!terms.empty(), "Pauli mixture needs at least one term");
    std::vector<Matrix> ops;
    ops.reserve(terms.size());
    for (const auto& [w, p] : terms) {
      detail::require(w >= 0.0, "Pauli mixture weight must be non-negative");
      ops.push_back(std::sqrt(w) * p.unsigned_copy().matrix());
    }
    KrausChannel ch(std::move(ops));
    ch.pauli_terms_ = std::move(terms);
    return ch;
  }

  int arity() const { return arity_; }
  const std::vector<Matrix>& operators() const { return ops_; }
  const std::optional<std::vector<std::pair<double, PauliString>>>& pauli_terms() const {
    return pauli_terms_;
  }

  bool is_trace_preserving(double tol = 1e-9) const {
    const Eigen::Index d = Eigen::Index{1} << arity_;
    Matrix acc = Matrix::Zero(d, d);
    for (const Matrix& k : ops_) acc += k.adjoint() * k;
    return (acc - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }

  /// Choi matrix sum_K |K>><<K| using column-stacking vectorization.
  Matrix choi() const {
    const Eigen::Index d = Eigen::Index{1} << arity_;
    Matrix c = Matrix::Zero(d * d, d * d);
    for (const Matrix& k : ops_) {
      const Vector v = Eigen::Map<const Vector>(k.data(), d * d);
      c += v * v.adjoint();
    }
    return c;
  }

  bool is_completely_positive(double tol = 1e-9) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(choi());
    return es.eigenvalues().minCoeff() >= -tol;
  }

  bool is_identity(double tol = 1e-12) const {
    const Eigen::Index d = Eigen::Index{1} << arity_;
    if (ops_.size() != 1) return false;
    const Matrix& k = ops_.front();
    // Identity up to a global phase.
    const cplx phase = k(0, 0);
    return std::abs(std::abs(phase) - 1.0) <= tol &&
           (k - phase * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  void validate() {
    detail::require(!ops_.empty(), "Kraus channel needs at least one operator");
    const Eigen::Index d = ops_.front().rows();
    int k = 0;
    while ((Eigen::Index{1} << k) < d) ++k;
    detail::require((Eigen::Index{1} << k) == d && d >= 2, "Kraus operators must be 2^k x 2^k");
    for (const Matrix& op : ops_)
      detail::require(op.rows() == d && op.cols() == d, "Kraus operators differ in shape");
    arity_ = k;
    detail::require(is_trace_preserving(), "Kraus channel is not trace preserving");
    detail::require(is_completely_positive(), "Kraus channel is not completely positive");
  }

  std::vector<Matrix> ops_;
  int arity_ = 0;
  std::optional<std::vector<std::pair<double, PauliString>>> pauli_terms_;
};

/// Applies the channel in place; Pauli mixtures use the fast path.
inline void apply_channel_in_place(DensityMatrix& rho, const KrausChannel& channel,
                                   std::span<const int> targets) {
  detail::check_targets(rho.n_qubits(), targets);
  detail::require(static_cast<int>(targets.size()) == channel.arity(),
                  "channel arity does not match target count");
  if (channel.pauli_terms())
    rho.apply_pauli_mixture(*channel.pauli_terms(), targets);
  else
    rho.apply_kraus_unchecked(channel.operators(), targets);
}

inline DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel& channel,
                                   std::span<const int> targets) {
  apply_channel_in_place(rho, channel, targets);
  return rho;
}

inline DensityMatrix apply_channel(DensityMatrix rho, const KrausChannel& channel,
                                   std::initializer_list<int> targets) {
  return apply_channel(std::move(rho), channel, std::span<const int>(targets.begin(), targets.size()));
}

}  // namespace qstab::qsim
