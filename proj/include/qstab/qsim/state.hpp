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

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/qsim/pauli.hpp"

namespace qstab::qsim {

inline constexpr int kMaxQubits = 5;

namespace detail {

using qstab::detail::require;

/// Bit position of qubit q in a basis index over n qubits (qubit 0 is the
/// most significant bit, so bitstrings read qubit 0 first).
inline int bit_of(int n, int q) { return n - 1 - q; }

inline void check_targets(int n, std::span<const int> targets) {
  for (std::size_t a = 0; a < targets.size(); ++a) {
    require(targets[a] >= 0 && targets[a] < n,
            "target qubit " + std::to_string(targets[a]) + " out of range");
    for (std::size_t b = a + 1; b < targets.size(); ++b)
      require(targets[a] != targets[b], "duplicate target qubit " + std::to_string(targets[a]));
  }
}

inline bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Applies a 2^k x 2^k matrix to the `targets` of a length-2^n vector stored
/// with the given stride. targets[0] is the most significant bit of the
/// gate's local index.
inline void apply_local(cplx* data, Eigen::Index stride, int n, const Matrix& u,
                        std::span<const int> targets) {
  const int k = static_cast<int>(targets.size());
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t local = std::uint64_t{1} << k;
  std::uint64_t mask = 0;
  std::vector<std::uint64_t> offsets(local, 0);
  for (int t = 0; t < k; ++t) {
    const std::uint64_t bit = std::uint64_t{1} << bit_of(n, targets[static_cast<std::size_t>(t)]);
    mask |= bit;
    for (std::uint64_t l = 0; l < local; ++l)
      if (l & (std::uint64_t{1} << (k - 1 - t))) offsets[l] |= bit;
  }
  cplx in[1 << kMaxQubits];
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::uint64_t l = 0; l < local; ++l)
      in[l] = data[static_cast<Eigen::Index>(base | offsets[l]) * stride];
    for (std::uint64_t r = 0; r < local; ++r) {
      cplx acc = 0;
      for (std::uint64_t c = 0; c < local; ++c)
        acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      data[static_cast<Eigen::Index>(base | offsets[r]) * stride] = acc;
    }
  }
}

/// Global x/z masks for a Pauli acting on `targets` (or on all qubits when
/// `targets` is empty and the string spans the register).
struct PauliMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int n_y = 0;
};

inline PauliMasks masks_for(const PauliString& p, int n, std::span<const int> targets) {
  PauliMasks m;
  for (int q = 0; q < p.n_qubits(); ++q) {
    const int global = targets.empty() ? q : targets[static_cast<std::size_t>(q)];
    const std::uint64_t bit = std::uint64_t{1} << bit_of(n, global);
    if (x_bit(p[q])) m.x |= bit;
    if (z_bit(p[q])) m.z |= bit;
    if (p[q] == PauliLetter::Y) ++m.n_y;
  }
  return m;
}

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

}  // namespace detail

/// Pure state on n <= 5 qubits.
class StateVector {
 public:
  explicit StateVector(int n_qubits) : n_(n_qubits) {
    detail::require(n_qubits >= 1 && n_qubits <= kMaxQubits, "qubit count must be in [1, 5]");
    amps_ = Vector::Zero(Eigen::Index{1} << n_qubits);
    amps_(0) = 1.0;
  }

  StateVector(int n_qubits, Vector amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
    detail::require(n_qubits >= 1 && n_qubits <= kMaxQubits, "qubit count must be in [1, 5]");
    detail::require(amps_.size() == (Eigen::Index{1} << n_qubits), "amplitude count must be 2^n");
    detail::require(std::abs(amps_.squaredNorm() - 1.0) <= 1e-10, "state is not normalized");
  }

  /// Computational basis state from a bitstring read qubit 0 first, e.g. "1000".
  static StateVector from_bits(std::string_view bits) {
    StateVector s(static_cast<int>(bits.size()));
    std::uint64_t idx = 0;
    for (char c : bits) {
      detail::require(c == '0' || c == '1', "bitstring must contain only 0/1");
      idx = (idx << 1) | (c == '1' ? 1u : 0u);
    }
    s.amps_(0) = 0.0;
    s.amps_(static_cast<Eigen::Index>(idx)) = 1.0;
    return s;
  }

  int n_qubits() const { return n_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  cplx amplitude(std::uint64_t index) const { return amps_(static_cast<Eigen::Index>(index)); }
  double norm() const { return amps_.norm(); }

  /// Validated application of a unitary; see `apply_unitary`.
  void apply(const Matrix& gate, std::span<const int> targets) {
    detail::check_targets(n_, targets);
    detail::require(gate.rows() == (Eigen::Index{1} << targets.size()),
                    "gate arity does not match target count");
    detail::require(detail::is_unitary(gate, 1e-10), "gate is not unitary");
    apply_unchecked(gate, targets);
  }

  void apply_unchecked(const Matrix& gate, std::span<const int> targets) {
    detail::apply_local(amps_.data(), 1, n_, gate, targets);
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (Eigen::Index i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = std::norm(amps_(i));
    return p;
  }

 private:
  int n_;
  Vector amps_;
};

/// Mixed state on n <= 5 qubits, stored as a dense 2^n x 2^n matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(int n_qubits) : n_(n_qubits) {
    detail::require(n_qubits >= 1 && n_qubits <= kMaxQubits, "qubit count must be in [1, 5]");
    rho_ = Matrix::Zero(Eigen::Index{1} << n_qubits, Eigen::Index{1} << n_qubits);
    rho_(0, 0) = 1.0;
  }

  DensityMatrix(int n_qubits, Matrix entries) : n_(n_qubits), rho_(std::move(entries)) {
    detail::require(n_qubits >= 1 && n_qubits <= kMaxQubits, "qubit count must be in [1, 5]");
    detail::require(rho_.rows() == (Eigen::Index{1} << n_qubits) && rho_.cols() == rho_.rows(),
                    "density matrix must be 2^n x 2^n");
    detail::require(is_valid(), "density matrix violates hermiticity/trace/positivity");
  }

  explicit DensityMatrix(const StateVector& psi)
      : n_(psi.n_qubits()), rho_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

  int n_qubits() const { return n_; }
  Eigen::Index dim() const { return rho_.rows(); }
  const Matrix& matrix() const { return rho_; }
  double trace() const { return rho_.trace().real(); }

  /// Hermitian and unit trace within 1e-10, eigenvalues >= -1e-9.
  bool is_valid() const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) return false;
    if (std::abs(rho_.trace() - cplx(1.0)) > 1e-10) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_);
    return es.eigenvalues().minCoeff() >= -1e-9;
  }

  void apply(const Matrix& gate, std::span<const int> targets) {
    detail::check_targets(n_, targets);
    detail::require(gate.rows() == (Eigen::Index{1} << targets.size()),
                    "gate arity does not match target count");
    detail::require(detail::is_unitary(gate, 1e-10), "gate is not unitary");
    apply_unchecked(gate, targets);
  }

  /// rho <- U rho U^dagger without validation.
  void apply_unchecked(const Matrix& gate, std::span<const int> targets) {
    conjugate_in_place(rho_, gate, targets);
  }

  /// rho <- sum_k K rho K^dagger for an unvalidated operator list.
  void apply_kraus_unchecked(const std::vector<Matrix>& ops, std::span<const int> targets) {
    if (ops.size() == 1) {
      conjugate_in_place(rho_, ops.front(), targets);
      return;
    }
    Matrix acc = Matrix::Zero(dim(), dim());
    for (const Matrix& k : ops) {
      Matrix term = rho_;
      conjugate_in_place(term, k, targets);
      acc += term;
    }
    rho_ = std::move(acc);
  }

  /// rho <- sum_P w_P P rho P for Pauli strings on `targets`. Uses the
  /// permutation-with-signs structure of Pauli operators, so the cost is
  /// O(terms * 4^n) with no matrix products.
  void apply_pauli_mixture(const std::vector<std::pair<double, PauliString>>& terms,
                           std::span<const int> targets) {
    const auto d = static_cast<std::uint64_t>(dim());
    Matrix acc = Matrix::Zero(dim(), dim());
    for (const auto& [w, p] : terms) {
      if (w == 0.0) continue;
      const auto m = detail::masks_for(p, n_, targets);
      for (std::uint64_t b = 0; b < d; ++b) {
        const std::uint64_t bs = b ^ m.x;
        const int sb = detail::parity(bs & m.z);
        for (std::uint64_t a = 0; a < d; ++a) {
          const std::uint64_t as = a ^ m.x;
          const double s = ((detail::parity(as & m.z) + sb) & 1) ? -w : w;
          acc(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
              s * rho_(static_cast<Eigen::Index>(as), static_cast<Eigen::Index>(bs));
        }
      }
    }
    rho_ = std::move(acc);
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (Eigen::Index i = 0; i < dim(); ++i)
      p[static_cast<std::size_t>(i)] = std::max(0.0, rho_(i, i).real());
    return p;
  }

 private:
  void conjugate_in_place(Matrix& m, const Matrix& op, std::span<const int> targets) const {
    const Eigen::Index d = m.rows();
    // Columns: m <- op * m.
    for (Eigen::Index c = 0; c < d; ++c) detail::apply_local(m.data() + c * d, 1, n_, op, targets);
    // Rows: m <- m * op^dagger, i.e. each row vector transforms by conj(op).
    const Matrix conj = op.conjugate();
    for (Eigen::Index r = 0; r < d; ++r) detail::apply_local(m.data() + r, d, n_, conj, targets);
  }

  int n_;
  Matrix rho_;
};

/// Functional form: returns the transformed state.
inline StateVector apply_unitary(StateVector state, const Matrix& gate, std::span<const int> targets) {
  state.apply(gate, targets);
  return state;
}

inline DensityMatrix apply_unitary(DensityMatrix state, const Matrix& gate,
                                   std::span<const int> targets) {
  state.apply(gate, targets);
  return state;
}

inline StateVector apply_unitary(StateVector state, const Matrix& gate,
                                 std::initializer_list<int> targets) {
  return apply_unitary(std::move(state), gate, std::span<const int>(targets.begin(), targets.size()));
}

inline DensityMatrix apply_unitary(DensityMatrix state, const Matrix& gate,
                                   std::initializer_list<int> targets) {
  return apply_unitary(std::move(state), gate, std::span<const int>(targets.begin(), targets.size()));
}

}  // namespace qstab::qsim
