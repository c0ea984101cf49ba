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
#include <cstdint>
#include <deque>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "qstab/core/error.hpp"
#include "qstab/qsim/pauli.hpp"

namespace qstab::circuits {

using qsim::Matrix;
using qsim::PauliLetter;
using qsim::PauliString;
using qsim::cplx;

namespace detail {
using qstab::detail::require;
}  // namespace detail

/// Clifford operation C stored by its action on the generators:
/// x_image(q) = C X_q C^dagger and z_image(q) = C Z_q C^dagger.
class Tableau {
 public:
  Tableau() = default;

  static Tableau identity(int n_qubits) {
    Tableau t;
    t.n_ = n_qubits;
    for (int q = 0; q < n_qubits; ++q) {
      PauliString x(n_qubits), z(n_qubits);
      x.set(q, PauliLetter::X);
      z.set(q, PauliLetter::Z);
      t.x_.push_back(std::move(x));
      t.z_.push_back(std::move(z));
    }
    return t;
  }

  static Tableau hadamard(int n, int q) {
    Tableau t = identity(n);
    std::swap(t.x_[idx(q)], t.z_[idx(q)]);
    return t;
  }

  static Tableau phase(int n, int q) {
    Tableau t = identity(n);
    t.x_[idx(q)].set(q, PauliLetter::Y);
    return t;
  }

  static Tableau phase_dagger(int n, int q) {
    Tableau t = phase(n, q);
    t.x_[idx(q)].set_sign(-1);
    return t;
  }

  static Tableau pauli(int n, int q, PauliLetter p) {
    Tableau t = identity(n);
    // Conjugation by a Pauli flips the sign of anticommuting generators.
    if (p == PauliLetter::Y || p == PauliLetter::Z) t.x_[idx(q)].set_sign(-1);
    if (p == PauliLetter::Y || p == PauliLetter::X) t.z_[idx(q)].set_sign(-1);
    return t;
  }

  static Tableau cnot(int n, int control, int target) {
    detail::require(control != target, "CNOT control equals target");
    Tableau t = identity(n);
    t.x_[idx(control)].set(target, PauliLetter::X);
    t.z_[idx(target)].set(control, PauliLetter::Z);
    return t;
  }

  /// Embeds a single-qubit tableau on qubit q of an n-qubit register.
  static Tableau embed(const Tableau& one, int n, int q) {
    detail::require(one.n_ == 1, "embed expects a single-qubit tableau");
    Tableau t = identity(n);
    for (const auto& [src, dst] : {std::pair{&one.x_[0], &t.x_[idx(q)]}, std::pair{&one.z_[0], &t.z_[idx(q)]}}) {
      PauliString p(n);
      p.set(q, (*src)[0]);
      p.set_sign(src->sign());
      *dst = std::move(p);
    }
    return t;
  }

  /// Overwrites the images of X_q and Z_q. The caller keeps the result a
  /// valid Clifford (images must satisfy the symplectic relations).
  void set_images(int q, PauliString x_img, PauliString z_img) {
    detail::require(x_img.n_qubits() == n_ && z_img.n_qubits() == n_, "image size mismatch");
    x_[idx(q)] = std::move(x_img);
    z_[idx(q)] = std::move(z_img);
  }

  int n_qubits() const { return n_; }
  const PauliString& x_image(int q) const { return x_[idx(q)]; }
  const PauliString& z_image(int q) const { return z_[idx(q)]; }

  /// C P C^dagger, computed from the generator images only.
  PauliString conjugate(const PauliString& p) const {
    detail::require(p.n_qubits() == n_, "Pauli string does not match tableau size");
    // P = sign * prod_q i^{[Y_q]} X_q^{x_q} Z_q^{z_q}.
    PauliString acc(n_);
    int phase = p.sign() < 0 ? 2 : 0;
    for (int q = 0; q < n_; ++q) {
      const PauliLetter l = p[q];
      if (l == PauliLetter::Y) phase += 1;
      if (qsim::x_bit(l)) {
        auto prod = qsim::multiply(acc, x_[idx(q)]);
        phase += prod.phase;
        acc = std::move(prod.pauli);
      }
      if (qsim::z_bit(l)) {
        auto prod = qsim::multiply(acc, z_[idx(q)]);
        phase += prod.phase;
        acc = std::move(prod.pauli);
      }
    }
    phase %= 4;
    detail::require(phase % 2 == 0, "conjugation produced a non-Hermitian phase");
    acc.set_sign(phase == 0 ? 1 : -1);
    return acc;
  }

  /// The operation "this first, then next".
  Tableau then(const Tableau& next) const {
    detail::require(next.n_ == n_, "tableau sizes differ");
    Tableau t;
    t.n_ = n_;
    for (int q = 0; q < n_; ++q) {
      t.x_.push_back(next.conjugate(x_[idx(q)]));
      t.z_.push_back(next.conjugate(z_[idx(q)]));
    }
    return t;
  }

  /// C^dagger. For each generator G, solves C P C^dagger = +-G over the 4^n
  /// unsigned Pauli strings and fixes the sign.
  Tableau inverse() const {
    Tableau t;
    t.n_ = n_;
    t.x_.resize(static_cast<std::size_t>(n_));
    t.z_.resize(static_cast<std::size_t>(n_));
    const std::uint64_t total = std::uint64_t{1} << (2 * n_);
    std::vector<PauliString> images;
    images.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) images.push_back(conjugate(PauliString::from_index(n_, i)));
    Tableau id = identity(n_);
    for (int q = 0; q < n_; ++q) {
      for (auto [target, slot] : {std::pair{&id.x_[idx(q)], &t.x_[idx(q)]}, std::pair{&id.z_[idx(q)], &t.z_[idx(q)]}}) {
        for (std::uint64_t i = 0; i < total; ++i) {
          if (images[i].letters() != target->letters()) continue;
          PauliString pre = PauliString::from_index(n_, i);
          pre.set_sign(images[i].sign());
          *slot = std::move(pre);
          break;
        }
      }
    }
    return t;
  }

  /// Compact key for n <= 3 (5 bits per generator image and qubit).
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int q = 0; q < n_; ++q) {
      for (const PauliString* p : {&x_[idx(q)], &z_[idx(q)]}) {
        k = (k << 1) | (p->sign() < 0 ? 1u : 0u);
        k = (k << (2 * n_)) | p->index();
      }
    }
    return k;
  }

  friend bool operator==(const Tableau&, const Tableau&) = default;

 private:
  static std::size_t idx(int q) { return static_cast<std::size_t>(q); }

  int n_ = 0;
  std::vector<PauliString> x_;
  std::vector<PauliString> z_;
};

namespace detail {

inline Matrix hadamard_matrix() {
  Matrix h(2, 2);
  const double r = 1.0 / std::numbers::sqrt2;
  h << r, r, r, -r;
  return h;
}

inline Matrix phase_matrix() {
  Matrix s(2, 2);
  s << 1, 0, 0, cplx(0, 1);
  return s;
}

inline Matrix cnot_matrix() {
  Matrix c = Matrix::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
  return c;
}

/// Kronecker product a (x) b with a as the leftmost factor.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) k.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return k;
}

}  // namespace detail

/// One element of an enumerated Clifford group: its tableau, a generator
/// word (left to right in time order) and the resulting unitary.
struct CliffordElement {
  Tableau tableau;
  std::string word;
  Matrix unitary;
};

/// Clifford group on one or two qubits (modulo global phase), enumerated
/// once by breadth-first search over {H, S} (plus CNOT for two qubits).
/// Sizes: 24 for one qubit and 11520 for two.
class CliffordGroup {
 public:
  explicit CliffordGroup(int n_qubits) : n_(n_qubits) {
    detail::require(n_qubits == 1 || n_qubits == 2, "Clifford groups are enumerated for 1 or 2 qubits");
    struct Gen {
      char name;
      Tableau tab;
      Matrix u;
    };
    std::vector<Gen> gens;
    const Matrix id2 = Matrix::Identity(2, 2);
    if (n_ == 1) {
      gens.push_back({'h', Tableau::hadamard(1, 0), detail::hadamard_matrix()});
      gens.push_back({'s', Tableau::phase(1, 0), detail::phase_matrix()});
    } else {
      gens.push_back({'h', Tableau::hadamard(2, 0), detail::kron(detail::hadamard_matrix(), id2)});
      gens.push_back({'H', Tableau::hadamard(2, 1), detail::kron(id2, detail::hadamard_matrix())});
      gens.push_back({'s', Tableau::phase(2, 0), detail::kron(detail::phase_matrix(), id2)});
      gens.push_back({'S', Tableau::phase(2, 1), detail::kron(id2, detail::phase_matrix())});
      gens.push_back({'c', Tableau::cnot(2, 0, 1), detail::cnot_matrix()});
    }
    const Eigen::Index d = Eigen::Index{1} << n_;
    std::deque<int> frontier;
    add({Tableau::identity(n_), "", Matrix::Identity(d, d)});
    frontier.push_back(0);
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop_front();
      for (const Gen& g : gens) {
        Tableau next = elements_[static_cast<std::size_t>(cur)].tableau.then(g.tab);
        if (index_.count(next.key())) continue;
        const CliffordElement& base = elements_[static_cast<std::size_t>(cur)];
        add({std::move(next), base.word + g.name, g.u * base.unitary});
        frontier.push_back(static_cast<int>(elements_.size()) - 1);
      }
    }
  }

  int n_qubits() const { return n_; }
  std::size_t size() const { return elements_.size(); }
  const CliffordElement& operator[](std::size_t i) const { return elements_[i]; }

  /// Index of the element with this tableau; throws if absent.
  int find(const Tableau& t) const {
    auto it = index_.find(t.key());
    detail::require(it != index_.end() && t.n_qubits() == n_, "tableau is not in the Clifford group");
    return it->second;
  }

  int identity_index() const { return 0; }

 private:
  void add(CliffordElement e) {
    index_.emplace(e.tableau.key(), static_cast<int>(elements_.size()));
    elements_.push_back(std::move(e));
  }

  int n_;
  std::vector<CliffordElement> elements_;
  std::unordered_map<std::uint64_t, int> index_;
};

inline const CliffordGroup& clifford1() {
  static const CliffordGroup g(1);
  return g;
}

inline const CliffordGroup& clifford2() {
  static const CliffordGroup g(2);
  return g;
}

}  // namespace qstab::circuits
