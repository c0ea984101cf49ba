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

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qstab/core/error.hpp"

namespace qstab::qsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(PauliLetter p) { return "IXYZ"[static_cast<int>(p)]; }

inline PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': return PauliLetter::I;
    case 'X': return PauliLetter::X;
    case 'Y': return PauliLetter::Y;
    case 'Z': return PauliLetter::Z;
    default: throw ValidationError(std::string("invalid Pauli letter '") + c + "'");
  }
}

inline bool x_bit(PauliLetter p) { return p == PauliLetter::X || p == PauliLetter::Y; }
inline bool z_bit(PauliLetter p) { return p == PauliLetter::Z || p == PauliLetter::Y; }

inline PauliLetter letter_from_bits(bool x, bool z) {
  if (x && z) return PauliLetter::Y;
  if (x) return PauliLetter::X;
  if (z) return PauliLetter::Z;
  return PauliLetter::I;
}

/// Product of two single-qubit letters: a*b = i^phase * result.
inline std::pair<int, PauliLetter> multiply_letters(PauliLetter a, PauliLetter b) {
  using P = PauliLetter;
  if (a == P::I) return {0, b};
  if (b == P::I) return {0, a};
  if (a == b) return {0, P::I};
  // Cyclic X->Y->Z gives +i, anti-cyclic gives -i.
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const int rest = 6 - ia - ib;
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? 1 : 3, static_cast<P>(rest)};
}

inline Matrix letter_matrix(PauliLetter p) {
  Matrix m(2, 2);
  const cplx i(0, 1);
  switch (p) {
    case PauliLetter::I: m << 1, 0, 0, 1; break;
    case PauliLetter::X: m << 0, 1, 1, 0; break;
    case PauliLetter::Y: m << 0, -i, i, 0; break;
    case PauliLetter::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// n-qubit tensor product of {I,X,Y,Z} with a sign. Qubit 0 is the leftmost
/// letter and the leftmost tensor factor.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits) : letters_(static_cast<std::size_t>(n_qubits), PauliLetter::I) {}
  PauliString(std::vector<PauliLetter> letters, int sign = +1) : letters_(std::move(letters)) {
    set_sign(sign);
  }

  /// Parses "XIZ", "+XIZ" or "-XIZ".
  static PauliString parse(std::string_view text) {
    int sign = +1;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      sign = text.front() == '-' ? -1 : +1;
      text.remove_prefix(1);
    }
    if (text.empty()) throw ValidationError("empty Pauli string");
    std::vector<PauliLetter> letters;
    letters.reserve(text.size());
    for (char c : text) letters.push_back(letter_from_char(c));
    return PauliString(std::move(letters), sign);
  }

  /// Base-4 enumeration with qubit 0 as the most significant digit
  /// (I=0, X=1, Y=2, Z=3). Index 0 is the identity.
  static PauliString from_index(int n_qubits, std::uint64_t index) {
    PauliString p(n_qubits);
    for (int q = n_qubits - 1; q >= 0; --q) {
      p.letters_[static_cast<std::size_t>(q)] = static_cast<PauliLetter>(index & 3u);
      index >>= 2;
    }
    return p;
  }

  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (PauliLetter l : letters_) idx = (idx << 2) | static_cast<std::uint64_t>(l);
    return idx;
  }

  int n_qubits() const { return static_cast<int>(letters_.size()); }
  PauliLetter operator[](int q) const { return letters_[static_cast<std::size_t>(q)]; }
  void set(int q, PauliLetter l) { letters_[static_cast<std::size_t>(q)] = l; }
  const std::vector<PauliLetter>& letters() const { return letters_; }

  int sign() const { return negative_ ? -1 : +1; }
  void set_sign(int s) {
    detail::require(s == 1 || s == -1, "Pauli sign must be +1 or -1");
    negative_ = s < 0;
  }
  PauliString unsigned_copy() const {
    PauliString p = *this;
    p.negative_ = false;
    return p;
  }

  bool is_identity() const {
    for (PauliLetter l : letters_)
      if (l != PauliLetter::I) return false;
    return true;
  }

  int weight() const {
    int w = 0;
    for (PauliLetter l : letters_) w += l != PauliLetter::I ? 1 : 0;
    return w;
  }

  /// Letters only, e.g. "XIZ".
  std::string letters_str() const {
    std::string s;
    s.reserve(letters_.size());
    for (PauliLetter l : letters_) s.push_back(to_char(l));
    return s;
  }

  /// Letters with a leading '-' when the sign is negative.
  std::string str() const { return (negative_ ? "-" : "") + letters_str(); }

  bool commutes_with(const PauliString& other) const {
    detail::require(other.n_qubits() == n_qubits(), "Pauli strings differ in qubit count");
    int anti = 0;
    for (std::size_t q = 0; q < letters_.size(); ++q) {
      const PauliLetter a = letters_[q], b = other.letters_[q];
      if (a != PauliLetter::I && b != PauliLetter::I && a != b) ++anti;
    }
    return anti % 2 == 0;
  }

  /// Dense 2^n x 2^n matrix including the sign.
  Matrix matrix() const {
    Matrix m = Matrix::Identity(1, 1);
    for (PauliLetter l : letters_) {
      const Matrix f = letter_matrix(l);
      Matrix k(m.rows() * 2, m.cols() * 2);
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) k.block(2 * r, 2 * c, 2, 2) = m(r, c) * f;
      m = std::move(k);
    }
    return negative_ ? Matrix(-m) : m;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.letters_ <=> b.letters_; c != 0) return c;
    return a.negative_ <=> b.negative_;
  }

 private:
  std::vector<PauliLetter> letters_;
  bool negative_ = false;
};

/// i^phase * P for a product of Pauli strings.
struct PhasedPauli {
  int phase = 0;  // exponent of i, 0..3; includes the operand signs
  PauliString pauli;
};

inline PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  detail::require(a.n_qubits() == b.n_qubits(), "Pauli strings differ in qubit count");
  PauliString out(a.n_qubits());
  int phase = (a.sign() < 0 ? 2 : 0) + (b.sign() < 0 ? 2 : 0);
  for (int q = 0; q < a.n_qubits(); ++q) {
    auto [ph, l] = multiply_letters(a[q], b[q]);
    phase += ph;
    out.set(q, l);
  }
  return {phase % 4, std::move(out)};
}

/// All 4^n - 1 non-identity Pauli strings in index order.
inline std::vector<PauliString> non_identity_paulis(int n_qubits) {
  std::vector<PauliString> out;
  const std::uint64_t total = std::uint64_t{1} << (2 * n_qubits);
  out.reserve(total - 1);
  for (std::uint64_t i = 1; i < total; ++i) out.push_back(PauliString::from_index(n_qubits, i));
  return out;
}

}  // namespace qstab::qsim
