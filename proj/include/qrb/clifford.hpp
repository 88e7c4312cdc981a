// Copyright 2026 The qrb authors
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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrb/pauli.hpp"
#include "qrb/rng.hpp"

namespace qrb {

inline constexpr int kDefaultMaxQubits = 4;  // dense-simulation desk-scale cap

/// An n-qubit Clifford group element, represented by its conjugation action:
/// the signed Pauli images of the generators X_q and Z_q. Two elements are
/// equal iff they induce the same channel (global phase never enters).
class CliffordElement {
 public:
  CliffordElement() = default;

  int num_qubits() const { return n_; }
  const PauliOperator& image_x(int q) const { return xrow_[static_cast<std::size_t>(q)]; }
  const PauliOperator& image_z(int q) const { return zrow_[static_cast<std::size_t>(q)]; }

  /// Image of an arbitrary signed Pauli word under conjugation.
  PauliOperator evaluate(const PauliOperator& p) const;

  /// Symplectic/commutation consistency check of the tableau.
  bool is_valid() const;

  /// Dense d x d unitary realizing the conjugation action. The global phase
  /// is fixed by convention: scanning column 0 from row 0, the first entry
  /// of magnitude above 1e-8 is made real positive.
  Eigen::MatrixXcd to_unitary() const;

  /// Canonical serialization of the tableau; equal strings <=> equal channel.
  std::string key() const;

  static CliffordElement identity(int n);
  static CliffordElement hadamard();
  static CliffordElement s_gate();
  static CliffordElement x_gate();
  static CliffordElement y_gate();
  static CliffordElement z_gate();
  static CliffordElement cnot();  // control qubit 0, target qubit 1

  /// Element no. idx of the n-qubit Clifford group (modulo global phase),
  /// idx in [0, group_order(n)). The map is a bijection, so a uniform index
  /// yields an exactly uniform group element.
  static CliffordElement from_index(std::uint64_t idx, int n);

  /// |C_n / U(1)| = 2^(2n) * 2^(n^2) * prod_{j=1..n} (4^j - 1).
  static std::uint64_t group_order(int n);
  static std::uint64_t symplectic_order(int n);

  friend bool operator==(const CliffordElement&, const CliffordElement&) = default;

 private:
  friend CliffordElement compose(const CliffordElement&, const CliffordElement&);
  friend CliffordElement inverse(const CliffordElement&);

  int n_ = 0;
  std::vector<PauliOperator> xrow_;
  std::vector<PauliOperator> zrow_;
};

/// Uniform over the full n-qubit Clifford group.
CliffordElement random_clifford(int n, Rng& rng, int n_max = kDefaultMaxQubits);

/// Element acting as "apply b, then a".
CliffordElement compose(const CliffordElement& a, const CliffordElement& b);

CliffordElement inverse(const CliffordElement& c);

/// The unique element inverting the whole sequence (seq[0] applied first).
CliffordElement inverting_gate(std::span<const CliffordElement> seq);

}  // namespace qrb
