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
#include <complex>
#include <cstdint>
#include <string>

namespace qrb {

/// Index into the n-qubit Pauli word basis, k in [0, 4^n).
///
/// The word is the base-4 expansion of k with qubit 0 the least significant
/// digit; digit values are 0=I, 1=X, 2=Y, 3=Z. Qubit 0 is also the least
/// significant bit of computational-basis state indices, i.e. the rightmost
/// tensor factor. This is the one ordering convention of the whole library;
/// every module routes through the helpers below.
using PauliLabel = std::uint32_t;

inline std::size_t num_pauli_labels(int n) { return std::size_t{1} << (2 * n); }

inline int pauli_letter(PauliLabel k, int qubit) {
  return static_cast<int>((k >> (2 * qubit)) & 3u);
}

std::string pauli_word_string(PauliLabel k, int n);  // e.g. "ZI" for n=2, Z on qubit 1

/// One of the 2x2 Pauli matrices, letter in {0,1,2,3} = {I,X,Y,Z}.
const Eigen::Matrix2cd& pauli_sigma(int letter);

/// Dense d x d matrix of the (unnormalized) Pauli word P_k.
Eigen::MatrixXcd pauli_matrix(PauliLabel k, int n);

/// Tr[P_k rho] without materializing P_k; O(d) given the dense rho.
std::complex<double> pauli_trace(const Eigen::MatrixXcd& rho, PauliLabel k, int n);

/// <psi| P_k |psi> for a pure state; O(d).
std::complex<double> pauli_expectation(const Eigen::VectorXcd& psi, PauliLabel k, int n);

/// A signed Pauli word in canonical form: matrix = i^phase * (tensor of
/// hermitian letters). Hermitian operators have phase 0 (+1) or 2 (-1).
/// Used as the value type of Clifford tableau rows.
struct PauliOperator {
  std::uint32_t x = 0;  // per-qubit X component (set for X and Y letters)
  std::uint32_t z = 0;  // per-qubit Z component (set for Z and Y letters)
  int phase = 0;        // power of i, mod 4

  PauliLabel label() const;
  bool is_hermitian() const { return (phase & 1) == 0; }
  int sign() const { return phase == 0 ? +1 : -1; }  // requires hermitian
  bool identity_word() const { return x == 0 && z == 0; }

  static PauliOperator single_x(int qubit) { return {1u << qubit, 0u, 0}; }
  static PauliOperator single_z(int qubit) { return {0u, 1u << qubit, 0}; }
  static PauliOperator from_label(PauliLabel k, int n);

  friend bool operator==(const PauliOperator&, const PauliOperator&) = default;
};

/// Matrix product a * b in canonical form.
PauliOperator pauli_multiply(const PauliOperator& a, const PauliOperator& b);

/// Returns true iff the underlying words anticommute.
bool pauli_anticommute(const PauliOperator& a, const PauliOperator& b);

/// out = op * in (phase-permutation action, O(d)).
Eigen::VectorXcd apply_pauli(const PauliOperator& op, const Eigen::VectorXcd& in, int n);

Eigen::MatrixXcd pauli_operator_matrix(const PauliOperator& op, int n);

}  // namespace qrb
