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

#include "qrb/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace qrb {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// sigma_a * sigma_b = i^t * sigma_c; t indexed [a][b] with letters I,X,Y,Z.
constexpr int kProductPhase[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

std::complex<double> i_power(int p) {
  switch (p & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int letter_of_bits(bool xb, bool zb) {
  if (xb && zb) return 2;
  if (xb) return 1;
  if (zb) return 3;
  return 0;
}

}  // namespace

std::string pauli_word_string(PauliLabel k, int n) {
  static const char kLetters[] = "IXYZ";
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q = 0; q < n; ++q) {
    // qubit n-1 printed first, qubit 0 last
    s[static_cast<std::size_t>(n - 1 - q)] = kLetters[pauli_letter(k, q)];
  }
  return s;
}

const Eigen::Matrix2cd& pauli_sigma(int letter) {
  static const Eigen::Matrix2cd mats[4] = {
      (Eigen::Matrix2cd() << 1, 0, 0, 1).finished(),
      (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
      (Eigen::Matrix2cd() << 0, -kI, kI, 0).finished(),
      (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
  };
  return mats[letter];
}

Eigen::MatrixXcd pauli_matrix(PauliLabel k, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
  for (int q = 0; q < n; ++q) {
    const Eigen::Matrix2cd& s = pauli_sigma(pauli_letter(k, q));
    Eigen::MatrixXcd next(2 * m.rows(), 2 * m.cols());
    // qubit q is more significant than qubits < q
    next.topLeftCorner(m.rows(), m.cols()) = s(0, 0) * m;
    next.topRightCorner(m.rows(), m.cols()) = s(0, 1) * m;
    next.bottomLeftCorner(m.rows(), m.cols()) = s(1, 0) * m;
    next.bottomRightCorner(m.rows(), m.cols()) = s(1, 1) * m;
    m.swap(next);
  }
  return m;
}

PauliOperator PauliOperator::from_label(PauliLabel k, int n) {
  PauliOperator op;
  for (int q = 0; q < n; ++q) {
    const int letter = pauli_letter(k, q);
    if (letter == 1 || letter == 2) op.x |= 1u << q;
    if (letter == 2 || letter == 3) op.z |= 1u << q;
  }
  return op;
}

PauliLabel PauliOperator::label() const {
  PauliLabel k = 0;
  std::uint32_t rest = x | z;
  while (rest != 0) {
    const int q = std::countr_zero(rest);
    rest &= rest - 1;
    const int letter = letter_of_bits((x >> q) & 1u, (z >> q) & 1u);
    k |= static_cast<PauliLabel>(letter) << (2 * q);
  }
  return k;
}

PauliOperator pauli_multiply(const PauliOperator& a, const PauliOperator& b) {
  PauliOperator out;
  out.x = a.x ^ b.x;
  out.z = a.z ^ b.z;
  int phase = a.phase + b.phase;
  std::uint32_t both = (a.x | a.z) & (b.x | b.z);
  while (both != 0) {
    const int q = std::countr_zero(both);
    both &= both - 1;
    const int la = letter_of_bits((a.x >> q) & 1u, (a.z >> q) & 1u);
    const int lb = letter_of_bits((b.x >> q) & 1u, (b.z >> q) & 1u);
    phase += kProductPhase[la][lb];
  }
  out.phase = phase & 3;
  return out;
}

bool pauli_anticommute(const PauliOperator& a, const PauliOperator& b) {
  const int t = std::popcount(a.x & b.z) + std::popcount(a.z & b.x);
  return (t & 1) != 0;
}

std::complex<double> pauli_trace(const Eigen::MatrixXcd& rho, PauliLabel k, int n) {
  const auto d = static_cast<std::uint32_t>(rho.rows());
  PauliOperator op = PauliOperator::from_label(k, n);
  const std::complex<double> front = i_power(std::popcount(op.x & op.z));
  std::complex<double> acc = 0.0;
  // column c of P_k has its single entry at row c ^ xmask with
  // coefficient i^{#Y} * (-1)^{popcount(c & zmask)}
  for (std::uint32_t c = 0; c < d; ++c) {
    const double s = (std::popcount(c & op.z) & 1) ? -1.0 : 1.0;
    acc += s * rho(c, c ^ op.x);
  }
  return front * acc;
}

std::complex<double> pauli_expectation(const Eigen::VectorXcd& psi, PauliLabel k, int n) {
  const auto d = static_cast<std::uint32_t>(psi.size());
  PauliOperator op = PauliOperator::from_label(k, n);
  const std::complex<double> front = i_power(std::popcount(op.x & op.z));
  std::complex<double> acc = 0.0;
  for (std::uint32_t b = 0; b < d; ++b) {
    const double s = (std::popcount(b & op.z) & 1) ? -1.0 : 1.0;
    acc += s * std::conj(psi(b ^ op.x)) * psi(b);
  }
  return front * acc;
}

Eigen::VectorXcd apply_pauli(const PauliOperator& op, const Eigen::VectorXcd& in, int n) {
  (void)n;
  const auto d = static_cast<std::uint32_t>(in.size());
  const std::complex<double> front =
      i_power(op.phase + std::popcount(op.x & op.z));
  Eigen::VectorXcd out(in.size());
  for (std::uint32_t b = 0; b < d; ++b) {
    const double s = (std::popcount(b & op.z) & 1) ? -1.0 : 1.0;
    out(b ^ op.x) = front * s * in(b);
  }
  return out;
}

Eigen::MatrixXcd pauli_operator_matrix(const PauliOperator& op, int n) {
  Eigen::MatrixXcd m = pauli_matrix(op.label(), n);
  return i_power(op.phase) * m;
}

}  // namespace qrb
