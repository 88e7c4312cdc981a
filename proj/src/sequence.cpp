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

#include "qrb/sequence.hpp"

#include <cmath>
#include <stdexcept>

namespace qrb {

TargetGate TargetGate::t_gate() {
  Eigen::MatrixXcd u(2, 2);
  u << 1, 0, 0, std::exp(std::complex<double>(0.0, M_PI / 4.0));
  return {"t", u};
}

TargetGate TargetGate::hadamard() {
  Eigen::MatrixXcd u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << s, s, s, -s;
  return {"h", u};
}

TargetGate TargetGate::s_gate() {
  Eigen::MatrixXcd u(2, 2);
  u << 1, 0, 0, std::complex<double>(0.0, 1.0);
  return {"s", u};
}

TargetGate TargetGate::cnot() {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  // control qubit 0 (least significant bit), target qubit 1
  u(0, 0) = 1;
  u(3, 1) = 1;
  u(2, 2) = 1;
  u(1, 3) = 1;
  return {"cnot", u};
}

TargetGate TargetGate::from_matrix(std::string name, Eigen::MatrixXcd u) {
  const Eigen::Index d = u.rows();
  if (u.cols() != d ||
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("target gate matrix is not unitary");
  }
  return {std::move(name), std::move(u)};
}

bool SequenceSpec::has_inverting_gate() const {
  for (const auto& e : entries) {
    if (e.kind == GateKind::InvertingClifford) return true;
  }
  return false;
}

void SequenceSpec::validate() const {
  const auto d = static_cast<Eigen::Index>(1) << n;
  for (const auto& e : entries) {
    if (e.kind == GateKind::Target) {
      if (!target.has_value() || target->matrix.rows() != d) {
        throw std::invalid_argument("sequence target gate missing or wrong dimension");
      }
    } else if (e.clifford.num_qubits() != n) {
      throw std::invalid_argument("sequence clifford dimension mismatch");
    }
  }
}

SequenceSpec build_rb_sequence(int n, int y, Rng& rng) {
  SequenceSpec seq;
  seq.n = n;
  seq.y = y;
  seq.interleaved = false;
  std::vector<CliffordElement> cliffords;
  cliffords.reserve(static_cast<std::size_t>(y));
  for (int j = 0; j < y; ++j) {
    cliffords.push_back(random_clifford(n, rng));
    seq.entries.push_back({GateKind::Clifford, cliffords.back()});
  }
  if (y > 0) {
    seq.entries.push_back({GateKind::InvertingClifford, inverting_gate(cliffords)});
  }
  return seq;
}

SequenceSpec build_interleaved_sequence(int n, int y, const TargetGate& target, Rng& rng) {
  SequenceSpec seq;
  seq.n = n;
  seq.y = y;
  seq.interleaved = true;
  seq.target = target;
  for (int j = 0; j < y; ++j) {
    seq.entries.push_back({GateKind::Clifford, random_clifford(n, rng)});
    seq.entries.push_back({GateKind::Target, CliffordElement{}});
  }
  return seq;
}

Eigen::VectorXcd ideal_state(const Eigen::VectorXcd& psi0, const SequenceSpec& seq) {
  if (std::abs(psi0.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("initial state is not normalized");
  }
  seq.validate();
  Eigen::VectorXcd psi = psi0;
  for (const auto& e : seq.entries) {
    if (e.kind == GateKind::Target) {
      psi = seq.target->matrix * psi;
    } else {
      psi = e.clifford.to_unitary() * psi;
    }
  }
  return psi;
}

Eigen::MatrixXcd apply_sequence_noisy(const Eigen::MatrixXcd& rho0,
                                      const SequenceSpec& seq,
                                      const NoiseModel& noise) {
  seq.validate();
  noise.validate();
  if (rho0.rows() != noise.dim) {
    throw std::invalid_argument("state/noise dimension mismatch");
  }
  Eigen::MatrixXcd rho = rho0;
  if (noise.preparation_error) rho = noise.preparation_error->apply(rho);
  for (const auto& e : seq.entries) {
    if (e.kind == GateKind::Target) {
      // target error acts before the ideal gate
      if (noise.target_error) rho = noise.target_error->apply(rho);
      rho = seq.target->matrix * rho * seq.target->matrix.adjoint();
    } else {
      const Eigen::MatrixXcd u = e.clifford.to_unitary();
      rho = u * rho * u.adjoint();
      // most specific channel wins: this element, then its class, then the
      // model default
      const QuantumChannel* ch = nullptr;
      if (auto it = noise.overrides.find(e.clifford.key()); it != noise.overrides.end()) {
        ch = it->second.get();
      } else {
        const char* label = e.kind == GateKind::InvertingClifford ? "inverse" : "clifford";
        ch = noise.clifford_channel(label);
      }
      if (ch != nullptr) rho = ch->apply(rho);
    }
  }
  return rho;
}

double pauli_shot_probability(const Eigen::MatrixXcd& rho, PauliLabel k,
                              const NoiseModel& noise) {
  const int n = static_cast<int>(std::lround(std::log2(rho.rows())));
  if (k >= num_pauli_labels(n)) throw std::invalid_argument("pauli label out of range");
  Eigen::MatrixXcd state = rho;
  if (noise.measurement_error) state = noise.measurement_error->apply(state);
  const double expectation = pauli_trace(state, k, n).real();
  return std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
}

double pauli_shot(const Eigen::MatrixXcd& rho, PauliLabel k, const NoiseModel& noise,
                  Rng& rng) {
  const double p_plus = pauli_shot_probability(rho, k, noise);
  const double d = static_cast<double>(rho.rows());
  const double s = bernoulli(rng, p_plus) ? 1.0 : -1.0;
  return s / std::sqrt(d);
}

double survival_probability(const Eigen::MatrixXcd& rho_act,
                            const Eigen::VectorXcd& psi0, const NoiseModel& noise) {
  Eigen::MatrixXcd state = rho_act;
  if (noise.measurement_error) state = noise.measurement_error->apply(state);
  const std::complex<double> p = psi0.adjoint() * state * psi0;
  return p.real();
}

}  // namespace qrb
