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
#include <optional>
#include <string>
#include <vector>

#include "qrb/clifford.hpp"
#include "qrb/noise_model.hpp"
#include "qrb/pauli_basis.hpp"
#include "qrb/rng.hpp"

namespace qrb {

/// The fixed gate interleaved into a benchmarking sequence; any unitary,
/// Clifford or not.
struct TargetGate {
  std::string name;
  Eigen::MatrixXcd matrix;

  static TargetGate t_gate();         // pi/8 gate diag(1, e^{i pi/4})
  static TargetGate hadamard();
  static TargetGate s_gate();
  static TargetGate cnot();
  static TargetGate from_matrix(std::string name, Eigen::MatrixXcd u);
};

enum class GateKind { Clifford, Target, InvertingClifford };

struct SequenceEntry {
  GateKind kind = GateKind::Clifford;
  CliffordElement clifford;  // unused for Target entries
};

/// One benchmarking experiment: an ordered gate list applied left to right
/// (entries[0] acts on the state first).
///
/// Noisy execution attaches error channels per entry: Clifford-kind entries
/// get their error after the ideal gate, the interleaved target gets its
/// error before it. Interleaved sequences are C_1 V C_2 V ... C_y V with no
/// inverting gate; plain RB sequences end in one InvertingClifford entry.
struct SequenceSpec {
  int n = 1;
  int y = 0;
  bool interleaved = false;
  std::vector<SequenceEntry> entries;
  std::optional<TargetGate> target;

  bool has_inverting_gate() const;
  void validate() const;
};

/// y random Cliffords followed by the sequence inverse (y + 1 gates total).
SequenceSpec build_rb_sequence(int n, int y, Rng& rng);

/// y random Cliffords, each followed by the target gate; no inverse.
SequenceSpec build_interleaved_sequence(int n, int y, const TargetGate& target, Rng& rng);

/// Propagates a normalized state vector through the ideal gate unitaries;
/// O(y d^2).
Eigen::VectorXcd ideal_state(const Eigen::VectorXcd& psi0, const SequenceSpec& seq);

/// Full density-matrix execution with error channels (and the preparation
/// channel, when the noise model has one). Gates apply in entry order.
Eigen::MatrixXcd apply_sequence_noisy(const Eigen::MatrixXcd& rho0,
                                      const SequenceSpec& seq,
                                      const NoiseModel& noise);

/// Single-shot measurement of W_k = P_k / sqrt(d): draws s in {+1, -1} with
/// Pr(s = +1) = (1 + Tr[P_k rho']) / 2, rho' being rho after the measurement
/// error channel, and returns s / sqrt(d). The shot mean equals chi(k) of rho'.
double pauli_shot(const Eigen::MatrixXcd& rho, PauliLabel k, const NoiseModel& noise,
                  Rng& rng);

/// The exact Bernoulli parameter behind pauli_shot, for distribution-level
/// checks: Pr(s = +1).
double pauli_shot_probability(const Eigen::MatrixXcd& rho, PauliLabel k,
                              const NoiseModel& noise);

/// Survival probability Tr[|psi0><psi0| rho'] with the measurement channel
/// applied; the standard-RB observable.
double survival_probability(const Eigen::MatrixXcd& rho_act,
                            const Eigen::VectorXcd& psi0, const NoiseModel& noise);

}  // namespace qrb
