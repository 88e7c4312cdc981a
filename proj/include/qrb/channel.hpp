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
#include <string>
#include <vector>

namespace qrb {

/// A CPTP map in Kraus form. Trace preservation (sum K†K = 1 within 1e-10)
/// is validated at construction. States are pushed through by explicit
/// Kraus sums; superoperator matrices are never materialized here.
class QuantumChannel {
 public:
  QuantumChannel(std::vector<Eigen::MatrixXcd> kraus, std::string label = {});

  int dim() const { return static_cast<int>(kraus_.front().rows()); }
  const std::vector<Eigen::MatrixXcd>& kraus() const { return kraus_; }
  const std::string& label() const { return label_; }

  /// Kraus sum applied to an arbitrary matrix (linear, so valid on any
  /// operator, not only density matrices).
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

  static QuantumChannel identity(int d, std::string label = "identity");

  /// rho -> p rho + (1 - p) Tr[rho] 1/d.
  static QuantumChannel depolarizing(double p, int d,
                                     std::string label = "depolarizing");

  /// Single-qubit amplitude damping with decay probability gamma.
  static QuantumChannel amplitude_damping(double gamma,
                                          std::string label = "amplitude-damping");

  static QuantumChannel from_unitary(const Eigen::MatrixXcd& u, std::string label = {});

 private:
  std::vector<Eigen::MatrixXcd> kraus_;
  std::string label_;
};

/// Channel acting as "first, then second".
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

/// Exact average gate fidelity of the noisy implementation `lambda` against
/// the target unitary, i.e. the Haar average of <psi|U† Lambda(psi)U|psi>,
/// via the entanglement-fidelity relation F_avg = (d F_e + 1) / (d + 1).
double average_gate_fidelity_exact(const QuantumChannel& lambda,
                                   const Eigen::MatrixXcd& target);

/// Average infidelity 1 - F_avg; the ground-truth error rate used by tests.
double average_gate_infidelity_exact(const QuantumChannel& lambda,
                                     const Eigen::MatrixXcd& target);

bool is_valid_density_matrix(const Eigen::MatrixXcd& rho, double tol = 1e-10);

}  // namespace qrb
