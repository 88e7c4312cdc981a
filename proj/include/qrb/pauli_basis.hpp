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
#include <array>
#include <span>
#include <string>
#include <vector>

#include "qrb/pauli.hpp"
#include "qrb/rng.hpp"

namespace qrb {

/// Expansion coefficients chi(k) = Tr[W_k rho] of a state in the normalized
/// Pauli basis W_k = P_k / sqrt(d). All entries are real for hermitian rho;
/// an imaginary residue above 1e-10 is rejected rather than dropped.
struct ChiVector {
  int n = 0;
  Eigen::VectorXd values;  // length 4^n

  double purity() const { return values.squaredNorm(); }  // = Tr[rho^2]
};

ChiVector chi_vector(const Eigen::MatrixXcd& rho, int n);
ChiVector chi_vector_pure(const Eigen::VectorXcd& psi, int n);

/// Pr(k) = chi_id(k)^2 for a pure source state. Entries below the clamp
/// threshold are set to exactly zero so they can never be sampled; the
/// total must still be 1 within 1e-9 or the source was not pure.
struct SamplingDistribution {
  int n = 0;
  Eigen::VectorXd pr;        // length 4^n, clamped
  Eigen::VectorXd chi;       // the chi_id values the distribution came from
  std::vector<double> cdf;   // running sums of pr, for inverse-CDF draws
  std::string source_tag;

  std::size_t support_size() const;
};

inline constexpr double kPrClampThreshold = 1e-15;

SamplingDistribution sampling_distribution(const ChiVector& chi_id,
                                           std::string source_tag = {});

PauliLabel sample_operator_direct(const SamplingDistribution& dist, Rng& rng);

/// Importance-sum identity: sum over supported k of Pr(k) * X_k with
/// X_k = chi_act(k) / chi_id(k). Equals Tr[rho_id rho_act] up to clamping.
double overlap_importance_sum(const SamplingDistribution& dist,
                              const ChiVector& chi_act);

/// Draws Pauli labels from Pr(k) = chi_id(k)^2 one qubit letter at a time,
/// using exact conditional marginals, without touching all 4^n entries.
///
/// Level j holds the operator M = Tr_{qubits < j}[rho (P_prefix x I)]; the
/// joint mass of a prefix is (2^{n-j} / d) * Tr[M^2], and extending the
/// prefix by one letter is a single-qubit weighted partial trace of M. The
/// induced distribution over full words equals the direct Pr(k) exactly.
class ConditionalPauliSampler {
 public:
  ConditionalPauliSampler(const Eigen::VectorXcd& psi, int n);

  PauliLabel sample(Rng& rng) const;

  /// Joint masses Pr(prefix + letter) for the four letter extensions of a
  /// prefix over qubits [0, prefix.size()). Exposed so tests can enumerate
  /// the full branch tree.
  std::array<double, 4> prefix_extension_mass(std::span<const int> prefix) const;

  int num_qubits() const { return n_; }

 private:
  Eigen::MatrixXcd reduce(const Eigen::MatrixXcd& m, int letter) const;
  double mass_of(const Eigen::MatrixXcd& m) const;

  int n_;
  Eigen::MatrixXcd rho_;
};

PauliLabel sample_operator_conditional(const Eigen::VectorXcd& psi, int n, Rng& rng);

}  // namespace qrb
