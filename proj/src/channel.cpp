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

#include "qrb/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "qrb/pauli.hpp"

namespace qrb {

namespace {
constexpr double kTracePreservingTol = 1e-10;
}

QuantumChannel::QuantumChannel(std::vector<Eigen::MatrixXcd> kraus, std::string label)
    : kraus_(std::move(kraus)), label_(std::move(label)) {
  if (kraus_.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  const Eigen::Index d = kraus_.front().rows();
  if (kraus_.front().cols() != d) throw std::invalid_argument("Kraus operators must be square");
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument("Kraus operators must share one dimension");
    }
    sum += k.adjoint() * k;
  }
  if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > kTracePreservingTol) {
    throw std::invalid_argument("channel is not trace preserving");
  }
}

Eigen::MatrixXcd QuantumChannel::apply(const Eigen::MatrixXcd& rho) const {
  const Eigen::Index d = kraus_.front().rows();
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("channel/state dimension mismatch");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : kraus_) {
    out.noalias() += k * rho * k.adjoint();
  }
  return out;
}

QuantumChannel QuantumChannel::identity(int d, std::string label) {
  return QuantumChannel({Eigen::MatrixXcd::Identity(d, d)}, std::move(label));
}

QuantumChannel QuantumChannel::depolarizing(double p, int d, std::string label) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("depolarizing parameter must be in [0, 1]; got " +
                                std::to_string(p));
  }
  // p rho + (1-p)/d 1 = (p + (1-p)/d^2) rho + (1-p)/d^2 sum_{k>0} P_k rho P_k
  const int n = static_cast<int>(std::lround(std::log2(d)));
  if ((1 << n) != d) throw std::invalid_argument("dimension must be a power of two");
  const double dd = static_cast<double>(d);
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(num_pauli_labels(n));
  kraus.push_back(std::sqrt(p + (1.0 - p) / (dd * dd)) *
                  Eigen::MatrixXcd::Identity(d, d));
  const double w = std::sqrt((1.0 - p) / (dd * dd));
  for (std::size_t k = 1; k < num_pauli_labels(n); ++k) {
    kraus.push_back(w * pauli_matrix(static_cast<PauliLabel>(k), n));
  }
  return QuantumChannel(std::move(kraus), std::move(label));
}

QuantumChannel QuantumChannel::amplitude_damping(double gamma, std::string label) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("damping probability must be in [0, 1]");
  }
  Eigen::MatrixXcd k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return QuantumChannel({k0, k1}, std::move(label));
}

QuantumChannel QuantumChannel::from_unitary(const Eigen::MatrixXcd& u, std::string label) {
  return QuantumChannel({u}, std::move(label));
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.dim() != first.dim()) {
    throw std::invalid_argument("channel dimension mismatch in compose");
  }
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(second.kraus().size() * first.kraus().size());
  for (const auto& k2 : second.kraus()) {
    for (const auto& k1 : first.kraus()) {
      kraus.push_back(k2 * k1);
    }
  }
  return QuantumChannel(std::move(kraus), second.label() + "*" + first.label());
}

double average_gate_fidelity_exact(const QuantumChannel& lambda,
                                   const Eigen::MatrixXcd& target) {
  const int d = lambda.dim();
  if (target.rows() != d || target.cols() != d) {
    throw std::invalid_argument("channel/target dimension mismatch");
  }
  const int n = static_cast<int>(std::lround(std::log2(d)));
  const double dd = static_cast<double>(d);
  // F_e = d^-3 sum_k Tr[U P_k U† Lambda(P_k)]
  double fe = 0.0;
  for (std::size_t k = 0; k < num_pauli_labels(n); ++k) {
    const Eigen::MatrixXcd pk = pauli_matrix(static_cast<PauliLabel>(k), n);
    const Eigen::MatrixXcd ideal = target * pk * target.adjoint();
    fe += (ideal * lambda.apply(pk)).trace().real();
  }
  fe /= dd * dd * dd;
  return (dd * fe + 1.0) / (dd + 1.0);
}

double average_gate_infidelity_exact(const QuantumChannel& lambda,
                                     const Eigen::MatrixXcd& target) {
  return 1.0 - average_gate_fidelity_exact(lambda, target);
}

bool is_valid_density_matrix(const Eigen::MatrixXcd& rho, double tol) {
  if (rho.rows() != rho.cols()) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  return solver.eigenvalues().minCoeff() >= -tol;
}

}  // namespace qrb
