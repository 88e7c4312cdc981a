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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qrb/sequence.hpp"

using namespace qrb;

namespace {

Eigen::VectorXcd ground(int n) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(1) << n);
  psi(0) = 1.0;
  return psi;
}

}  // namespace

TEST_CASE("depolarizing channel endpoints and formula") {
  const QuantumChannel id_like = QuantumChannel::depolarizing(1.0, 2);
  const QuantumChannel erase = QuantumChannel::depolarizing(0.0, 4);
  Rng rng(1);
  const Eigen::MatrixXcd rho2 = testing::random_density_matrix(2, rng);
  CHECK((id_like.apply(rho2) - rho2).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXcd psi4 = testing::random_pure_state(4, rng);
  CHECK((erase.apply(psi4 * psi4.adjoint()) - 0.25 * Eigen::MatrixXcd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // p = 0.9, d = 2, |0><0|: Kraus application against the closed form
  const QuantumChannel dep = QuantumChannel::depolarizing(0.9, 2);
  const Eigen::MatrixXcd rho0 = ground(1) * ground(1).adjoint();
  const Eigen::MatrixXcd out = dep.apply(rho0);
  Eigen::MatrixXcd want = 0.9 * rho0 + 0.05 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK((out - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out(0, 0).real() == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(out(1, 1).real() == doctest::Approx(0.05).epsilon(1e-12));

  CHECK_THROWS_AS(QuantumChannel::depolarizing(1.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(QuantumChannel::depolarizing(-0.1, 2), std::invalid_argument);
}

TEST_CASE("channel construction validates trace preservation") {
  Eigen::MatrixXcd k(2, 2);
  k << 1, 0, 0, 0.9;  // sum K†K != 1
  CHECK_THROWS_AS(QuantumChannel({k}), std::invalid_argument);
}

TEST_CASE("random CPTP channels preserve state validity") {
  Rng rng(2);
  for (int n = 1; n <= 3; ++n) {
    const int d = 1 << n;
    for (int rep = 0; rep < 5; ++rep) {
      const QuantumChannel ch = testing::random_cptp_channel(d, 3, rng);
      const Eigen::MatrixXcd out = ch.apply(testing::random_density_matrix(d, rng));
      CHECK(std::abs(out.trace().real() - 1.0) < 1e-10);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(out);
      CHECK(solver.eigenvalues().minCoeff() > -1e-10);
      CHECK(is_valid_density_matrix(out));
    }
  }
}

TEST_CASE("average gate fidelity: closed forms") {
  CHECK(average_gate_fidelity_exact(QuantumChannel::identity(2),
                                    Eigen::MatrixXcd::Identity(2, 2)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double p = 0.7;
  CHECK(average_gate_fidelity_exact(QuantumChannel::depolarizing(p, 2),
                                    Eigen::MatrixXcd::Identity(2, 2)) ==
        doctest::Approx(p + (1.0 - p) / 2.0).epsilon(1e-12));
  CHECK(average_gate_fidelity_exact(QuantumChannel::depolarizing(0.99, 4),
                                    Eigen::MatrixXcd::Identity(4, 4)) ==
        doctest::Approx(0.9925).epsilon(1e-12));
  CHECK_THROWS_AS(average_gate_fidelity_exact(QuantumChannel::identity(2),
                                              Eigen::MatrixXcd::Identity(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("ideal state propagation") {
  SequenceSpec empty;
  empty.n = 1;
  const Eigen::VectorXcd psi0 = ground(1);
  CHECK((ideal_state(psi0, empty) - psi0).cwiseAbs().maxCoeff() == 0.0);

  SequenceSpec h_only;
  h_only.n = 1;
  h_only.y = 1;
  h_only.entries.push_back({GateKind::Clifford, CliffordElement::hadamard()});
  const Eigen::VectorXcd plus = ideal_state(psi0, h_only);
  CHECK(std::abs(plus(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(plus(1) - 1.0 / std::sqrt(2.0)) < 1e-12);

  Eigen::VectorXcd unnorm(2);
  unnorm << 1.0, 1.0;
  CHECK_THROWS_AS(ideal_state(unnorm, empty), std::invalid_argument);
}

TEST_CASE("ideal state matches the dense product oracle on a random n=2 sequence") {
  Rng rng(3);
  SequenceSpec seq;
  seq.n = 2;
  seq.y = 30;
  seq.interleaved = true;
  seq.target = TargetGate::from_matrix("rand", testing::random_unitary(4, rng));
  Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(4, 4);
  for (int j = 0; j < 15; ++j) {
    const CliffordElement c = random_clifford(2, rng);
    seq.entries.push_back({GateKind::Clifford, c});
    seq.entries.push_back({GateKind::Target, CliffordElement{}});
    product = seq.target->matrix * c.to_unitary() * product;
  }
  const Eigen::VectorXcd got = ideal_state(ground(2), seq);
  const Eigen::VectorXcd want = product * ground(2);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(got.norm() - 1.0) < 1e-9);
}

TEST_CASE("noiseless execution equals the ideal state") {
  Rng rng(4);
  const NoiseModel noiseless = NoiseModel::noiseless(4);
  SequenceSpec seq = build_rb_sequence(2, 12, rng);
  const Eigen::VectorXcd psi_id = ideal_state(ground(2), seq);
  const Eigen::MatrixXcd rho_act =
      apply_sequence_noisy(ground(2) * ground(2).adjoint(), seq, noiseless);
  CHECK((rho_act - psi_id * psi_id.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gate-independent depolarizing sequence reproduces the decay formula") {
  // sequence composed to the identity, y total gates each followed by
  // depolarizing(p): survival = (d-1)/d p^y + 1/d
  Rng rng(5);
  for (int n : {1, 2}) {
    const int d = 1 << n;
    const double p = 0.93;
    const NoiseModel noise = NoiseModel::depolarizing(d, p);
    const int y = 9;
    SequenceSpec seq = build_rb_sequence(n, y - 1, rng);  // y-1 random + inverse
    REQUIRE(static_cast<int>(seq.entries.size()) == y);
    const Eigen::MatrixXcd rho_act =
        apply_sequence_noisy(ground(n) * ground(n).adjoint(), seq, noise);
    const double survival = survival_probability(rho_act, ground(n), noise);
    const double want =
        (d - 1.0) / d * std::pow(p, y) + 1.0 / d;
    CHECK(survival == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("single gate with amplitude damping matches hand-applied Kraus") {
  const double gamma = 0.23;
  NoiseModel noise = NoiseModel::noiseless(2);
  noise.clifford_error =
      std::make_shared<QuantumChannel>(QuantumChannel::amplitude_damping(gamma));
  SequenceSpec seq;
  seq.n = 1;
  seq.y = 1;
  seq.entries.push_back({GateKind::Clifford, CliffordElement::hadamard()});
  const Eigen::MatrixXcd rho_act =
      apply_sequence_noisy(ground(1) * ground(1).adjoint(), seq, noise);

  Eigen::MatrixXcd h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  const Eigen::MatrixXcd mid = h * ground(1) * ground(1).adjoint() * h.adjoint();
  Eigen::MatrixXcd k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  const Eigen::MatrixXcd want = k0 * mid * k0.adjoint() + k1 * mid * k1.adjoint();
  CHECK((rho_act - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gate-dependent noise: an element-keyed override beats the default") {
  // only the Hadamard carries noise; a sequence of plain S gates stays pure
  NoiseModel noise = NoiseModel::noiseless(2);
  noise.overrides[CliffordElement::hadamard().key()] =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.5, 2));

  SequenceSpec s_only;
  s_only.n = 1;
  for (int i = 0; i < 4; ++i) {
    s_only.entries.push_back({GateKind::Clifford, CliffordElement::s_gate()});
  }
  const Eigen::MatrixXcd rho0 = ground(1) * ground(1).adjoint();
  const Eigen::MatrixXcd pure = apply_sequence_noisy(rho0, s_only, noise);
  CHECK((pure - rho0).cwiseAbs().maxCoeff() < 1e-12);  // S^4 = identity, no noise

  SequenceSpec with_h = s_only;
  with_h.entries.push_back({GateKind::Clifford, CliffordElement::hadamard()});
  with_h.entries.push_back({GateKind::Clifford, CliffordElement::hadamard()});
  const Eigen::MatrixXcd mixed = apply_sequence_noisy(rho0, with_h, noise);
  // two noisy Hadamards -> depolarized twice: p^2 rho + (1 - p^2)/2
  const Eigen::MatrixXcd want =
      0.25 * rho0 + 0.375 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK((mixed - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("composition order matters for non-commuting gates") {
  const NoiseModel noiseless = NoiseModel::noiseless(2);
  SequenceSpec hs;
  hs.n = 1;
  hs.entries.push_back({GateKind::Clifford, CliffordElement::hadamard()});
  hs.entries.push_back({GateKind::Clifford, CliffordElement::s_gate()});
  SequenceSpec sh;
  sh.n = 1;
  sh.entries.push_back({GateKind::Clifford, CliffordElement::s_gate()});
  sh.entries.push_back({GateKind::Clifford, CliffordElement::hadamard()});
  const Eigen::MatrixXcd rho0 = ground(1) * ground(1).adjoint();
  const Eigen::MatrixXcd a = apply_sequence_noisy(rho0, hs, noiseless);
  const Eigen::MatrixXcd b = apply_sequence_noisy(rho0, sh, noiseless);
  CHECK((a - b).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("the target error channel acts before the ideal target gate") {
  // with amplitude damping as Lambda_V the order is observable
  NoiseModel noise = NoiseModel::noiseless(2);
  noise.target_error =
      std::make_shared<QuantumChannel>(QuantumChannel::amplitude_damping(0.4));
  SequenceSpec seq;
  seq.n = 1;
  seq.target = TargetGate::hadamard();
  seq.entries.push_back({GateKind::Target, CliffordElement{}});
  Eigen::VectorXcd one(2);
  one << 0, 1;
  const Eigen::MatrixXcd out = apply_sequence_noisy(one * one.adjoint(), seq, noise);
  // damping first: |1><1| -> diag(0.4, 0.6), then H
  Eigen::MatrixXcd h = TargetGate::hadamard().matrix;
  Eigen::MatrixXcd damped = Eigen::MatrixXcd::Zero(2, 2);
  damped(0, 0) = 0.4;
  damped(1, 1) = 0.6;
  CHECK((out - h * damped * h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pauli_shot: eigenstate, mixed state, and unbiasedness") {
  const NoiseModel noiseless = NoiseModel::noiseless(2);
  const Eigen::MatrixXcd rho0 = ground(1) * ground(1).adjoint();
  Rng rng(6);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 200; ++i) {
    CHECK(pauli_shot(rho0, 3, noiseless, rng) == doctest::Approx(inv_sqrt2));  // Z on |0>
  }

  const Eigen::MatrixXcd mixed = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  double mean = 0.0;
  const int shots = 100000;
  for (int i = 0; i < shots; ++i) mean += pauli_shot(mixed, 1, noiseless, rng);
  mean /= shots;
  CHECK(std::abs(mean) < 0.01);

  // unbiasedness at the distribution level: the Bernoulli parameter equals
  // (1 + Tr[P rho]) / 2, so the shot mean equals chi(k) exactly
  Rng rng2(7);
  for (int n = 1; n <= 2; ++n) {
    const int d = 1 << n;
    const Eigen::MatrixXcd rho = testing::random_density_matrix(d, rng2);
    const ChiVector chi = chi_vector(rho, n);
    for (std::size_t k = 0; k < num_pauli_labels(n); ++k) {
      const double p_plus = pauli_shot_probability(rho, static_cast<PauliLabel>(k), noiseless);
      const double shot_mean = (2.0 * p_plus - 1.0) / std::sqrt(static_cast<double>(d));
      CHECK(shot_mean ==
            doctest::Approx(chi.values(static_cast<Eigen::Index>(k))).epsilon(1e-10));
    }
  }
}

TEST_CASE("pauli_shot empirical mean tracks chi_act of a noisy sequence") {
  Rng rng(8);
  const NoiseModel noise = NoiseModel::depolarizing(2, 0.9);
  SequenceSpec seq = build_rb_sequence(1, 6, rng);
  const Eigen::MatrixXcd rho_act =
      apply_sequence_noisy(ground(1) * ground(1).adjoint(), seq, noise);
  const ChiVector chi = chi_vector(rho_act, 1);
  const PauliLabel k = 3;
  const int shots = 100000;
  double mean = 0.0;
  for (int i = 0; i < shots; ++i) mean += pauli_shot(rho_act, k, noise, rng);
  mean /= shots;
  const double sigma = std::sqrt((0.5 - chi.values(3) * chi.values(3)) / shots);
  CHECK(std::abs(mean - chi.values(3)) < 3.0 * sigma);
  CHECK_THROWS_AS(pauli_shot(rho_act, 4, noise, rng), std::invalid_argument);
}

TEST_CASE("measurement channel is applied before the shot") {
  NoiseModel noise = NoiseModel::noiseless(2);
  noise.measurement_error =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.5, 2));
  const Eigen::MatrixXcd rho0 = ground(1) * ground(1).adjoint();
  // Z expectation shrinks from 1 to 0.5
  CHECK(pauli_shot_probability(rho0, 3, noise) == doctest::Approx(0.75).epsilon(1e-12));
}
