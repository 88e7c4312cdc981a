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

#include <cstdint>
#include <string>
#include <vector>

#include "qrb/noise_model.hpp"
#include "qrb/sequence.hpp"
#include "qrb/statistics.hpp"

namespace qrb {

/// Per-sequence-length inaccuracy budget for the Monte Carlo estimates.
/// Constant mode uses one value (default 10^-1.5, the protocol floor);
/// linear mode scales with eps_guess * y, clamped to a sane range.
struct AlphaMcPolicy {
  enum class Mode { Constant, LinearInY };
  Mode mode = Mode::Constant;
  double value = 0.03162277660168379;  // 10^-1.5
  double coefficient = 0.03162277660168379;
  double eps_guess = 1e-3;

  double alpha_for(int y) const;
};

struct ProtocolConfig {
  int q = 2;
  std::vector<int> lengths;  // strictly increasing
  int m = 1;
  double alpha = 1e-4;  // overall inaccuracy budget (reporting / direct MC)
  double delta = 0.05;
  AlphaMcPolicy alpha_mc;
  std::uint64_t seed = 0;
  bool exact_mode = false;
  int rb_shots = 10000;  // survival shots per RB sequence when not exact
  int threads = 1;

  void validate() const;
};

/// q strictly increasing lengths, geometrically spaced over roughly
/// [0.1 / eps_guess, 2 / eps_guess] so the decay is well resolved.
std::vector<int> choose_lengths(double eps_guess, int q);

struct LengthRecord {
  int y = 0;
  double phi_mean = 0.0;
  double phi_stderr = 0.0;
  std::vector<double> z_values;     // one per sequence
  std::int64_t shots = 0;           // simulated shots, summed over sequences
  double expected_shots = 0.0;      // exact E[shots] over operator draws
  // per-sequence accounting, index-aligned with z_values (MC arms only)
  std::vector<std::int64_t> seq_shots;
  std::vector<double> seq_expected_shots;
};

struct DecayDataset {
  std::string variant;  // "rb" | "hybrid-irb-ref" | "hybrid-irb-int"
  int n = 1;
  std::vector<LengthRecord> records;

  std::int64_t total_shots() const;
};

/// Monte Carlo estimate of one sequence fidelity Phi_y = Tr[rho_id rho_act]:
/// draws L = chebyshev_L(alpha_mc, delta) operators from Pr(k), takes
/// N_l = hoeffding_shots(...) single-shot measurements per draw (fresh
/// noisy executions; the channels are deterministic maps, so rho_act is
/// computed once and every shot is an independent Bernoulli from it), and
/// averages X_k = chi_act(k) / chi_id(k).
///
/// exact_xk replaces the shot estimate of each X_k by its exact value;
/// operator sampling and shot accounting are unchanged.
struct McEstimate {
  double z = 0.0;
  std::int64_t shots = 0;
  double expected_shots = 0.0;
  std::int64_t labels = 0;
};

McEstimate estimate_sequence_fidelity_mc(const SequenceSpec& seq, const NoiseModel& noise,
                                         double alpha_mc, double delta, Rng& rng,
                                         bool exact_xk = false);

/// Exact sequence fidelity (no sampling at all); oracle for the estimator.
double exact_sequence_fidelity(const SequenceSpec& seq, const NoiseModel& noise);

/// Standard randomized benchmarking: per length, m random Clifford
/// sequences closed by their inverting gate (which carries its own error
/// channel), survival probability of |0...0> measured exactly or with
/// rb_shots single shots.
DecayDataset run_standard_rb(const ProtocolConfig& cfg, const NoiseModel& noise);

struct HybridIrbResult {
  DecayDataset reference;
  DecayDataset interleaved;
  DecayFit fit_reference;
  DecayFit fit_interleaved;
  FidelityEstimate estimate;
};

/// Hybrid interleaved RB with Monte Carlo state sampling: a standard RB
/// reference arm, an interleaved arm whose sequences carry no inverting
/// gate (their fidelities are estimated by estimate_sequence_fidelity_mc),
/// decay fits of both arms, and the extracted error rate of the target
/// gate with its interval.
HybridIrbResult run_hybrid_irb(const TargetGate& target, const ProtocolConfig& cfg,
                               const NoiseModel& noise);

struct DirectMcResult {
  double average_fidelity = 0.0;
  double entanglement_fidelity = 0.0;
  std::int64_t shots = 0;
  std::int64_t labels = 0;
  double shot_bound = 0.0;  // 1 + 8/(a^2 d) + (8 d/a^2) log(4/d)
};

/// Direct Monte Carlo estimation of the average gate fidelity of a noisy
/// implementation against its target: input Pauli words sampled uniformly,
/// each probed by preparing a random eigenstate of P_k and measuring the
/// ideal output observable U P_k U† (single +-1 shots). SPAM channels from
/// `noise`, when present, afflict preparation and measurement; this is the
/// SPAM-sensitive baseline.
DirectMcResult direct_mc_average_fidelity(const QuantumChannel& noisy_gate,
                                          const Eigen::MatrixXcd& target, double alpha,
                                          double delta, Rng& rng, bool exact_xk = false,
                                          const NoiseModel* noise = nullptr);

}  // namespace qrb
