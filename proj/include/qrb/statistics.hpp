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
#include <stdexcept>
#include <vector>

namespace qrb {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- shot budgeting --------------------------------------------------------

/// Number of Pauli measurement operators per sequence, L = ceil(8 / (a^2 d)).
/// Chebyshev's inequality then bounds the operator-sampling error by a/2
/// with failure probability d/2.
std::int64_t chebyshev_L(double alpha, double delta);

/// Shots for one sampled operator,
/// N_l = ceil(8 / (d L a^2 chi_id(k)^2) * log(4 / d)); always >= 1.
std::int64_t hoeffding_shots(double chi_id_k, int d, std::int64_t L, double alpha,
                             double delta);

/// q m (1 + 8/(a^2 d) + (8 d_dim / a^2) log(4/d)): the expected-experiments
/// bound for a full benchmarking run (q = 1, m = 1 gives the per-sequence
/// bound).
double expected_experiments_bound(double alpha, double delta, int d, int q, int m);

/// The per-sequence sampling budget: operator count L plus the per-label
/// shot rule. N_l >= 1 always; L = ceil(8 / (alpha^2 delta)) exactly.
struct ShotBudget {
  std::int64_t L = 0;
  double alpha = 0.0;
  double delta = 0.0;
  int d = 2;

  static ShotBudget for_run(double alpha, double delta, int d) {
    return {chebyshev_L(alpha, delta), alpha, delta, d};
  }
  std::int64_t shots_for(double chi_id_k) const {
    return hoeffding_shots(chi_id_k, d, L, alpha, delta);
  }
};

// ---- resource model --------------------------------------------------------

/// Classical/experimental cost comparison between the hybrid protocol and
/// direct Monte Carlo fidelity sampling, with unit constants.
///
/// hybrid:  N_class = (q m / alpha_mc^2) (d^2 / eps + n^2 d^2)
/// direct:  N_class = (1 / alpha^2) n^2 d^4, with the direct-sampling
///          inaccuracy tied to the error-rate target as alpha = eps / 10.
struct ResourceEstimate {
  double n_class_hybrid = 0.0;
  double n_class_direct = 0.0;
  double classical_ratio = 0.0;     // hybrid / direct
  double experiment_ratio = 0.0;    // q m alpha^2 / alpha_mc^2
  double alpha_direct = 0.0;
};

ResourceEstimate classical_cost_estimate(int q, int m, double alpha_mc, double eps, int n);

// ---- decay fitting ---------------------------------------------------------

struct DecayPoint {
  double y = 0.0;
  double phi = 0.0;
};

/// Fitted multi-exponential decay Phi(y) = sum_i a_i lambda_i^y with
/// lambda_i in [-1, 1]. Constant offsets appear as a lambda = 1 component.
struct DecayFit {
  Eigen::VectorXd amplitudes;
  Eigen::VectorXd lambdas;  // sorted descending
  int r = 0;
  double residual_norm = 0.0;

  double evaluate(double y) const;

  /// The decay parameter of interest: the largest-amplitude component with
  /// lambda < 1 (1.0 if the fit is purely constant).
  double dominant_decay() const;
  double dominant_amplitude() const;
  /// Combined amplitude of (near-)constant components.
  double offset_amplitude() const;
};

/// Least-squares fit over r = 1..r_max exponentials; multi-start
/// Levenberg-Marquardt with lambda seeds on a log-spaced grid in [0.5, 1],
/// amplitudes solved linearly per start. A model size r needs at least
/// 2r + 1 points (one spare degree of freedom). Model size is selected by
/// a nested-model ladder: r steps up only while the residual improvement
/// is significant under an F-test at 95%.
DecayFit fit_decay(std::span<const DecayPoint> data, int r_max = 3);

// ---- error-rate extraction -------------------------------------------------

struct FidelityEstimate {
  double eps_point = 0.0;
  double eps_lower = 0.0;
  double eps_upper = 0.0;
  double eps_reference = 0.0;    // eps_C
  double eps_interleaved = 0.0;  // eps_{C x V}
};

/// Per-arm combined error from the fitted model, eps = 1 - Phi(1)/Phi(0)
/// (the ratio is the effective average fidelity of one sequence step), then
/// eps_V = eps_int - eps_ref clamped at 0, with the interval
/// [max(0, sqrt(eps_int) - sqrt(eps_ref))^2, (sqrt(eps_int) + sqrt(eps_ref))^2].
FidelityEstimate extract_error_rates(const DecayFit& fit_reference,
                                     const DecayFit& fit_interleaved, int d);

}  // namespace qrb
