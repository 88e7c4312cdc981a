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

#include "qrb/protocols.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "qrb/parallel.hpp"

namespace qrb {

namespace {

// stream-path tags for rng derivation
constexpr std::uint64_t kArmRb = 1;
constexpr std::uint64_t kArmHybridRef = 2;
constexpr std::uint64_t kArmHybridInt = 3;

Eigen::VectorXcd ground_state(int n) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(1) << n);
  psi(0) = 1.0;
  return psi;
}

void finalize_record(LengthRecord& rec) {
  const auto m = static_cast<double>(rec.z_values.size());
  double mean = 0.0;
  for (double z : rec.z_values) mean += z;
  mean /= m;
  double var = 0.0;
  for (double z : rec.z_values) var += (z - mean) * (z - mean);
  rec.phi_mean = mean;
  rec.phi_stderr = rec.z_values.size() > 1 ? std::sqrt(var / (m - 1.0) / m) : 0.0;
}

std::vector<DecayPoint> to_points(const DecayDataset& ds) {
  std::vector<DecayPoint> pts;
  pts.reserve(ds.records.size());
  for (const LengthRecord& rec : ds.records) {
    pts.push_back({static_cast<double>(rec.y), rec.phi_mean});
  }
  return pts;
}

}  // namespace

double AlphaMcPolicy::alpha_for(int y) const {
  if (mode == Mode::Constant) return value;
  const double a = coefficient * eps_guess * static_cast<double>(y);
  return std::clamp(a, 1e-3, 0.3);
}

void ProtocolConfig::validate() const {
  if (q < 2) throw std::invalid_argument("q must be >= 2; got " + std::to_string(q));
  // m beyond 100 buys no accuracy at leading order in the gate errors
  if (m < 1 || m > 100) {
    throw std::invalid_argument("m must be in [1, 100]; got " + std::to_string(m));
  }
  if (!(alpha > 0.0) || alpha >= 1.0) {
    throw std::invalid_argument("alpha must be in (0, 1); got " + std::to_string(alpha));
  }
  if (!(delta > 0.0) || delta >= 1.0) {
    throw std::invalid_argument("delta must be in (0, 1); got " + std::to_string(delta));
  }
  if (lengths.size() != static_cast<std::size_t>(q)) {
    throw std::invalid_argument("lengths must hold exactly q entries");
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1 || (i > 0 && lengths[i] <= lengths[i - 1])) {
      throw std::invalid_argument("lengths must be strictly increasing positive integers");
    }
  }
  if (!exact_mode && rb_shots < 1) {
    throw std::invalid_argument("rb_shots must be >= 1 in shot mode");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (alpha_mc.mode == AlphaMcPolicy::Mode::Constant &&
      (!(alpha_mc.value > 0.0) || alpha_mc.value >= 1.0)) {
    throw std::invalid_argument("alpha_mc must be in (0, 1)");
  }
}

std::vector<int> choose_lengths(double eps_guess, int q) {
  if (!(eps_guess > 0.0)) throw std::invalid_argument("eps_guess must be positive");
  if (eps_guess > 0.5) {
    throw std::invalid_argument("eps_guess too large for a usable length spread (> 0.5)");
  }
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  const int y_min = std::max(1, static_cast<int>(std::lround(0.1 / eps_guess)));
  const int y_max =
      std::max(y_min + q - 1, static_cast<int>(std::lround(2.0 / eps_guess)));
  std::vector<int> lengths(static_cast<std::size_t>(q));
  const double ratio = static_cast<double>(y_max) / static_cast<double>(y_min);
  for (int i = 0; i < q; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(q - 1);
    lengths[static_cast<std::size_t>(i)] =
        static_cast<int>(std::lround(y_min * std::pow(ratio, f)));
  }
  for (int i = 1; i < q; ++i) {
    if (lengths[static_cast<std::size_t>(i)] <= lengths[static_cast<std::size_t>(i - 1)]) {
      lengths[static_cast<std::size_t>(i)] = lengths[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return lengths;
}

std::int64_t DecayDataset::total_shots() const {
  std::int64_t acc = 0;
  for (const LengthRecord& rec : records) acc += rec.shots;
  return acc;
}

double exact_sequence_fidelity(const SequenceSpec& seq, const NoiseModel& noise) {
  const Eigen::VectorXcd psi0 = ground_state(seq.n);
  const Eigen::VectorXcd psi_id = ideal_state(psi0, seq);
  Eigen::MatrixXcd rho_act = apply_sequence_noisy(psi0 * psi0.adjoint(), seq, noise);
  if (noise.measurement_error) rho_act = noise.measurement_error->apply(rho_act);
  const std::complex<double> overlap = psi_id.adjoint() * rho_act * psi_id;
  return overlap.real();
}

McEstimate estimate_sequence_fidelity_mc(const SequenceSpec& seq, const NoiseModel& noise,
                                         double alpha_mc, double delta, Rng& rng,
                                         bool exact_xk) {
  const int n = seq.n;
  const int d = 1 << n;
  const Eigen::VectorXcd psi0 = ground_state(n);
  const Eigen::VectorXcd psi_id = ideal_state(psi0, seq);
  const ChiVector chi_id = chi_vector_pure(psi_id, n);
  const SamplingDistribution dist = sampling_distribution(chi_id);

  Eigen::MatrixXcd rho_act = apply_sequence_noisy(psi0 * psi0.adjoint(), seq, noise);
  // every shot measures the same deterministic rho_act; pre-apply the
  // measurement channel once instead of per shot
  if (noise.measurement_error) rho_act = noise.measurement_error->apply(rho_act);
  const ChiVector chi_act = chi_vector(rho_act, n);

  const ShotBudget budget = ShotBudget::for_run(alpha_mc, delta, d);
  const std::int64_t L = budget.L;
  const auto n_labels = num_pauli_labels(n);
  std::vector<std::int64_t> shots_for(n_labels, 0);
  std::vector<double> x_exact(n_labels, 0.0);
  std::vector<double> p_plus(n_labels, 0.0);
  double expected_shots = 0.0;
  for (std::size_t k = 0; k < n_labels; ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    if (dist.pr(ki) <= 0.0) continue;
    shots_for[k] = budget.shots_for(dist.chi(ki));
    x_exact[k] = chi_act.values(ki) / dist.chi(ki);
    p_plus[k] = std::clamp(
        0.5 * (1.0 + chi_act.values(ki) * std::sqrt(static_cast<double>(d))), 0.0, 1.0);
    expected_shots += dist.pr(ki) * static_cast<double>(shots_for[k]);
  }
  expected_shots *= static_cast<double>(L);

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  McEstimate est;
  est.labels = L;
  est.expected_shots = expected_shots;
  double z_acc = 0.0;
  for (std::int64_t l = 0; l < L; ++l) {
    const PauliLabel k = sample_operator_direct(dist, rng);
    const std::int64_t n_k = shots_for[k];
    assert(n_k >= 1 && "sampled label must be supported");
    est.shots += n_k;
    if (exact_xk) {
      z_acc += x_exact[k];
      continue;
    }
    double shot_sum = 0.0;
    for (std::int64_t s = 0; s < n_k; ++s) {
      shot_sum += bernoulli(rng, p_plus[k]) ? inv_sqrt_d : -inv_sqrt_d;
    }
    z_acc += shot_sum / static_cast<double>(n_k) / dist.chi(static_cast<Eigen::Index>(k));
  }
  est.z = z_acc / static_cast<double>(L);
  return est;
}

namespace {

DecayDataset run_standard_rb_arm(const ProtocolConfig& cfg, const NoiseModel& noise,
                                 std::uint64_t arm_tag, const std::string& variant) {
  cfg.validate();
  noise.validate();
  const int n = static_cast<int>(std::lround(std::log2(noise.dim)));
  const Eigen::VectorXcd psi0 = ground_state(n);
  const Eigen::MatrixXcd rho0 = psi0 * psi0.adjoint();

  DecayDataset ds;
  ds.variant = variant;
  ds.n = n;
  ds.records.resize(cfg.lengths.size());
  for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
    ds.records[li].y = cfg.lengths[li];
    ds.records[li].z_values.resize(static_cast<std::size_t>(cfg.m));
  }
  std::vector<std::int64_t> shot_slots(cfg.lengths.size() * static_cast<std::size_t>(cfg.m), 0);

  parallel_for(cfg.lengths.size() * static_cast<std::size_t>(cfg.m), cfg.threads,
               [&](std::size_t task) {
                 const std::size_t li = task / static_cast<std::size_t>(cfg.m);
                 const std::size_t si = task % static_cast<std::size_t>(cfg.m);
                 Rng rng = make_stream(cfg.seed, {arm_tag, li, si});
                 const SequenceSpec seq = build_rb_sequence(n, cfg.lengths[li], rng);
                 const Eigen::MatrixXcd rho_act = apply_sequence_noisy(rho0, seq, noise);
                 const double p = survival_probability(rho_act, psi0, noise);
                 double z = p;
                 if (!cfg.exact_mode) {
                   std::int64_t hits = 0;
                   for (int s = 0; s < cfg.rb_shots; ++s) {
                     if (bernoulli(rng, p)) ++hits;
                   }
                   z = static_cast<double>(hits) / static_cast<double>(cfg.rb_shots);
                   shot_slots[task] = cfg.rb_shots;
                 }
                 ds.records[li].z_values[si] = z;
               });

  for (std::size_t li = 0; li < ds.records.size(); ++li) {
    for (std::size_t si = 0; si < static_cast<std::size_t>(cfg.m); ++si) {
      ds.records[li].shots += shot_slots[li * static_cast<std::size_t>(cfg.m) + si];
    }
    finalize_record(ds.records[li]);
  }
  return ds;
}

}  // namespace

DecayDataset run_standard_rb(const ProtocolConfig& cfg, const NoiseModel& noise) {
  return run_standard_rb_arm(cfg, noise, kArmRb, "rb");
}

HybridIrbResult run_hybrid_irb(const TargetGate& target, const ProtocolConfig& cfg,
                               const NoiseModel& noise) {
  cfg.validate();
  noise.validate();
  const int n = static_cast<int>(std::lround(std::log2(noise.dim)));
  if (target.matrix.rows() != noise.dim) {
    throw std::invalid_argument("target gate dimension mismatch");
  }

  HybridIrbResult result;
  // step 1: reference point from plain RB (physical inverting gate)
  result.reference = run_standard_rb_arm(cfg, noise, kArmHybridRef, "hybrid-irb-ref");

  // steps 3-7: interleaved sequences, no inverting gate, MC state sampling
  DecayDataset& ds = result.interleaved;
  ds.variant = "hybrid-irb-int";
  ds.n = n;
  ds.records.resize(cfg.lengths.size());
  for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
    ds.records[li].y = cfg.lengths[li];
    ds.records[li].z_values.resize(static_cast<std::size_t>(cfg.m));
  }
  const std::size_t tasks = cfg.lengths.size() * static_cast<std::size_t>(cfg.m);
  std::vector<McEstimate> estimates(tasks);

  parallel_for(tasks, cfg.threads, [&](std::size_t task) {
    const std::size_t li = task / static_cast<std::size_t>(cfg.m);
    const std::size_t si = task % static_cast<std::size_t>(cfg.m);
    Rng rng = make_stream(cfg.seed, {kArmHybridInt, li, si});
    const SequenceSpec seq = build_interleaved_sequence(n, cfg.lengths[li], target, rng);
    if (seq.has_inverting_gate()) {
      throw std::logic_error("interleaved arm must never carry an inverting gate");
    }
    estimates[task] = estimate_sequence_fidelity_mc(
        seq, noise, cfg.alpha_mc.alpha_for(cfg.lengths[li]), cfg.delta, rng,
        cfg.exact_mode);
  });

  for (std::size_t li = 0; li < ds.records.size(); ++li) {
    for (std::size_t si = 0; si < static_cast<std::size_t>(cfg.m); ++si) {
      const McEstimate& est = estimates[li * static_cast<std::size_t>(cfg.m) + si];
      ds.records[li].z_values[si] = est.z;
      ds.records[li].shots += est.shots;
      ds.records[li].expected_shots += est.expected_shots;
      ds.records[li].seq_shots.push_back(est.shots);
      ds.records[li].seq_expected_shots.push_back(est.expected_shots);
    }
    finalize_record(ds.records[li]);
  }

  // step 8: fit both arms; step 9: extract the error rate and its interval
  const auto ref_pts = to_points(result.reference);
  const auto int_pts = to_points(result.interleaved);
  result.fit_reference = fit_decay(ref_pts);
  result.fit_interleaved = fit_decay(int_pts);
  result.estimate =
      extract_error_rates(result.fit_reference, result.fit_interleaved, noise.dim);
  return result;
}

DirectMcResult direct_mc_average_fidelity(const QuantumChannel& noisy_gate,
                                          const Eigen::MatrixXcd& target, double alpha,
                                          double delta, Rng& rng, bool exact_xk,
                                          const NoiseModel* noise) {
  const int d = noisy_gate.dim();
  if (target.rows() != d || target.cols() != d) {
    throw std::invalid_argument("channel/target dimension mismatch");
  }
  const int n = static_cast<int>(std::lround(std::log2(d)));
  const double dd = static_cast<double>(d);
  const std::int64_t L = chebyshev_L(alpha, delta);
  const std::int64_t shots_per_label = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(
             8.0 / (static_cast<double>(L) * alpha * alpha) * std::log(4.0 / delta))));

  // cache all d^2 ideal output observables and exact X_k values up front
  const auto n_labels = num_pauli_labels(n);
  std::vector<Eigen::MatrixXcd> observables(n_labels);
  std::vector<double> x_exact(n_labels, 0.0);
  for (std::size_t k = 0; k < n_labels; ++k) {
    const Eigen::MatrixXcd pk = pauli_matrix(static_cast<PauliLabel>(k), n);
    observables[k] = target * pk * target.adjoint();
    // X_k = Tr[(U W_k U†) E(W_k)] with W normalized
    x_exact[k] = (observables[k] * noisy_gate.apply(pk)).trace().real() / dd;
  }

  DirectMcResult result;
  result.labels = L;
  result.shot_bound = expected_experiments_bound(alpha, delta, d, 1, 1);
  double z_acc = 0.0;
  for (std::int64_t l = 0; l < L; ++l) {
    const auto k = static_cast<PauliLabel>(uniform_uint(rng, n_labels));
    result.shots += shots_per_label;
    if (exact_xk) {
      z_acc += x_exact[k];
      continue;
    }
    double shot_sum = 0.0;
    for (std::int64_t s = 0; s < shots_per_label; ++s) {
      // random eigenstate of P_k: one eigenvector index per qubit
      Eigen::VectorXcd phi = Eigen::VectorXcd::Ones(1);
      double eigenvalue = 1.0;
      for (int q = 0; q < n; ++q) {
        const int letter = pauli_letter(k, q);
        const bool second = bernoulli(rng, 0.5);
        Eigen::Vector2cd base;
        double ev = 1.0;
        const std::complex<double> im(0.0, 1.0);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        switch (letter) {
          case 0: base = second ? Eigen::Vector2cd(0, 1) : Eigen::Vector2cd(1, 0); break;
          case 1:
            base = Eigen::Vector2cd(inv_sqrt2, second ? -inv_sqrt2 : inv_sqrt2);
            ev = second ? -1.0 : 1.0;
            break;
          case 2:
            base = Eigen::Vector2cd(inv_sqrt2, (second ? -im : im) * inv_sqrt2);
            ev = second ? -1.0 : 1.0;
            break;
          default:
            base = second ? Eigen::Vector2cd(0, 1) : Eigen::Vector2cd(1, 0);
            ev = second ? -1.0 : 1.0;
            break;
        }
        Eigen::VectorXcd next(phi.size() * 2);
        next.head(phi.size()) = base(0) * phi;
        next.tail(phi.size()) = base(1) * phi;
        phi = std::move(next);
        eigenvalue *= ev;
      }
      Eigen::MatrixXcd rho = phi * phi.adjoint();
      if (noise != nullptr && noise->preparation_error) {
        rho = noise->preparation_error->apply(rho);
      }
      rho = noisy_gate.apply(rho);
      if (noise != nullptr && noise->measurement_error) {
        rho = noise->measurement_error->apply(rho);
      }
      const double expectation = (observables[k] * rho).trace().real();
      const double p_plus = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
      const double outcome = bernoulli(rng, p_plus) ? 1.0 : -1.0;
      shot_sum += eigenvalue * outcome;
    }
    z_acc += shot_sum / static_cast<double>(shots_per_label);
  }
  result.entanglement_fidelity = z_acc / static_cast<double>(L);
  result.average_fidelity = (dd * result.entanglement_fidelity + 1.0) / (dd + 1.0);
  return result;
}

}  // namespace qrb
