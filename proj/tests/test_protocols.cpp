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
#include "qrb/protocols.hpp"

using namespace qrb;

namespace {

ProtocolConfig small_config(double eps_guess, int q, int m, std::uint64_t seed) {
  ProtocolConfig cfg;
  cfg.q = q;
  cfg.m = m;
  cfg.lengths = choose_lengths(eps_guess, q);
  cfg.alpha_mc.eps_guess = eps_guess;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("choose_lengths spans the expected windows") {
  const auto paper = choose_lengths(1e-3, 20);
  REQUIRE(paper.size() == 20);
  CHECK(paper.front() >= 100);
  CHECK(paper.back() <= 2000);
  CHECK(paper.front() == 100);
  CHECK(paper.back() == 2000);

  const auto coarse = choose_lengths(0.05, 4);
  REQUIRE(coarse.size() == 4);
  CHECK(coarse.front() >= 2);
  CHECK(coarse.back() <= 40);

  const auto two = choose_lengths(0.01, 2);
  REQUIRE(two.size() == 2);
  CHECK(two.front() >= 10);

  for (const auto& lengths : {paper, coarse, two}) {
    for (std::size_t i = 1; i < lengths.size(); ++i) {
      CHECK(lengths[i] > lengths[i - 1]);
    }
  }

  CHECK_THROWS_AS(choose_lengths(0.6, 4), std::invalid_argument);
  CHECK_THROWS_AS(choose_lengths(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(choose_lengths(0.01, 1), std::invalid_argument);
}

TEST_CASE("protocol config validation names the offending field") {
  ProtocolConfig cfg = small_config(0.01, 3, 2, 1);
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 0.0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha"), std::invalid_argument);
  cfg = small_config(0.01, 3, 2, 1);
  cfg.lengths[1] = cfg.lengths[0];
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("lengths"), std::invalid_argument);
  cfg = small_config(0.01, 3, 2, 1);
  cfg.q = 1;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("q"), std::invalid_argument);
  cfg = small_config(0.01, 3, 2, 1);
  cfg.m = 101;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("m"), std::invalid_argument);
}

TEST_CASE("noiseless sequence fidelity estimate is exactly 1") {
  Rng rng(40);
  const NoiseModel noiseless = NoiseModel::noiseless(2);
  const SequenceSpec seq = build_interleaved_sequence(1, 8, TargetGate::t_gate(), rng);
  for (bool exact : {true, false}) {
    Rng est_rng(41);
    const McEstimate est =
        estimate_sequence_fidelity_mc(seq, noiseless, 0.2, 0.1, est_rng, exact);
    if (exact) {
      CHECK(est.z == 1.0);  // every X_k is exactly 1
    } else {
      CHECK(std::abs(est.z - 1.0) < 0.2);  // shot noise within alpha_mc
    }
    CHECK(est.shots >= est.labels);
  }
}

TEST_CASE("exact sequence fidelity equals the importance-sum oracle") {
  Rng rng(42);
  const NoiseModel noise = NoiseModel::depolarizing(2, 0.97, 0.95);
  const SequenceSpec seq = build_interleaved_sequence(1, 7, TargetGate::t_gate(), rng);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2);
  psi0(0) = 1.0;
  const Eigen::VectorXcd psi_id = ideal_state(psi0, seq);
  const Eigen::MatrixXcd rho_act =
      apply_sequence_noisy(psi0 * psi0.adjoint(), seq, noise);
  const SamplingDistribution dist = sampling_distribution(chi_vector_pure(psi_id, 1));
  const double via_sum = overlap_importance_sum(dist, chi_vector(rho_act, 1));
  const double exact = exact_sequence_fidelity(seq, noise);
  CHECK(std::abs(via_sum - exact) < 1e-12);
}

TEST_CASE("MC estimator guarantee over 200 repetitions (full shots)") {
  Rng seq_rng(43);
  const NoiseModel noise = NoiseModel::depolarizing(2, 0.99);
  const SequenceSpec seq = build_interleaved_sequence(1, 10, TargetGate::t_gate(), seq_rng);
  const double exact = exact_sequence_fidelity(seq, noise);
  const double alpha_mc = 0.05, delta = 0.05;
  const int reps = 200;
  double mean = 0.0;
  int misses = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng = make_stream(44, {static_cast<std::uint64_t>(rep)});
    const McEstimate est = estimate_sequence_fidelity_mc(seq, noise, alpha_mc, delta, rng);
    mean += est.z;
    if (std::abs(est.z - exact) > alpha_mc) ++misses;
  }
  mean /= reps;
  CHECK(std::abs(mean - exact) <= 0.01);
  CHECK(misses <= static_cast<int>(delta * reps));
}

TEST_CASE("Chebyshev guarantee and variance bound with exact X_k (n=2)") {
  Rng seq_rng(45);
  const NoiseModel noise = NoiseModel::depolarizing(4, 0.985, 0.99);
  TargetGate v{"rand2q", testing::random_unitary(4, seq_rng)};
  const SequenceSpec seq = build_interleaved_sequence(2, 10, v, seq_rng);
  const double exact = exact_sequence_fidelity(seq, noise);
  const double alpha = 0.1, delta = 0.1;
  const std::int64_t L = chebyshev_L(alpha, delta);
  const int reps = 500;
  std::vector<double> zs(reps);
  int misses = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng = make_stream(46, {static_cast<std::uint64_t>(rep)});
    const McEstimate est =
        estimate_sequence_fidelity_mc(seq, noise, alpha, delta, rng, /*exact_xk=*/true);
    CHECK(est.labels == L);
    zs[static_cast<std::size_t>(rep)] = est.z;
    if (std::abs(est.z - exact) >= alpha / 2.0) ++misses;
  }
  CHECK(misses <= static_cast<int>(delta * reps));

  double mean = 0.0;
  for (double z : zs) mean += z;
  mean /= reps;
  double var = 0.0;
  for (double z : zs) var += (z - mean) * (z - mean);
  var /= (reps - 1);
  // sigma_Z^2 <= 1/L for exact X_k, plus estimation slack for the
  // empirical variance of `reps` samples
  const double bound = (1.0 + 3.0 * std::sqrt(2.0 / (reps - 1.0))) / static_cast<double>(L);
  CHECK(var <= bound);
}

TEST_CASE("standard RB: noiseless data is flat at 1") {
  ProtocolConfig cfg = small_config(0.05, 3, 4, 7);
  cfg.exact_mode = true;
  const DecayDataset ds = run_standard_rb(cfg, NoiseModel::noiseless(2));
  REQUIRE(ds.records.size() == 3);
  for (const LengthRecord& rec : ds.records) {
    CHECK(rec.phi_mean == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rec.phi_stderr < 1e-10);
  }
}

TEST_CASE("standard RB recovers the depolarizing decay and shrugs off SPAM") {
  ProtocolConfig cfg = small_config(0.02, 6, 5, 11);
  cfg.exact_mode = true;
  const double p = 0.98;

  const NoiseModel plain = NoiseModel::depolarizing(2, p);
  const DecayDataset ds = run_standard_rb(cfg, plain);
  std::vector<DecayPoint> pts;
  for (const auto& rec : ds.records) {
    pts.push_back({static_cast<double>(rec.y), rec.phi_mean});
    CHECK(rec.phi_mean ==
          doctest::Approx(0.5 * std::pow(p, rec.y + 1) + 0.5).epsilon(1e-10));
  }
  const DecayFit fit = fit_decay(pts);
  CHECK(std::abs(fit.dominant_decay() - p) < 1e-6);

  NoiseModel spam = NoiseModel::depolarizing(2, p);
  spam.preparation_error =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.95, 2));
  spam.measurement_error =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.95, 2));
  const DecayDataset ds_spam = run_standard_rb(cfg, spam);
  std::vector<DecayPoint> pts_spam;
  for (const auto& rec : ds_spam.records) {
    pts_spam.push_back({static_cast<double>(rec.y), rec.phi_mean});
  }
  const DecayFit fit_spam = fit_decay(pts_spam);
  CHECK(std::abs(fit_spam.dominant_decay() - fit.dominant_decay()) < 1e-3);
  // amplitudes move, the decay does not
  CHECK(std::abs(fit_spam.dominant_amplitude() - fit.dominant_amplitude()) > 1e-2);
}

TEST_CASE("standard RB under gate-dependent depolarizing noise") {
  // each of the 24 single-qubit Cliffords gets its own depolarizing rate;
  // for iid sequence draws the expected survival is exactly
  // (d-1)/d * p_inv * mean(p)^y + 1/d, so the fitted decay is mean(p)
  NoiseModel noise = NoiseModel::noiseless(2);
  double p_sum = 0.0;
  for (std::uint64_t i = 0; i < 24; ++i) {
    const double p_i = 0.97 + 0.02 * static_cast<double>(i) / 23.0;
    p_sum += p_i;
    noise.overrides[CliffordElement::from_index(i, 1).key()] =
        std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(p_i, 2));
  }
  const double p_mean = p_sum / 24.0;
  noise.overrides["inverse"] =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.99, 2));

  ProtocolConfig cfg = small_config(0.02, 6, 100, 83);
  cfg.exact_mode = true;
  cfg.threads = 2;
  const DecayDataset ds = run_standard_rb(cfg, noise);
  std::vector<DecayPoint> pts;
  for (const auto& rec : ds.records) {
    pts.push_back({static_cast<double>(rec.y), rec.phi_mean});
  }
  const DecayFit fit = fit_decay(pts);
  CHECK(std::abs(fit.dominant_decay() - p_mean) < 1e-3);
}

TEST_CASE("standard RB shot mode stays near the exact decay") {
  ProtocolConfig cfg = small_config(0.02, 4, 8, 13);
  cfg.exact_mode = false;
  cfg.rb_shots = 4000;
  const NoiseModel noise = NoiseModel::depolarizing(2, 0.98);
  const DecayDataset ds = run_standard_rb(cfg, noise);
  for (const LengthRecord& rec : ds.records) {
    const double want = 0.5 * std::pow(0.98, rec.y + 1) + 0.5;
    CHECK(std::abs(rec.phi_mean - want) < 0.02);
    CHECK(rec.shots == 8 * 4000);
  }
}

TEST_CASE("hybrid IRB: noiseless run yields eps_V = 0 with a collapsed interval") {
  ProtocolConfig cfg = small_config(0.05, 3, 3, 17);
  cfg.exact_mode = true;
  const HybridIrbResult res =
      run_hybrid_irb(TargetGate::t_gate(), cfg, NoiseModel::noiseless(2));
  CHECK(res.estimate.eps_point == 0.0);
  CHECK(res.estimate.eps_lower == 0.0);
  CHECK(res.estimate.eps_upper < 1e-9);
}

TEST_CASE("hybrid IRB end-to-end on the pi/8 gate (exact mode)") {
  const double p_c = 0.998, p_v = 0.99;
  const NoiseModel noise = NoiseModel::depolarizing(2, p_c, p_v);
  const double eps_v_true = average_gate_infidelity_exact(
      compose(QuantumChannel::from_unitary(TargetGate::t_gate().matrix),
              QuantumChannel::depolarizing(p_v, 2)),
      TargetGate::t_gate().matrix);
  CHECK(eps_v_true == doctest::Approx(5e-3).epsilon(1e-9));

  ProtocolConfig cfg = small_config(6e-3, 5, 6, 19);
  cfg.exact_mode = true;
  const HybridIrbResult res = run_hybrid_irb(TargetGate::t_gate(), cfg, noise);

  CHECK(res.estimate.eps_lower <= eps_v_true);
  CHECK(eps_v_true <= res.estimate.eps_upper);
  CHECK(std::abs(res.estimate.eps_point - eps_v_true) < 0.15 * eps_v_true);

  // twirl composition law: fitted interleaved decay = p_c * p_v
  CHECK(std::abs(res.fit_interleaved.dominant_decay() - p_c * p_v) < 1e-3);
  CHECK(std::abs(res.fit_reference.dominant_decay() - p_c) < 1e-3);

  // structural guarantees and dataset sanity
  for (const LengthRecord& rec : res.interleaved.records) {
    CHECK(rec.shots >= static_cast<std::int64_t>(cfg.m) *
                           chebyshev_L(cfg.alpha_mc.value, cfg.delta));
    CHECK(std::abs(rec.phi_mean) <= 1.0 + cfg.alpha_mc.value);
  }
  // monotone decay within the MC noise band
  for (std::size_t i = 1; i < res.interleaved.records.size(); ++i) {
    CHECK(res.interleaved.records[i].phi_mean <
          res.interleaved.records[i - 1].phi_mean + 2.0 * cfg.alpha_mc.value);
  }
}

TEST_CASE("hybrid IRB is SPAM robust at the estimate level") {
  const double p_c = 0.998, p_v = 0.99;
  ProtocolConfig cfg = small_config(6e-3, 5, 6, 23);
  cfg.exact_mode = true;

  const HybridIrbResult plain =
      run_hybrid_irb(TargetGate::t_gate(), cfg, NoiseModel::depolarizing(2, p_c, p_v));

  NoiseModel spam = NoiseModel::depolarizing(2, p_c, p_v);
  spam.preparation_error =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.95, 2));
  spam.measurement_error =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.95, 2));
  const HybridIrbResult noisy = run_hybrid_irb(TargetGate::t_gate(), cfg, spam);

  const double interval_width = plain.estimate.eps_upper - plain.estimate.eps_lower;
  CHECK(std::abs(noisy.estimate.eps_point - plain.estimate.eps_point) < interval_width);
  CHECK(std::abs(noisy.fit_interleaved.dominant_decay() -
                 plain.fit_interleaved.dominant_decay()) < 1e-3);
}

TEST_CASE("interleaving a Clifford target is consistent with its true error") {
  const double p_c = 0.998, p_v = 0.996;
  const NoiseModel noise = NoiseModel::depolarizing(2, p_c, p_v);
  const double eps_v_true = average_gate_infidelity_exact(
      compose(QuantumChannel::from_unitary(TargetGate::s_gate().matrix),
              QuantumChannel::depolarizing(p_v, 2)),
      TargetGate::s_gate().matrix);
  ProtocolConfig cfg = small_config(5e-3, 5, 6, 29);
  cfg.exact_mode = true;
  const HybridIrbResult res = run_hybrid_irb(TargetGate::s_gate(), cfg, noise);
  CHECK(res.estimate.eps_lower <= eps_v_true);
  CHECK(eps_v_true <= res.estimate.eps_upper);
  CHECK(std::abs(res.fit_interleaved.dominant_decay() - p_c * p_v) < 1e-3);
}

TEST_CASE("linear alpha_mc policy scales with eps_guess * y") {
  AlphaMcPolicy policy;
  policy.mode = AlphaMcPolicy::Mode::LinearInY;
  policy.coefficient = 0.05;
  policy.eps_guess = 0.01;
  CHECK(policy.alpha_for(100) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(policy.alpha_for(20) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(policy.alpha_for(1) == doctest::Approx(1e-3).epsilon(1e-12));   // clamped low
  CHECK(policy.alpha_for(10000) == doctest::Approx(0.3).epsilon(1e-12));  // clamped high

  // a hybrid run under the linear policy still recovers the target error
  ProtocolConfig cfg = small_config(6e-3, 5, 6, 61);
  cfg.exact_mode = true;
  cfg.alpha_mc.mode = AlphaMcPolicy::Mode::LinearInY;
  const NoiseModel noise = NoiseModel::depolarizing(2, 0.998, 0.99);
  const HybridIrbResult res = run_hybrid_irb(TargetGate::t_gate(), cfg, noise);
  CHECK(res.estimate.eps_lower <= 5e-3);
  CHECK(5e-3 <= res.estimate.eps_upper);
}

TEST_CASE("per-gate override channels take precedence for the inverting gate") {
  // noiseless Cliffords, but the inverting gate carries a strong
  // depolarizing override: survival = (d-1)/d p + 1/d for every y
  NoiseModel noise = NoiseModel::noiseless(2);
  noise.overrides["inverse"] =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.6, 2));
  ProtocolConfig cfg = small_config(0.05, 3, 4, 67);
  cfg.exact_mode = true;
  const DecayDataset ds = run_standard_rb(cfg, noise);
  for (const LengthRecord& rec : ds.records) {
    CHECK(rec.phi_mean == doctest::Approx(0.5 * 0.6 + 0.5).epsilon(1e-10));
  }
}

TEST_CASE("hybrid IRB on two qubits recovers a two-qubit gate error") {
  Rng gate_rng(71);
  const TargetGate v{"rand2q", testing::random_unitary(4, gate_rng)};
  const double p_c = 0.996, p_v = 0.992;
  const NoiseModel noise = NoiseModel::depolarizing(4, p_c, p_v);
  const double eps_v_true = average_gate_infidelity_exact(
      compose(QuantumChannel::from_unitary(v.matrix), QuantumChannel::depolarizing(p_v, 4)),
      v.matrix);
  // q = 5 is the smallest window that supports the decay + offset model
  ProtocolConfig cfg = small_config(8e-3, 5, 4, 73);
  cfg.exact_mode = true;
  cfg.alpha_mc.value = 0.1;
  cfg.delta = 0.1;
  cfg.threads = 2;
  const HybridIrbResult res = run_hybrid_irb(v, cfg, noise);
  CHECK(res.estimate.eps_lower <= eps_v_true);
  CHECK(eps_v_true <= res.estimate.eps_upper);
  CHECK(std::abs(res.fit_interleaved.dominant_decay() - p_c * p_v) < 2e-3);
}

TEST_CASE("interleaved sequences never carry an inverting gate") {
  Rng rng(31);
  for (int y : {1, 5, 12}) {
    const SequenceSpec seq = build_interleaved_sequence(1, y, TargetGate::t_gate(), rng);
    CHECK_FALSE(seq.has_inverting_gate());
    CHECK(static_cast<int>(seq.entries.size()) == 2 * y);
    const SequenceSpec rb = build_rb_sequence(1, y, rng);
    CHECK(rb.has_inverting_gate());
    CHECK(static_cast<int>(rb.entries.size()) == y + 1);
  }
}

TEST_CASE("hybrid IRB runs are bit-reproducible and thread-invariant") {
  ProtocolConfig cfg = small_config(0.02, 3, 4, 37);
  cfg.exact_mode = false;
  cfg.alpha_mc.value = 0.15;  // keep the run small
  cfg.rb_shots = 500;
  const NoiseModel noise = NoiseModel::depolarizing(2, 0.99, 0.98);

  const HybridIrbResult a = run_hybrid_irb(TargetGate::t_gate(), cfg, noise);
  const HybridIrbResult b = run_hybrid_irb(TargetGate::t_gate(), cfg, noise);
  cfg.threads = 2;
  const HybridIrbResult c = run_hybrid_irb(TargetGate::t_gate(), cfg, noise);
  for (std::size_t li = 0; li < a.interleaved.records.size(); ++li) {
    for (std::size_t si = 0; si < a.interleaved.records[li].z_values.size(); ++si) {
      const double za = a.interleaved.records[li].z_values[si];
      CHECK(za == b.interleaved.records[li].z_values[si]);
      CHECK(za == c.interleaved.records[li].z_values[si]);
    }
    CHECK(a.reference.records[li].phi_mean == c.reference.records[li].phi_mean);
  }
  CHECK(a.estimate.eps_point == c.estimate.eps_point);
}

TEST_CASE("direct MC: identity channel estimates fidelity 1 exactly") {
  Rng rng(51);
  const DirectMcResult res = direct_mc_average_fidelity(
      QuantumChannel::identity(2), Eigen::MatrixXcd::Identity(2, 2), 0.1, 0.1, rng);
  CHECK(res.average_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(static_cast<double>(res.shots) <= res.shot_bound);
}

TEST_CASE("direct MC: depolarizing channel lands within alpha of the closed form") {
  const double p = 0.99, alpha = 0.05, delta = 0.05;
  const QuantumChannel noisy = QuantumChannel::depolarizing(p, 2);
  for (bool exact : {false, true}) {
    Rng rng(52);
    const DirectMcResult res = direct_mc_average_fidelity(
        noisy, Eigen::MatrixXcd::Identity(2, 2), alpha, delta, rng, exact);
    CHECK(std::abs(res.average_fidelity - (p + (1.0 - p) / 2.0)) < alpha);
    CHECK(static_cast<double>(res.shots) <= res.shot_bound);
    CHECK(res.labels == chebyshev_L(alpha, delta));
  }
}

TEST_CASE("direct MC against a non-Clifford target with composed noise") {
  const TargetGate t = TargetGate::t_gate();
  const QuantumChannel noisy =
      compose(QuantumChannel::from_unitary(t.matrix), QuantumChannel::depolarizing(0.98, 2));
  const double truth = average_gate_fidelity_exact(noisy, t.matrix);
  Rng rng(53);
  const DirectMcResult res =
      direct_mc_average_fidelity(noisy, t.matrix, 0.05, 0.05, rng);
  CHECK(std::abs(res.average_fidelity - truth) < 0.05);
}

TEST_CASE("direct MC is SPAM sensitive where hybrid IRB is not") {
  // depolarizing SPAM shifts the direct estimate by more than the gate's
  // own infidelity scale
  const QuantumChannel perfect = QuantumChannel::identity(2);
  NoiseModel spam = NoiseModel::noiseless(2);
  spam.preparation_error =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.9, 2));
  spam.measurement_error =
      std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(0.9, 2));
  Rng rng(54);
  const DirectMcResult res = direct_mc_average_fidelity(
      perfect, Eigen::MatrixXcd::Identity(2, 2), 0.05, 0.05, rng, false, &spam);
  CHECK(res.average_fidelity < 0.95);  // perfect gate, biased estimate
}
