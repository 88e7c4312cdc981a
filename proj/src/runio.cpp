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

#include "qrb/runio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qrb {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

double require_number(const ordered_json& j, const std::string& field) {
  if (!j.contains(field) || !j.at(field).is_number()) {
    fail(field, "required number is missing or not numeric");
  }
  return j.at(field).get<double>();
}

int require_int(const ordered_json& j, const std::string& field) {
  if (!j.contains(field) || !j.at(field).is_number_integer()) {
    fail(field, "required integer is missing or not integral");
  }
  return j.at(field).get<int>();
}

std::shared_ptr<const QuantumChannel> parse_channel(const ordered_json& j,
                                                    const std::string& field, int d) {
  if (!j.is_object() || !j.contains("type")) fail(field, "channel needs a \"type\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "identity" || type == "none") {
      return nullptr;
    } else if (type == "depolarizing") {
      const double p = require_number(j, "p");
      return std::make_shared<QuantumChannel>(QuantumChannel::depolarizing(p, d));
    } else if (type == "amplitude-damping") {
      if (d != 2) fail(field, "amplitude-damping is single-qubit only");
      const double gamma = require_number(j, "gamma");
      return std::make_shared<QuantumChannel>(QuantumChannel::amplitude_damping(gamma));
    } else if (type == "kraus") {
      if (!j.contains("operators") || !j.at("operators").is_array()) {
        fail(field, "kraus channel needs an \"operators\" array");
      }
      std::vector<Eigen::MatrixXcd> kraus;
      for (const auto& op : j.at("operators")) {
        Eigen::MatrixXcd m(d, d);
        for (int r = 0; r < d; ++r) {
          for (int c = 0; c < d; ++c) {
            const auto& cell = op.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
            m(r, c) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
          }
        }
        kraus.push_back(std::move(m));
      }
      return std::make_shared<QuantumChannel>(std::move(kraus));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(field, e.what());
  }
  fail(field, "unknown channel type \"" + type + "\"");
}

TargetGate parse_target(const ordered_json& j, int d) {
  if (!j.is_object()) fail("target_gate", "must be an object");
  if (j.contains("name")) {
    const std::string name = j.at("name").get<std::string>();
    TargetGate gate;
    if (name == "t" || name == "pi8") {
      gate = TargetGate::t_gate();
    } else if (name == "h" || name == "hadamard") {
      gate = TargetGate::hadamard();
    } else if (name == "s") {
      gate = TargetGate::s_gate();
    } else if (name == "cnot") {
      gate = TargetGate::cnot();
    } else {
      fail("target_gate.name", "unknown gate \"" + name + "\"");
    }
    if (gate.matrix.rows() != d) fail("target_gate.name", "gate dimension does not match n");
    return gate;
  }
  if (j.contains("matrix")) {
    const auto& rows = j.at("matrix");
    Eigen::MatrixXcd m(d, d);
    if (static_cast<int>(rows.size()) != d) fail("target_gate.matrix", "wrong row count");
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        const auto& cell = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
        m(r, c) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
      }
    }
    try {
      return TargetGate::from_matrix("custom", std::move(m));
    } catch (const std::exception& e) {
      fail("target_gate.matrix", e.what());
    }
  }
  fail("target_gate", "needs either \"name\" or \"matrix\"");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json dataset_to_json(const DecayDataset& ds) {
  ordered_json records = ordered_json::array();
  for (const LengthRecord& rec : ds.records) {
    records.push_back({{"y", rec.y},
                       {"phi_mean", rec.phi_mean},
                       {"phi_stderr", rec.phi_stderr},
                       {"sequences", rec.z_values.size()},
                       {"shots", rec.shots},
                       {"expected_shots", rec.expected_shots},
                       {"z_values", rec.z_values}});
  }
  return {{"variant", ds.variant}, {"n", ds.n}, {"records", std::move(records)}};
}

void append_csv(std::string& csv, const DecayDataset& ds) {
  for (const LengthRecord& rec : ds.records) {
    csv += ds.variant;
    csv += ',';
    csv += std::to_string(rec.y);
    csv += ',';
    csv += format_double(rec.phi_mean);
    csv += ',';
    csv += format_double(rec.phi_stderr);
    csv += ',';
    csv += std::to_string(rec.z_values.size());
    csv += ',';
    csv += std::to_string(rec.shots);
    csv += '\n';
  }
}

ordered_json fit_to_json(const DecayFit& fit) {
  std::vector<double> amps(fit.amplitudes.data(), fit.amplitudes.data() + fit.r);
  std::vector<double> lambdas(fit.lambdas.data(), fit.lambdas.data() + fit.r);
  return {{"r", fit.r},
          {"amplitudes", amps},
          {"lambdas", lambdas},
          {"residual_norm", fit.residual_norm},
          {"dominant_decay", fit.dominant_decay()}};
}

}  // namespace

RunConfig RunConfig::from_json(const ordered_json& j) {
  if (!j.is_object()) throw ConfigError("config: root must be a JSON object");
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1) {
    fail("schema_version", "must be present and equal to 1");
  }
  RunConfig cfg;
  if (!j.contains("protocol") || !j.at("protocol").is_string()) {
    fail("protocol", "required string is missing");
  }
  cfg.protocol = j.at("protocol").get<std::string>();
  if (cfg.protocol != "rb" && cfg.protocol != "hybrid-irb" && cfg.protocol != "direct-mc" &&
      cfg.protocol != "resource-report") {
    fail("protocol", "must be one of rb | hybrid-irb | direct-mc | resource-report");
  }
  cfg.n = j.contains("n") ? require_int(j, "n") : 1;
  if (cfg.n < 1 || cfg.n > kDefaultMaxQubits) {
    fail("n", "must be in [1, " + std::to_string(kDefaultMaxQubits) + "]");
  }
  const int d = 1 << cfg.n;
  cfg.noise.dim = d;

  if (j.contains("seed")) cfg.params.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("exact")) cfg.params.exact_mode = j.at("exact").get<bool>();
  if (j.contains("threads")) cfg.params.threads = require_int(j, "threads");
  cfg.out = j.contains("out") ? j.at("out").get<std::string>() : "qrb_run";

  if (j.contains("noise")) {
    const auto& noise = j.at("noise");
    if (noise.contains("clifford")) {
      cfg.noise.clifford_error = parse_channel(noise.at("clifford"), "noise.clifford", d);
    }
    if (noise.contains("target")) {
      cfg.noise.target_error = parse_channel(noise.at("target"), "noise.target", d);
    }
    if (noise.contains("prep")) {
      cfg.noise.preparation_error = parse_channel(noise.at("prep"), "noise.prep", d);
    }
    if (noise.contains("meas")) {
      cfg.noise.measurement_error = parse_channel(noise.at("meas"), "noise.meas", d);
    }
  }

  if (cfg.protocol == "resource-report") {
    const auto& p = j.contains("report") ? j.at("report") : ordered_json::object();
    cfg.params.q = p.contains("q") ? p.at("q").get<int>() : 20;
    cfg.params.m = p.contains("m") ? p.at("m").get<int>() : 50;
    cfg.report_eps = p.contains("eps") ? p.at("eps").get<double>() : 1e-3;
    cfg.params.alpha = p.contains("alpha") ? p.at("alpha").get<double>() : cfg.report_eps / 10.0;
    cfg.params.delta = p.contains("delta") ? p.at("delta").get<double>() : 0.05;
    if (p.contains("alpha_mc")) cfg.params.alpha_mc.value = p.at("alpha_mc").get<double>();
    cfg.report_n_min = p.contains("n_min") ? p.at("n_min").get<int>() : 1;
    cfg.report_n_max = p.contains("n_max") ? p.at("n_max").get<int>() : 4;
    if (cfg.report_n_min < 1 || cfg.report_n_max < cfg.report_n_min) {
      fail("report.n_min", "need 1 <= n_min <= n_max");
    }
    if (!(cfg.report_eps > 0.0) || cfg.report_eps >= 1.0) {
      fail("report.eps", "must be in (0, 1)");
    }
    if (cfg.params.q < 1 || cfg.params.m < 1) fail("report.q", "q and m must be >= 1");
  } else if (cfg.protocol == "direct-mc") {
    // only the sampling budgets matter here
    const auto& p = j.contains("protocol_params") ? j.at("protocol_params")
                                                  : ordered_json::object();
    cfg.params.alpha = p.contains("alpha") ? p.at("alpha").get<double>() : 0.05;
    cfg.params.delta = p.contains("delta") ? p.at("delta").get<double>() : 0.05;
    if (!(cfg.params.alpha > 0.0) || cfg.params.alpha >= 1.0) {
      fail("protocol_params.alpha", "must be in (0, 1)");
    }
    if (!(cfg.params.delta > 0.0) || cfg.params.delta >= 1.0) {
      fail("protocol_params.delta", "must be in (0, 1)");
    }
  } else {
    if (!j.contains("protocol_params")) fail("protocol_params", "required object is missing");
    const auto& p = j.at("protocol_params");
    cfg.params.q = require_int(p, "q");
    cfg.params.m = require_int(p, "m");
    if (p.contains("lengths")) {
      cfg.params.lengths = p.at("lengths").get<std::vector<int>>();
    } else if (p.contains("eps_guess")) {
      const double eps_guess = p.at("eps_guess").get<double>();
      try {
        cfg.params.lengths = choose_lengths(eps_guess, cfg.params.q);
      } catch (const std::exception& e) {
        fail("protocol_params.eps_guess", e.what());
      }
      cfg.params.alpha_mc.eps_guess = eps_guess;
    } else {
      fail("protocol_params", "needs \"lengths\" or \"eps_guess\"");
    }
    cfg.params.alpha = p.contains("alpha") ? p.at("alpha").get<double>() : 1e-4;
    cfg.params.delta = p.contains("delta") ? p.at("delta").get<double>() : 0.05;
    if (p.contains("rb_shots")) cfg.params.rb_shots = p.at("rb_shots").get<int>();
    if (p.contains("alpha_mc")) {
      const auto& a = p.at("alpha_mc");
      if (a.is_number()) {
        cfg.params.alpha_mc.mode = AlphaMcPolicy::Mode::Constant;
        cfg.params.alpha_mc.value = a.get<double>();
      } else if (a.is_object()) {
        const std::string mode =
            a.contains("mode") ? a.at("mode").get<std::string>() : "constant";
        if (mode == "constant") {
          cfg.params.alpha_mc.mode = AlphaMcPolicy::Mode::Constant;
          if (a.contains("value")) cfg.params.alpha_mc.value = a.at("value").get<double>();
        } else if (mode == "linear") {
          cfg.params.alpha_mc.mode = AlphaMcPolicy::Mode::LinearInY;
          if (a.contains("coefficient")) {
            cfg.params.alpha_mc.coefficient = a.at("coefficient").get<double>();
          }
        } else {
          fail("protocol_params.alpha_mc.mode", "must be \"constant\" or \"linear\"");
        }
      } else {
        fail("protocol_params.alpha_mc", "must be a number or an object");
      }
    }
    try {
      cfg.params.validate();
    } catch (const std::exception& e) {
      fail("protocol_params", e.what());
    }
  }

  if (cfg.protocol == "hybrid-irb" || cfg.protocol == "direct-mc") {
    if (!j.contains("target_gate")) fail("target_gate", "required for this protocol");
    cfg.target = parse_target(j.at("target_gate"), d);
  }

  try {
    cfg.noise.validate();
  } catch (const std::exception& e) {
    fail("noise", e.what());
  }
  cfg.echo = j;
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

RunResult execute_run(const RunConfig& cfg) {
  RunResult result;
  ordered_json& out = result.payload;
  out["schema_version"] = 1;
  out["protocol"] = cfg.protocol;
  out["seed"] = cfg.params.seed;
  out["config"] = cfg.echo;
  result.decay_csv = "protocol,y,phi_mean,phi_stderr,sequences,shots\n";

  if (cfg.protocol == "rb") {
    const DecayDataset ds = run_standard_rb(cfg.params, cfg.noise);
    const auto pts = [&] {
      std::vector<DecayPoint> p;
      for (const auto& rec : ds.records) p.push_back({static_cast<double>(rec.y), rec.phi_mean});
      return p;
    }();
    const DecayFit fit = fit_decay(pts);
    out["datasets"] = ordered_json::array({dataset_to_json(ds)});
    ordered_json fit_json = fit_to_json(fit);
    const double dim = static_cast<double>(cfg.noise.dim);
    fit_json["implied_error_rate"] = (dim - 1.0) / dim * (1.0 - fit.dominant_decay());
    out["fit"] = {{"rb", std::move(fit_json)}};
    out["total_shots"] = ds.total_shots();
    append_csv(result.decay_csv, ds);
  } else if (cfg.protocol == "hybrid-irb") {
    const HybridIrbResult res = run_hybrid_irb(*cfg.target, cfg.params, cfg.noise);
    out["datasets"] = ordered_json::array(
        {dataset_to_json(res.reference), dataset_to_json(res.interleaved)});
    out["fit"] = {{"reference", fit_to_json(res.fit_reference)},
                  {"interleaved", fit_to_json(res.fit_interleaved)}};
    out["estimate"] = {{"eps_point", res.estimate.eps_point},
                       {"eps_lower", res.estimate.eps_lower},
                       {"eps_upper", res.estimate.eps_upper},
                       {"eps_reference", res.estimate.eps_reference},
                       {"eps_interleaved", res.estimate.eps_interleaved}};
    out["total_shots"] = res.reference.total_shots() + res.interleaved.total_shots();
    append_csv(result.decay_csv, res.reference);
    append_csv(result.decay_csv, res.interleaved);
  } else if (cfg.protocol == "direct-mc") {
    result.decay_csv.clear();  // no decay table for this protocol
    QuantumChannel noisy = QuantumChannel::from_unitary(cfg.target->matrix, cfg.target->name);
    if (cfg.noise.target_error) {
      noisy = compose(QuantumChannel::from_unitary(cfg.target->matrix, cfg.target->name),
                      *cfg.noise.target_error);
    }
    Rng rng = make_stream(cfg.params.seed, {7});
    const DirectMcResult res = direct_mc_average_fidelity(
        noisy, cfg.target->matrix, cfg.params.alpha, cfg.params.delta, rng,
        cfg.params.exact_mode, &cfg.noise);
    out["direct_mc"] = {{"average_fidelity", res.average_fidelity},
                        {"entanglement_fidelity", res.entanglement_fidelity},
                        {"shots", res.shots},
                        {"labels", res.labels},
                        {"shot_bound", res.shot_bound}};
    out["total_shots"] = res.shots;
  } else {
    throw ConfigError("protocol: not a run protocol: " + cfg.protocol);
  }
  return result;
}

RunResult execute_resource_report(const RunConfig& cfg) {
  RunResult result;
  ordered_json& out = result.payload;
  out["schema_version"] = 1;
  out["protocol"] = cfg.protocol;
  out["config"] = cfg.echo;

  const double alpha_mc = cfg.params.alpha_mc.value;
  ordered_json rows = ordered_json::array();
  for (int n = cfg.report_n_min; n <= cfg.report_n_max; ++n) {
    const int d = 1 << n;
    const ResourceEstimate est =
        classical_cost_estimate(cfg.params.q, cfg.params.m, alpha_mc, cfg.report_eps, n);
    const double hybrid_exp =
        expected_experiments_bound(alpha_mc, cfg.params.delta, d, cfg.params.q, cfg.params.m);
    const double direct_exp =
        expected_experiments_bound(cfg.params.alpha, cfg.params.delta, d, 1, 1);
    rows.push_back({{"n", n},
                    {"d", d},
                    {"hybrid_experiments_bound", hybrid_exp},
                    {"direct_experiments_bound", direct_exp},
                    {"experiment_ratio_factor", est.experiment_ratio},
                    {"hybrid_classical_cost", est.n_class_hybrid},
                    {"direct_classical_cost", est.n_class_direct},
                    {"classical_ratio", est.classical_ratio}});
  }
  out["report"] = {{"q", cfg.params.q},
                   {"m", cfg.params.m},
                   {"eps", cfg.report_eps},
                   {"alpha", cfg.params.alpha},
                   {"alpha_mc", alpha_mc},
                   {"delta", cfg.params.delta},
                   {"rows", std::move(rows)}};
  return result;
}

void write_result(const RunConfig& cfg, const RunResult& result) {
  {
    std::ofstream json_out(cfg.out + ".json", std::ios::binary);
    if (!json_out) throw ConfigError("out: cannot write " + cfg.out + ".json");
    json_out << result.to_json_string();
  }
  if (!result.decay_csv.empty()) {
    std::ofstream csv_out(cfg.out + ".csv", std::ios::binary);
    if (!csv_out) throw ConfigError("out: cannot write " + cfg.out + ".csv");
    csv_out << result.decay_csv;
  }
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return 1;
  } catch (const FitError&) {
    return 2;
  } catch (const std::invalid_argument&) {
    return 1;
  } catch (...) {
    return 3;
  }
}

}  // namespace qrb
