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

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrb/runio.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool exact = false;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "path to the JSON run config")->required();
  cmd->add_option("--seed", flags.seed, "override the master seed");
  cmd->add_option("--out", flags.out, "override the output path prefix");
  cmd->add_flag("--exact", flags.exact, "exact mode: no shot noise");
  cmd->add_option("--threads", flags.threads, "worker threads for sequence evaluation");
}

qrb::RunConfig load(const CommonFlags& flags) {
  qrb::RunConfig cfg = qrb::RunConfig::from_file(flags.config);
  if (flags.seed) {
    cfg.params.seed = *flags.seed;
    cfg.echo["seed"] = *flags.seed;
  }
  if (flags.out) cfg.out = *flags.out;
  if (flags.exact) {
    cfg.params.exact_mode = true;
    cfg.echo["exact"] = true;
  }
  if (flags.threads) {
    cfg.params.threads = *flags.threads;
    cfg.echo["threads"] = *flags.threads;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrb: randomized benchmarking and Monte Carlo fidelity estimation"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a benchmarking protocol");
  add_common(run_cmd, run_flags);

  CommonFlags report_flags;
  CLI::App* report_cmd =
      app.add_subcommand("report", "emit the hybrid-vs-direct resource comparison");
  add_common(report_cmd, report_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const bool is_report = report_cmd->parsed();
    const CommonFlags& flags = is_report ? report_flags : run_flags;
    qrb::RunConfig cfg = load(flags);
    if (is_report && cfg.protocol != "resource-report") {
      throw qrb::ConfigError("protocol: the report subcommand needs \"resource-report\"");
    }

    const auto t0 = std::chrono::steady_clock::now();
    qrb::RunResult result;
    if (cfg.protocol == "resource-report") {
      result = qrb::execute_resource_report(cfg);
    } else {
      result = qrb::execute_run(cfg);
    }
    qrb::write_result(cfg, result);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

    std::cerr << "wrote " << cfg.out << ".json";
    if (!result.decay_csv.empty()) std::cerr << " and " << cfg.out << ".csv";
    std::cerr << " in " << elapsed.count() << " s\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qrb::exit_code_for_current_exception();
  }
}
