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

#include <optional>
#include <string>

#include <json.hpp>

#include "qrb/protocols.hpp"

namespace qrb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fully validated run description, parsed from the JSON config format
/// (schema_version 1). Every validation error names the offending field.
struct RunConfig {
  std::string protocol;  // "rb" | "hybrid-irb" | "direct-mc" | "resource-report"
  int n = 1;
  ProtocolConfig params;
  NoiseModel noise;
  std::optional<TargetGate> target;
  std::string out;  // output path prefix

  // resource-report fields
  double report_eps = 1e-3;
  int report_n_min = 1;
  int report_n_max = 4;

  nlohmann::ordered_json echo;  // the normalized config, reproduced in results

  static RunConfig from_json(const nlohmann::ordered_json& j);
  static RunConfig from_file(const std::string& path);
};

/// Everything a run produced. `payload` serializes deterministically:
/// rerunning with the same config and seed yields byte-identical files
/// (wall-clock time is reported on stderr, never stored).
struct RunResult {
  nlohmann::ordered_json payload;
  std::string decay_csv;  // columns: protocol,y,phi_mean,phi_stderr,sequences,shots

  std::string to_json_string() const { return payload.dump(2) + "\n"; }
};

RunResult execute_run(const RunConfig& cfg);
RunResult execute_resource_report(const RunConfig& cfg);

/// Writes <out>.json and, for protocol runs, <out>.csv.
void write_result(const RunConfig& cfg, const RunResult& result);

/// Exit-code mapping used by the command line tool:
/// 0 success, 1 config error, 2 fit failure.
int exit_code_for_current_exception();

}  // namespace qrb
