// Copyright 2026 The mqc Authors
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
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mqc::cli {

enum ExitCode : int {
  kPass = 0,
  kInternal = 1,
  kViolation = 2,
  kInputError = 3,
};

struct TypicalConfig {
  std::vector<double> spectrum;     // base eigenvalues (diagonal source)
  std::string source_path;          // or a density JSON file
  double epsilon = 0.1;
  std::vector<std::size_t> ns;
  std::vector<double> deltas;
  std::size_t matrix_check_max_n = 0;  // also run the matrix path up to this n
};

struct RunConfig {
  std::string command;  // verify-lemmas | fidelity | protocol-run | transform | typical
  std::optional<std::uint64_t> seed;
  std::size_t instances = 1000;
  std::map<std::string, std::size_t> instance_counts;  // per-suite overrides
  std::vector<std::string> suites;                      // empty: all
  std::map<std::string, double> tolerances;
  std::filesystem::path protocol_path;
  std::filesystem::path inputs_path;
  std::filesystem::path out_dir = ".";
  std::string kind;            // transform: extract | strip | flatten
  bool chain = false;          // flatten: chain into extraction
  std::string branch_policy = "highest-probability";
  std::vector<std::size_t> fixed_branches;
  std::string matching = "source";  // strip: source | output
  std::size_t block_length = 1;     // protocol-run rates
  TypicalConfig typical;
};

/// Tolerance keys accepted in RunConfig::tolerances.
const std::vector<std::string>& tolerance_keys();

/// Reads a JSON config document. Relative paths resolve against `base_dir`.
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// Throws InputError when the config is inconsistent.
void validate(const RunConfig& config);

/// Executes the command, writing `<command>.jsonl` and
/// `<command>_summary.csv` (plus command specific files) under out_dir.
/// Diagnostics go to `log`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& log);

}  // namespace mqc::cli
