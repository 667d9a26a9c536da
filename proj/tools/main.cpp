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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "mqc/errors.hpp"

namespace {

// "1,2,8:12" -> 1 2 8 9 10 11 12
std::vector<std::size_t> parse_n_list(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      const auto colon = part.find(':');
      if (colon == std::string::npos) {
        out.push_back(std::stoul(part));
      } else {
        const std::size_t lo = std::stoul(part.substr(0, colon));
        const std::size_t hi = std::stoul(part.substr(colon + 1));
        for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
      }
    }
  }
  return out;
}

std::pair<std::string, double> parse_tolerance(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw mqc::InputError("--tol expects key=value, got '" + text + "'");
  return {text.substr(0, eq), std::stod(text.substr(eq + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  using mqc::cli::RunConfig;

  CLI::App app{"mqc: multiparty quantum channel fidelity toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");

  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::vector<std::string> suites, tolerances, ns;
  std::string protocol, inputs, out, kind, branch_policy, matching, source;
  std::vector<std::size_t> branches;
  std::vector<double> spectrum, deltas;
  double epsilon = 0.0;
  std::size_t matrix_check = 0, block_length = 1;
  bool chain = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "64-bit seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--tol", tolerances, "tolerance override key=value");
  };
  auto with_protocol = [&](CLI::App* sub) {
    sub->add_option("--protocol", protocol, "protocol JSON");
    sub->add_option("--inputs", inputs, "input states JSON");
  };

  auto* verify = app.add_subcommand("verify-lemmas", "seeded random sweeps of the bound checks");
  common(verify);
  verify->add_option("--instances", instances, "instances per suite");
  verify->add_option("--suite", suites, "restrict to these suites");

  auto* fid = app.add_subcommand("fidelity", "global and per-leg entanglement fidelity");
  common(fid);
  with_protocol(fid);

  auto* prun = app.add_subcommand("protocol-run", "output state, fidelities and rates");
  common(prun);
  with_protocol(prun);
  prun->add_option("--block-length", block_length, "block length for the rate surrogates");

  auto* trans = app.add_subcommand("transform", "extract, strip or flatten a protocol");
  common(trans);
  with_protocol(trans);
  trans->add_option("--kind", kind, "extract | strip | flatten");
  trans->add_flag("--chain", chain, "flatten: chain into isometric extraction");
  trans->add_option("--branch-policy", branch_policy, "strip: highest-probability | fixed");
  trans->add_option("--branches", branches, "strip: fixed Kraus index per sender, e.g. 0,1")->delimiter(',');
  trans->add_option("--matching", matching, "strip: source | output");

  auto* typ = app.add_subcommand("typical", "typical subspace mass curves");
  common(typ);
  typ->add_option("--spectrum", spectrum, "diagonal base spectrum, e.g. 0.9,0.1")->delimiter(',');
  typ->add_option("--source", source, "base density JSON");
  typ->add_option("--epsilon", epsilon, "typicality window");
  typ->add_option("--n", ns, "block lengths, e.g. 1,2,10:20");
  typ->add_option("--delta", deltas, "report the first n with mass > 1 - delta")->delimiter(',');
  typ->add_option("--matrix-check", matrix_check, "cross-check the matrix path up to this n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mqc::cli::kPass : mqc::cli::kInputError;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw mqc::InputError("cannot open config '" + config_path + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw mqc::InputError(std::string("malformed config: ") + e.what());
      }
      config = mqc::cli::config_from_json(
          j, std::filesystem::absolute(config_path).parent_path());
    }
    CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    if (sub != nullptr) config.command = sub->get_name();
    if (config.command.empty()) throw mqc::InputError("no command given");
    if (sub != nullptr) {
      auto given = [&](const char* name) {
        auto* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
      };
      if (given("--seed")) config.seed = seed;
      if (given("--out")) config.out_dir = out;
      for (const auto& t : tolerances) config.tolerances.insert_or_assign(parse_tolerance(t).first,
                                                                          parse_tolerance(t).second);
      if (given("--instances")) {
        config.instances = instances;
        config.instance_counts.clear();
      }
      if (given("--suite")) config.suites = suites;
      if (given("--protocol")) config.protocol_path = protocol;
      if (given("--inputs")) config.inputs_path = inputs;
      if (given("--block-length")) config.block_length = block_length;
      if (given("--kind")) config.kind = kind;
      if (given("--chain")) config.chain = chain;
      if (given("--branch-policy")) config.branch_policy = branch_policy;
      if (given("--branches")) config.fixed_branches = branches;
      if (given("--matching")) config.matching = matching;
      if (given("--spectrum")) config.typical.spectrum = spectrum;
      if (given("--source")) config.typical.source_path = source;
      if (given("--epsilon")) config.typical.epsilon = epsilon;
      if (given("--n")) config.typical.ns = parse_n_list(ns);
      if (given("--delta")) config.typical.deltas = deltas;
      if (given("--matrix-check")) config.typical.matrix_check_max_n = matrix_check;
    }
  } catch (const mqc::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return mqc::cli::kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: bad number: " << e.what() << '\n';
    return mqc::cli::kInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: number out of range: " << e.what() << '\n';
    return mqc::cli::kInputError;
  }
  return mqc::cli::run(config, std::cerr);
}
