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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mqc/bounds.hpp"

namespace mqc {

struct SweepConfig {
  std::uint64_t seed = 7;
  std::size_t instances = 1000;
};

struct SweepSummary {
  std::string suite;
  std::string family;  // versioned instance generator, e.g. "lemma1.v1"
  std::size_t instances = 0;
  double min_margin = 0.0;
  std::size_t violations = 0;
  std::size_t inconclusive = 0;
  double seconds = 0.0;
};

/// Called once per instance, in instance order.
using ReportSink = std::function<void(std::size_t index, std::uint64_t seed, const BoundReport&)>;

/// Suite names accepted by run_lemma_sweep, in report order.
const std::vector<std::string>& lemma_suites();
std::string suite_family(std::string_view suite);

/// Seed of instance `index`, derived from the run seed and the family.
std::uint64_t instance_seed(std::uint64_t seed, std::string_view family, std::size_t index);

/// Generates and checks `instances` seeded random instances of one suite.
/// Inconclusive reports are counted but never as violations.
SweepSummary run_lemma_sweep(std::string_view suite, const SweepConfig& config,
                             const ReportSink& sink = {});

/// Single instance of a suite, for reproducing a serialized witness.
BoundReport lemma_instance(std::string_view suite, std::uint64_t instance_seed);

}  // namespace mqc
