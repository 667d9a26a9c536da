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

#include <benchmark/benchmark.h>

#include "mqc/channels.hpp"
#include "mqc/fidelity.hpp"
#include "mqc/random.hpp"
#include "mqc/sources.hpp"
#include "mqc/tensor_ops.hpp"

namespace {

mqc::SystemLayout legs(std::size_t k) {
  std::vector<mqc::Subsystem> subs;
  for (std::size_t i = 0; i < k; ++i) {
    subs.push_back({"A" + std::to_string(i + 1), 2, mqc::Role::SenderLeg, static_cast<int>(i), 0});
  }
  return mqc::SystemLayout(subs);
}

std::vector<mqc::PureState> inputs(const mqc::SystemLayout& l, mqc::Rng& rng) {
  std::vector<mqc::PureState> out;
  for (std::size_t i = 0; i < l.size(); ++i) {
    mqc::DensityOperator rho = mqc::random_density(l.select({l[i].label}), 0, rng);
    out.push_back(mqc::purify(rho, "R" + std::to_string(i + 1)));
  }
  return out;
}

void BM_EntanglementFidelity(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  mqc::Rng rng(1);
  const mqc::SystemLayout l = legs(k);
  mqc::KrausMap m = mqc::random_channel(l, l, 4, rng.next());
  std::vector<mqc::PureState> in = inputs(l, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mqc::entanglement_fidelity(in, m).value);
}
BENCHMARK(BM_EntanglementFidelity)->DenseRange(1, 4);

void BM_Apply(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  mqc::Rng rng(2);
  const mqc::SystemLayout l = legs(k);
  mqc::KrausMap m = mqc::random_channel(l, l, 4, rng.next());
  mqc::DensityOperator rho = mqc::random_density(l, 0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mqc::apply(m, rho).trace());
}
BENCHMARK(BM_Apply)->DenseRange(1, 5);

void BM_MinSubspaceFidelity(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  mqc::Rng rng(3);
  const mqc::SystemLayout l = legs(k);
  mqc::KrausMap m = mqc::random_channel(l, l, 2, rng.next());
  std::vector<mqc::Subspace> s;
  for (std::size_t i = 0; i < k; ++i) s.push_back(mqc::Subspace::full(l[i]));
  for (auto _ : state) benchmark::DoNotOptimize(mqc::min_subspace_fidelity(s, m).value);
}
BENCHMARK(BM_MinSubspaceFidelity)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_TypicalSpectral(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  mqc::Matrix d = mqc::Matrix::Zero(3, 3);
  d(0, 0) = 0.7;
  d(1, 1) = 0.2;
  d(2, 2) = 0.1;
  const mqc::IIDSource src(mqc::DensityOperator(d, mqc::SystemLayout::single("A", 3)));
  for (auto _ : state) benchmark::DoNotOptimize(mqc::typical_spectral(src, n, 0.1).mass);
}
BENCHMARK(BM_TypicalSpectral)->RangeMultiplier(4)->Range(16, 1024);

void BM_TypicalProjector(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  mqc::Matrix d = mqc::Matrix::Zero(2, 2);
  d(0, 0) = 0.9;
  d(1, 1) = 0.1;
  const mqc::IIDSource src(mqc::DensityOperator(d, mqc::SystemLayout::single("A", 2)));
  for (auto _ : state) benchmark::DoNotOptimize(mqc::typical_projector(src, n, 0.15).report.mass);
}
BENCHMARK(BM_TypicalProjector)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
