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

#include "mqc/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "mqc/errors.hpp"
#include "mqc/random.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

namespace {

SystemLayout qubits(const std::string& prefix, std::size_t k) {
  std::vector<Subsystem> subs;
  for (std::size_t i = 0; i < k; ++i) {
    subs.push_back({prefix + std::to_string(i), 2, Role::SenderLeg, static_cast<int>(i), 0});
  }
  return SystemLayout(std::move(subs));
}

// (1 - t) |phi><phi| + t sigma with sigma a random full-rank state.
DensityOperator planted(const Vector& phi, const SystemLayout& layout, double t, Rng& rng) {
  DensityOperator sigma = random_density(layout, 0, rng);
  Matrix m = (1.0 - t) * phi * phi.adjoint() + t * sigma.matrix();
  return DensityOperator(m, layout);
}

Vector perturbed(const Vector& v, double scale, Rng& rng) {
  Vector g(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) g(i) = rng.complex_normal();
  Vector w = v + scale * g;
  return w / w.norm();
}

BoundReport lemma1(Rng& rng) {
  const std::size_t k = 2 + rng.index(2);
  SystemLayout layout = qubits("q", k);
  std::vector<Vector> states;
  for (std::size_t i = 0; i < k; ++i) states.push_back(random_unit_vector(2, rng));
  const bool plant = rng.index(2) == 1;
  DensityOperator rho = plant ? planted(kron_all(states), layout, rng.uniform(0.0, 0.3), rng)
                              : random_density(layout, 0, rng);
  BoundReport r = check_local_from_global(rho, states);
  r.witness["mode"] = plant ? "planted" : "random";
  return r;
}

BoundReport lemma2(Rng& rng) {
  const std::size_t k = 2 + rng.index(2);
  SystemLayout layout = qubits("q", k);
  std::vector<Vector> states;
  for (std::size_t i = 0; i < k; ++i) states.push_back(random_unit_vector(2, rng));
  DensityOperator rho = planted(kron_all(states), layout, rng.uniform(0.0, 0.3), rng);
  std::vector<Vector> probes;
  for (const auto& s : states) probes.push_back(perturbed(s, rng.uniform(0.0, 0.2), rng));
  std::vector<double> eps;
  for (std::size_t i = 0; i < k; ++i) {
    DensityOperator ri = reduced_state(rho, {layout[i].label});
    const double m = probes[i].dot(ri.matrix() * probes[i]).real();
    eps.push_back(std::max(0.0, 1.0 - m) + rng.uniform(0.0, 0.01));
  }
  return check_global_from_local(rho, probes, eps);
}

BoundReport lemma5(Rng& rng) {
  const std::size_t d = 2 + rng.index(7);
  Vector psi = random_unit_vector(d, rng);
  const bool plant = rng.index(2) == 1;
  Vector phi1 = plant ? perturbed(psi, rng.uniform(0.0, 0.5), rng) : random_unit_vector(d, rng);
  Vector phi2 = plant ? perturbed(psi, rng.uniform(0.0, 0.5), rng) : random_unit_vector(d, rng);
  BoundReport r = overlap_triangle(phi1, phi2, psi);
  r.witness["dim"] = d;
  r.witness["mode"] = plant ? "planted" : "random";
  return r;
}

BoundReport lemma6(Rng& rng) {
  const std::size_t d = 2 + rng.index(3);
  SystemLayout layout = SystemLayout::single("q", d);
  Vector phi = random_unit_vector(d, rng);
  const bool plant = rng.index(4) != 0;
  DensityOperator rho = plant ? planted(phi, layout, rng.uniform(0.0, 1.0), rng)
                              : random_density(layout, 0, rng);
  BoundReport r = dominant_eigen_bounds(rho, phi);
  r.witness["dim"] = d;
  return r;
}

BoundReport lemma7(Rng& rng) {
  const std::size_t k = 2 + rng.index(2);
  std::vector<Subsystem> subs;
  std::vector<std::vector<std::string>> legs;
  std::vector<Vector> states;
  for (std::size_t i = 0; i < k; ++i) {
    const std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
    subs.push_back({a, 2, Role::Reference});
    subs.push_back({b, 2, Role::SenderLeg, static_cast<int>(i), 0});
    legs.push_back({a, b});
    states.push_back(random_unit_vector(4, rng));
  }
  SystemLayout layout(std::move(subs));
  DensityOperator rho = planted(kron_all(states), layout, rng.uniform(0.0, 0.02), rng);
  return product_purification(rho, legs, states).report;
}

BoundReport lemma8(Rng& rng) {
  const std::size_t k = 1 + rng.index(2);
  std::vector<Subsystem> subs;
  std::vector<std::string> traced;
  std::vector<Vector> states;
  for (std::size_t i = 0; i < k; ++i) {
    const std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
    subs.push_back({a, 2, Role::Reference});
    subs.push_back({b, 2, Role::SenderLeg, static_cast<int>(i), 0});
    traced.push_back(a);
    states.push_back(random_unit_vector(4, rng));
  }
  SystemLayout layout(std::move(subs));
  Vector phi = kron_all(states);
  DensityOperator rho = planted(phi, layout, 0.999 * rng.uniform(0.0, 1.0 / 72.0), rng);
  return entropy_continuity_check(PureState(phi, layout), rho, traced);
}

BoundReport alpha(Rng& rng) {
  const std::size_t l = 2 + rng.index(5);
  std::vector<double> w;
  for (std::size_t i = 0; i < l; ++i) {
    const double u = rng.uniform();
    if (u < 0.05) {
      w.push_back(0.0);
    } else if (u < 0.1) {
      w.push_back(1.0);
    } else {
      w.push_back(rng.uniform());
    }
  }
  return alpha_inequality(w);
}

using Generator = BoundReport (*)(Rng&);

struct Suite {
  const char* name;
  const char* family;
  Generator generate;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"lemma1", "lemma1.v1", &lemma1},   {"lemma2", "lemma2.v1", &lemma2},
      {"lemma5", "lemma5.v1", &lemma5},   {"lemma6", "lemma6.v1", &lemma6},
      {"lemma7", "lemma7.v1", &lemma7},   {"lemma8", "lemma8.v1", &lemma8},
      {"alpha_inequality", "alpha.v1", &alpha},
  };
  return all;
}

const Suite& find_suite(std::string_view name) {
  for (const auto& s : suites()) {
    if (name == s.name) return s;
  }
  throw InputError("unknown lemma suite '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string>& lemma_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.emplace_back(s.name);
    return out;
  }();
  return names;
}

std::string suite_family(std::string_view suite) { return find_suite(suite).family; }

std::uint64_t instance_seed(std::uint64_t seed, std::string_view family, std::size_t index) {
  return derive_seed(derive_seed(seed, fnv1a64(family)), index);
}

BoundReport lemma_instance(std::string_view suite, std::uint64_t seed) {
  Rng rng(seed);
  return find_suite(suite).generate(rng);
}

SweepSummary run_lemma_sweep(std::string_view suite, const SweepConfig& config,
                             const ReportSink& sink) {
  const Suite& s = find_suite(suite);
  SweepSummary sum;
  sum.suite = s.name;
  sum.family = s.family;
  sum.min_margin = std::numeric_limits<double>::infinity();
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < config.instances; ++i) {
    const std::uint64_t seed = instance_seed(config.seed, s.family, i);
    Rng rng(seed);
    BoundReport r = s.generate(rng);
    ++sum.instances;
    if (r.inconclusive) {
      ++sum.inconclusive;
    } else {
      sum.min_margin = std::min(sum.min_margin, r.margin);
      if (!r.pass) ++sum.violations;
    }
    if (sink) sink(i, seed, r);
  }
  if (sum.min_margin == std::numeric_limits<double>::infinity()) sum.min_margin = 0.0;
  sum.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sum;
}

}  // namespace mqc
