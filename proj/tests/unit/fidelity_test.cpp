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

#include <cmath>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "mqc/bounds.hpp"
#include "mqc/channels.hpp"
#include "mqc/errors.hpp"
#include "mqc/fidelity.hpp"
#include "mqc/random.hpp"
#include "mqc/tensor_ops.hpp"
#include "oracles.hpp"

namespace mqc {
namespace {

using testing::sender_leg;
using testing::sender_legs;

TEST(EntanglementFidelity, IdentityIsOne) {
  Rng rng(1);
  std::vector<DensityOperator> src = testing::random_sources(2, 2, rng);
  EXPECT_NEAR(entanglement_fidelity(testing::purified(src), identity_map(sender_legs(2, 2))).value,
              1.0, 1e-14);
}

TEST(EntanglementFidelity, MatchesSchumacherFormula) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = 1 + rng.index(3);
    testing::Instance inst = testing::random_mac(k, 3, rng);
    KrausMap e2e = inst.protocol.end_to_end();
    std::vector<oracle::Dense> parts;
    for (const auto& s : inst.sources) parts.push_back(s.matrix());
    const double f = entanglement_fidelity(inst.inputs, e2e).value;
    EXPECT_NEAR(f, oracle::entanglement_fidelity(e2e.ops(), oracle::kron_all(parts)), 1e-12);
    EXPECT_GE(f, -1e-15);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
}

TEST(EntanglementFidelity, LocalDominatesGlobal) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    testing::Instance inst = testing::random_mac(2, 3, rng);
    KrausMap e2e = inst.protocol.end_to_end();
    const double global = entanglement_fidelity(inst.inputs, e2e).value;
    for (std::size_t l = 0; l < 2; ++l) {
      FidelityReport r = local_entanglement_fidelity(inst.inputs, e2e, l);
      EXPECT_FALSE(r.global);
      EXPECT_GE(r.value, global - 1e-12);
    }
  }
}

TEST(EntanglementFidelity, KrausFormWithSubnormalizedEncoders) {
  Rng rng(4);
  const SystemLayout a = sender_leg(0, 2);
  KrausMap full = random_channel(a, a, 3, rng.next());
  KrausMap part({full.ops()[0]}, a, a, MapKind::TraceNonIncreasing);
  KrausMap noise = random_channel(a, a, 2, rng.next());
  DensityOperator rho = random_density(a, 0, rng);
  const double kraus = entanglement_fidelity_kraus({rho}, noise, {part}).value;
  const double direct =
      oracle::entanglement_fidelity(oracle::compose(noise.ops(), part.ops()), rho.matrix());
  EXPECT_NEAR(kraus, direct, 1e-13);
  EXPECT_NEAR(entanglement_fidelity(testing::purified({rho}), compose(noise, part)).value, direct,
              1e-13);
}

TEST(EntanglementFidelity, RejectsInputsMissingAFactor) {
  Rng rng(5);
  std::vector<DensityOperator> src = testing::random_sources(1, 2, rng);
  EXPECT_THROW(entanglement_fidelity(testing::purified(src), identity_map(sender_legs(2, 2))),
               LayoutError);
}

TEST(Subspace, RequiresOrthonormalBasis) {
  Matrix b(2, 1);
  b << 1.0, 1.0;
  EXPECT_THROW(Subspace(b, sender_leg(0, 2)[0]), InputError);
  EXPECT_EQ(Subspace::full(sender_leg(0, 3)[0]).dim(), 3u);
}

TEST(Minimizer, QubitDepolarizingAndDephasing) {
  const SystemLayout a = sender_leg(0, 2);
  for (double p : {0.1, 0.4}) {
    FidelityReport dep = min_subspace_fidelity(
        {Subspace::full(a[0])}, standard_channel(StandardChannel::Depolarizing, p, a));
    EXPECT_NEAR(dep.value, 1.0 - p / 2.0, 1e-9);
    FidelityReport deph = min_subspace_fidelity(
        {Subspace::full(a[0])}, standard_channel(StandardChannel::Dephasing, p, a));
    EXPECT_NEAR(deph.value, 1.0 - p, 1e-9);
    ASSERT_TRUE(deph.stats.has_value());
    ASSERT_TRUE(deph.stats->grid_value.has_value());
    EXPECT_NEAR(*deph.stats->grid_value, 1.0 - p, 1e-4);
  }
}

TEST(Minimizer, WitnessReproducesValue) {
  Rng rng(6);
  const SystemLayout all = sender_legs(2, 2);
  for (int i = 0; i < 5; ++i) {
    KrausMap m = testing::noisy_identity(all, 0.2, 2, rng);
    FidelityReport r = min_subspace_fidelity({Subspace::full(all[0]), Subspace::full(all[1])}, m);
    ASSERT_EQ(r.witness.size(), 2u);
    const double check =
        product_state_fidelity(m, {{"A1", r.witness[0]}, {"A2", r.witness[1]}});
    EXPECT_NEAR(check, r.value, 1e-12);
  }
  // A product channel's minimum factorizes over the legs.
  const double p = 0.3;
  KrausMap dep = tensor_maps({standard_channel(StandardChannel::Depolarizing, p, sender_leg(0, 2)),
                              standard_channel(StandardChannel::Depolarizing, p, sender_leg(1, 2))});
  FidelityReport r = min_subspace_fidelity({Subspace::full(all[0]), Subspace::full(all[1])}, dep);
  EXPECT_NEAR(r.value, std::pow(1.0 - p / 2.0, 2), 1e-9);
}

TEST(Minimizer, RestrictedSubspace) {
  const SystemLayout a = sender_leg(0, 2);
  Matrix basis = Matrix::Zero(2, 1);
  basis(0, 0) = 1.0;
  // |0> is a fixed point of dephasing, so the one-dimensional subspace is perfect.
  FidelityReport r = min_subspace_fidelity(
      {Subspace(basis, a[0])}, standard_channel(StandardChannel::Dephasing, 0.3, a));
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(Minimizer, LocalObjective) {
  const SystemLayout all = sender_legs(2, 2);
  const double p = 0.2;
  KrausMap dep = tensor_maps({standard_channel(StandardChannel::Depolarizing, p, sender_leg(0, 2)),
                              identity_map(sender_leg(1, 2))});
  FidelityReport r0 =
      local_subspace_fidelity({Subspace::full(all[0]), Subspace::full(all[1])}, dep, 0);
  FidelityReport r1 =
      local_subspace_fidelity({Subspace::full(all[0]), Subspace::full(all[1])}, dep, 1);
  EXPECT_NEAR(r0.value, 1.0 - p / 2.0, 1e-9);
  EXPECT_NEAR(r1.value, 1.0, 1e-9);
}

TEST(TheoremOne, UniformSourceBound) {
  Rng rng(7);
  const SystemLayout all = sender_legs(2, 2);
  for (int i = 0; i < 5; ++i) {
    KrausMap m = testing::noisy_identity(all, rng.uniform(0.0, 0.05), 2, rng);
    BoundReport r = check_theorem1({Subspace::full(all[0]), Subspace::full(all[1])}, m);
    EXPECT_TRUE(r.pass) << r.witness.dump();
  }
  Subspace s = Subspace::full(all[0]);
  PureState u = uniform_source_purification(s, "R");
  EXPECT_LT(oracle::max_abs(reduced_state(u, {"A1"}).matrix() - 0.5 * Matrix::Identity(2, 2)),
            1e-14);
}

}  // namespace
}  // namespace mqc
