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
#include "mqc/linalg.hpp"
#include "mqc/random.hpp"
#include "mqc/tensor_ops.hpp"
#include "oracles.hpp"

namespace mqc {
namespace {

using testing::sender_leg;
using testing::sender_legs;

Vector basis(std::size_t d, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

Vector rotated(double theta) {
  Vector v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

TEST(LocalFromGlobal, ProductPureState) {
  Rng rng(1);
  Vector a = random_unit_vector(2, rng), b = random_unit_vector(3, rng);
  SystemLayout l({{"A", 2}, {"B", 3}});
  Vector ab = kron(a, b);
  BoundReport r = check_local_from_global(DensityOperator(ab * ab.adjoint(), l), {a, b});
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lhs, 1.0, 1e-14);
}

TEST(LocalFromGlobal, RandomStatesNeverViolate) {
  Rng rng(2);
  SystemLayout l({{"A", 2}, {"B", 2}, {"C", 2}});
  for (int i = 0; i < 200; ++i) {
    std::vector<Vector> s{random_unit_vector(2, rng), random_unit_vector(2, rng),
                          random_unit_vector(2, rng)};
    EXPECT_TRUE(check_local_from_global(random_density(l, 1 + rng.index(8), rng), s).pass);
  }
}

TEST(GlobalFromLocal, WorstCaseIsTight) {
  const double e1 = 0.03, e2 = 0.05;
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 0) = 1.0 - e1 - e2;  // |00>
  rho(2, 2) = e1;             // |10>
  rho(1, 1) = e2;             // |01>
  SystemLayout l({{"A", 2}, {"B", 2}});
  BoundReport r = check_global_from_local(DensityOperator(rho, l), {basis(2, 0), basis(2, 0)},
                                          {e1, e2});
  EXPECT_NEAR(r.lhs, 1.0 - e1 - e2, 1e-15);
  EXPECT_NEAR(r.margin, 0.0, 1e-15);
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(check_global_from_local(DensityOperator(rho, l), {basis(2, 0), basis(2, 0)},
                                       {0.01, e2}),
               InputError);
}

TEST(OverlapTriangle, CoincidentVectorsSitOnTheBoundary) {
  Vector v = rotated(0.4);
  BoundReport r = overlap_triangle(v, v, v);
  EXPECT_NEAR(r.margin, 0.0, 1e-15);
  EXPECT_TRUE(r.pass);
}

TEST(OverlapTriangle, SameSideRotations) {
  // psi = |0>, phi_i rotated by t_i in the same direction.
  for (double t1 : {0.05, 0.2}) {
    for (double t2 : {0.1, 0.3}) {
      BoundReport r = overlap_triangle(rotated(t1), rotated(t2), basis(2, 0));
      const double expected = std::pow(std::cos(t1 - t2), 2) -
                              (1.0 - std::pow(std::sin(t1), 2) - std::pow(std::sin(t2), 2));
      EXPECT_NEAR(r.margin, expected, 1e-14);
      EXPECT_TRUE(r.pass);
    }
  }
}

TEST(OverlapTriangle, OppositeRotationsBreakTheLinearForm) {
  // |<phi1|phi2>|^2 = cos^2(0.6) = 0.681 against 1 - 2 sin^2(0.3) = 0.825.
  BoundReport r = overlap_triangle(rotated(0.3), rotated(-0.3), basis(2, 0));
  EXPECT_NEAR(r.lhs, std::pow(std::cos(0.6), 2), 1e-14);
  EXPECT_NEAR(r.rhs, 1.0 - 2.0 * std::pow(std::sin(0.3), 2), 1e-14);
  EXPECT_FALSE(r.pass);
  BoundReport s = overlap_triangle_sqrt(rotated(0.3), rotated(-0.3), basis(2, 0));
  EXPECT_TRUE(s.pass);
  EXPECT_NEAR(s.margin, std::pow(std::cos(0.6), 2) - (1.0 - 4.0 * std::pow(std::sin(0.3), 2)),
              1e-14);
}

TEST(OverlapTriangle, SquareRootFormHoldsOnRandomTriples) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + rng.index(7);
    Vector psi = random_unit_vector(d, rng);
    auto near = [&](double scale) {
      Vector v = psi + scale * random_unit_vector(d, rng);
      return Vector(v / v.norm());
    };
    EXPECT_TRUE(overlap_triangle_sqrt(near(rng.uniform(0, 0.5)), near(rng.uniform(0, 0.5)), psi)
                    .pass);
  }
}

TEST(DominantEigen, PureAndMixed) {
  Rng rng(4);
  Vector phi = random_unit_vector(3, rng);
  SystemLayout l = SystemLayout::single("A", 3);
  BoundReport pure = dominant_eigen_bounds(DensityOperator(phi * phi.adjoint(), l), phi);
  EXPECT_TRUE(pure.pass);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(0.0, 1.0);
    Matrix rho = (1.0 - t) * phi * phi.adjoint() + t * random_density(l, 0, rng).matrix();
    BoundReport r = dominant_eigen_bounds(DensityOperator(rho, l), phi);
    EXPECT_TRUE(r.pass || r.inconclusive) << r.witness.dump();
  }
  BoundReport flat = dominant_eigen_bounds(DensityOperator::maximally_mixed(l), phi);
  EXPECT_TRUE(flat.inconclusive);
}

TEST(ProductPurification, FactorsPurifyTheMarginals) {
  Rng rng(5);
  SystemLayout l({{"a1", 2}, {"b1", 2}, {"a2", 2}, {"b2", 2}});
  for (int i = 0; i < 20; ++i) {
    Vector p1 = random_unit_vector(4, rng), p2 = random_unit_vector(4, rng);
    Vector big = kron(p1, p2);
    const double t = rng.uniform(0.0, 0.02);
    DensityOperator rho((1.0 - t) * big * big.adjoint() + t * random_density(l, 0, rng).matrix(), l);
    ProductPurification pp = product_purification(rho, {{"a1", "b1"}, {"a2", "b2"}}, {p1, p2});
    ASSERT_EQ(pp.factors.size(), 2u);
    EXPECT_LT(oracle::max_abs(reduced_state(pp.factors[0], {"a1", "b1"}).matrix() -
                              reduced_state(rho, {"a1", "b1"}).matrix()),
              1e-12);
    EXPECT_TRUE(pp.report.pass);
  }
  EXPECT_THROW(product_purification(DensityOperator::maximally_mixed(l), {{"a1", "b1"}},
                                    {random_unit_vector(4, rng)}),
               LayoutError);
}

TEST(EntropyContinuity, Precondition) {
  Rng rng(6);
  SystemLayout l({{"A", 2}, {"R", 2}});
  PureState phi = random_pure_state(l, rng);
  EXPECT_THROW(entropy_continuity_check(phi, DensityOperator::maximally_mixed(l), {"R"}),
               InputError);
  for (int i = 0; i < 50; ++i) {
    const double t = rng.uniform(0.0, 0.013);
    Matrix rho = (1.0 - t) * phi.vector() * phi.vector().adjoint() +
                 t * random_density(l, 0, rng).matrix();
    BoundReport r = entropy_continuity_check(phi, DensityOperator(rho, l), {"R"});
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.witness["entropy_rho"].get<double>(),
                oracle::entropy_bits(oracle::trace_second(rho, 2, 2)), 1e-12);
  }
}

TEST(AlphaInequality, Values) {
  EXPECT_NEAR(alpha_inequality({0.5, 0.5}).margin, 0.5, 1e-15);
  EXPECT_NEAR(alpha_inequality({1.0, 1.0, 1.0}).margin, 0.0, 1e-15);
  EXPECT_NEAR(alpha_inequality({0.0, 0.0}).margin, 0.0, 1e-15);
  EXPECT_THROW(alpha_inequality({1.2}), InputError);
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> w(2 + rng.index(5));
    for (auto& x : w) x = rng.uniform();
    EXPECT_TRUE(alpha_inequality(w).pass);
  }
}

TEST(BernoulliPower, Values) {
  BoundReport r = bernoulli_power(0.1, 3);
  EXPECT_NEAR(r.lhs, 0.729, 1e-15);
  EXPECT_NEAR(r.rhs, 0.7, 1e-15);
  EXPECT_TRUE(r.pass);
}

TEST(Carve, AmplitudeDampingOnMaximallyMixed) {
  const SystemLayout a = sender_leg(0, 2);
  KrausMap ad = standard_channel(StandardChannel::AmplitudeDamping, 0.1, a);
  std::vector<DensityOperator> src{DensityOperator::maximally_mixed(a)};
  const double fe = local_entanglement_fidelity(testing::purified(src), ad, 0).value;
  CarveResult r = carve_subspace(ad, src, {1.0 - fe});
  EXPECT_TRUE(r.certified_holds);
  EXPECT_GE(r.measured_Fs, r.certified_bound - 1e-6);
  ASSERT_EQ(r.kept_weight.size(), 1u);
  EXPECT_NEAR(r.kept_weight[0], 0.5, 1e-12);
  EXPECT_EQ(r.removed_count[0], 1u);
  EXPECT_NEAR(r.measured_Fs, 1.0, 1e-9);
}

TEST(Carve, PreconditionAndLayout) {
  const SystemLayout a = sender_leg(0, 2);
  KrausMap ad = standard_channel(StandardChannel::AmplitudeDamping, 0.1, a);
  std::vector<DensityOperator> src{DensityOperator::maximally_mixed(a)};
  EXPECT_THROW(carve_subspace(ad, src, {0.0}), InputError);
  EXPECT_THROW(carve_subspace(ad, src, {0.1, 0.1}), InputError);
}

TEST(Carve, CertifiedBoundHoldsOnNoisyIdentities) {
  Rng rng(8);
  for (int i = 0; i < 6; ++i) {
    const SystemLayout all = sender_legs(2, 2);
    KrausMap m = testing::noisy_identity(all, rng.uniform(0.0, 0.1), 2, rng);
    std::vector<DensityOperator> src = testing::random_sources(2, 2, rng, true);
    std::vector<PureState> in = testing::purified(src);
    std::vector<double> eta;
    for (std::size_t l = 0; l < 2; ++l) {
      eta.push_back(1.0 - local_entanglement_fidelity(in, m, l).value);
    }
    CarveResult r = carve_subspace(m, src, eta);
    EXPECT_GE(r.measured_Fs, r.certified_bound - 1e-6);
    for (std::size_t l = 0; l < 2; ++l) {
      EXPECT_LE(r.kept_weight[l], 1.0 + 1e-12);
      EXPECT_GE(r.kept_basis[l].cols(), 1);
    }
  }
}

}  // namespace
}  // namespace mqc
