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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mqc/errors.hpp"
#include "mqc/random.hpp"
#include "mqc/sources.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {
namespace {

IIDSource skewed() {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.9;
  d(1, 1) = 0.1;
  return IIDSource(DensityOperator(d, SystemLayout::single("A", 2)));
}

// Frozen from a 60-digit binomial enumeration of diag(0.9, 0.1) at eps = 0.15.
struct Frozen {
  std::size_t n;
  double dim;
  double mass;
};

constexpr Frozen kFrozen[] = {
    {1, 0.0, 0.0},
    {2, 0.0, 0.0},
    {4, 0.0, 0.0},
    {10, 10.0, 0.387420489},
    {20, 190.0, 0.2851798070642983299},
    {50, 118143760.0, 0.76612616005237456973},
};

TEST(IIDSource, RejectsSubnormalizedBase) {
  Matrix half = 0.25 * Matrix::Identity(2, 2);
  EXPECT_THROW(IIDSource(DensityOperator(half, SystemLayout::single("A", 2),
                                         Normalization::Subnormalized)),
               InputError);
  EXPECT_NEAR(skewed().entropy(), 0.46899559358928122125, 1e-15);
}

TEST(Typical, SpectralMatchesFrozenValues) {
  const IIDSource src = skewed();
  for (const auto& f : kFrozen) {
    TypicalReport r = typical_spectral(src, f.n, 0.15);
    EXPECT_EQ(r.typical_dim, f.dim) << "n=" << f.n;
    EXPECT_NEAR(r.mass, f.mass, 1e-12) << "n=" << f.n;
  }
  TypicalReport big = typical_spectral(src, 100, 0.15);
  EXPECT_NEAR(big.log2_typical_dim, std::log2(52508951861645440.0), 1e-12);
  EXPECT_NEAR(big.mass, 0.86985014824808543334, 1e-12);
  EXPECT_TRUE(std::isinf(typical_spectral(src, 4, 0.1).log2_typical_dim));
}

TEST(Typical, ProjectorAgreesWithSpectralPath) {
  Rng rng(1);
  for (int i = 0; i < 5; ++i) {
    const IIDSource src(random_density(SystemLayout::single("A", 2), 0, rng));
    for (std::size_t n : {1u, 3u, 6u}) {
      TypicalProjector p = typical_projector(src, n, 0.2);
      TypicalReport s = typical_spectral(src, n, 0.2);
      EXPECT_EQ(p.report.typical_dim, s.typical_dim);
      EXPECT_NEAR(p.report.mass, s.mass, 1e-12);
      EXPECT_NEAR(p.projector.trace().real(), s.typical_dim, 1e-9);
      const DensityOperator block = block_state(src, n);
      EXPECT_NEAR((p.projector * block.matrix()).trace().real(), s.mass, 1e-12);
    }
  }
}

TEST(Typical, BlockStateGuard) {
  const IIDSource src(DensityOperator::maximally_mixed(SystemLayout::single("A", 3)));
  EXPECT_THROW(block_state(src, 8), DimensionGuardError);
  EXPECT_EQ(block_state(src, 2).layout().total_dim(), 9u);
}

TEST(Typical, CurveCrossing) {
  const IIDSource src = skewed();
  std::vector<std::size_t> ns;
  for (std::size_t n = 250; n <= 260; ++n) ns.push_back(n);
  QaepCurve c = qaep_mass_curve(src, 0.15, ns, {0.01, 1e-9});
  ASSERT_TRUE(c.pass_at.at(0.01).has_value());
  EXPECT_EQ(*c.pass_at.at(0.01), 258u);
  EXPECT_FALSE(c.pass_at.at(1e-9).has_value());
  EXPECT_NEAR(c.points[8].mass, 0.99085606173147007658, 1e-12);
}

TEST(Typical, CsvFormat) {
  std::ostringstream os;
  write_typical_csv(os, {typical_spectral(skewed(), 10, 0.15)});
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("n,epsilon,typical_dim,mass\n10,0.14999999999999999,10,0.387420489", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

}  // namespace
}  // namespace mqc
