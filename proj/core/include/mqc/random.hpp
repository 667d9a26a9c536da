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
#include <random>
#include <string_view>

#include "mqc/state.hpp"

namespace mqc {

std::uint64_t splitmix64(std::uint64_t& state);
/// Deterministic seed for stream `stream` derived from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
/// 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view text);

/// Seeded generator. Uniform and normal deviates are computed here rather
/// than by <random> distributions so sequences are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  double normal();
  /// (N(0,1) + i N(0,1)) / sqrt(2).
  cplx complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);
Vector random_unit_vector(std::size_t dim, Rng& rng);
Matrix random_unitary(std::size_t dim, Rng& rng);
/// rows x cols with orthonormal columns (rows >= cols).
Matrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng);
PureState random_pure_state(const SystemLayout& layout, Rng& rng);
/// Induced-measure state of the given rank (rank 0 means full rank).
DensityOperator random_density(const SystemLayout& layout, std::size_t rank, Rng& rng);

}  // namespace mqc
