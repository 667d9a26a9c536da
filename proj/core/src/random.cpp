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

#include "mqc/random.hpp"

#include <cmath>
#include <numbers>

#include "mqc/errors.hpp"

namespace mqc {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (stream * 0xD1B54A32D192ED03ULL);
  splitmix64(s);
  return splitmix64(s);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw InputError("Rng::index with n = 0");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

cplx Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return cplx(re, im) * std::numbers::sqrt2 * 0.5;
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.complex_normal();
  }
  return m;
}

Vector random_unit_vector(std::size_t dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_unitary(std::size_t dim, Rng& rng) {
  return orthonormalize_columns(ginibre(dim, dim, rng));
}

Matrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows < cols) throw InputError("random_isometry needs rows >= cols");
  return orthonormalize_columns(ginibre(rows, cols, rng));
}

PureState random_pure_state(const SystemLayout& layout, Rng& rng) {
  return PureState(random_unit_vector(layout.total_dim(), rng), layout);
}

DensityOperator random_density(const SystemLayout& layout, std::size_t rank, Rng& rng) {
  const std::size_t d = layout.total_dim();
  if (rank == 0 || rank > d) rank = d;
  Matrix g = ginibre(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator::trusted(std::move(rho), layout);
}

}  // namespace mqc
