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

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "mqc/state.hpp"
#include "mqc/tolerance.hpp"

namespace mqc {

/// Memoryless source emitting copies of `base`.
class IIDSource {
 public:
  /// Throws InputError unless `base` is normalized.
  explicit IIDSource(DensityOperator base);

  const DensityOperator& base() const { return base_; }
  /// Von Neumann entropy of the base in bits.
  double entropy() const { return entropy_; }
  /// Base eigenvalues, descending.
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  DensityOperator base_;
  double entropy_;
  std::vector<double> eigenvalues_;
};

/// base^{(x) n} on factors "<label>#1" ... "<label>#n" for each base factor.
DensityOperator block_state(const IIDSource& src, std::size_t n,
                            std::size_t max_dim = tol::max_total_dim);

struct TypicalReport {
  std::size_t n = 0;
  double epsilon = 0.0;
  double window_lo = 0.0;       // 2^{-n(S+eps)}
  double window_hi = 0.0;       // 2^{-n(S-eps)}
  double log2_window_lo = 0.0;
  double log2_window_hi = 0.0;
  /// Number of in-window eigenvalues. Exact while below 2^53.
  double typical_dim = 0.0;
  double log2_typical_dim = 0.0;  // -inf when nothing is typical
  double mass = 0.0;
};

/// Closed-window membership in the log2 domain with a 1e-9 slack.
bool in_typical_window(double log2_lambda, const TypicalReport& window);

struct TypicalProjector {
  Matrix projector;
  SystemLayout layout;
  TypicalReport report;
};

/// Matrix path: diagonalizes base^{(x) n}.
TypicalProjector typical_projector(const IIDSource& src, std::size_t n, double epsilon,
                                   std::size_t max_dim = tol::max_total_dim);

/// Spectral path: enumerates the multinomial multiplicities of the n-block
/// spectrum without building any matrix.
TypicalReport typical_spectral(const IIDSource& src, std::size_t n, double epsilon);

struct QaepCurve {
  double epsilon = 0.0;
  std::vector<TypicalReport> points;
  /// delta -> smallest tested n with mass > 1 - delta, if any.
  std::map<double, std::optional<std::size_t>> pass_at;
};

QaepCurve qaep_mass_curve(const IIDSource& src, double epsilon, const std::vector<std::size_t>& ns,
                          const std::vector<double>& deltas = {});

/// Rows "n,epsilon,typical_dim,mass" with a header line.
void write_typical_csv(std::ostream& os, const std::vector<TypicalReport>& reports);

}  // namespace mqc
