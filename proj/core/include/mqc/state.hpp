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

#include <vector>

#include "mqc/layout.hpp"
#include "mqc/linalg.hpp"

namespace mqc {

enum class Normalization { Normalized, Subnormalized };

/// Unit vector on a layout.
class PureState {
 public:
  /// Throws InputError unless |norm - 1| <= tol::norm and the size matches.
  PureState(Vector vector, SystemLayout layout);

  /// Normalizes `vector` first; throws on a zero vector.
  static PureState normalized(Vector vector, SystemLayout layout);
  static PureState basis(std::size_t index, SystemLayout layout);

  const Vector& vector() const { return vector_; }
  const SystemLayout& layout() const { return layout_; }
  std::size_t dim() const { return layout_.total_dim(); }

 private:
  Vector vector_;
  SystemLayout layout_;
};

/// Hermitian positive semidefinite matrix on a layout. Subnormalized
/// operators carry trace in [0, 1 + tol::trace].
class DensityOperator {
 public:
  /// Validates hermiticity, positivity, and trace against `norm`.
  DensityOperator(Matrix matrix, SystemLayout layout,
                  Normalization norm = Normalization::Normalized);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(SystemLayout layout);

  /// Skips the eigenvalue check for results of operations that preserve
  /// positivity. Still symmetrizes and checks size and trace.
  static DensityOperator trusted(Matrix matrix, SystemLayout layout);

  const Matrix& matrix() const { return matrix_; }
  const SystemLayout& layout() const { return layout_; }
  Normalization normalization() const { return norm_; }
  bool is_normalized() const { return norm_ == Normalization::Normalized; }
  std::size_t dim() const { return layout_.total_dim(); }
  double trace() const;

 private:
  DensityOperator() = default;
  Matrix matrix_;
  SystemLayout layout_;
  Normalization norm_ = Normalization::Normalized;
};

/// Linear map between two layouts, used for Kraus operators and partial
/// inner products. No structural invariants beyond matching sizes.
struct Operator {
  Matrix matrix;
  SystemLayout out_layout;
  SystemLayout in_layout;

  Operator(Matrix m, SystemLayout out, SystemLayout in);
  static Operator square(Matrix m, SystemLayout layout);
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  Matrix vectors;                   // orthonormal columns, same order
  SystemLayout layout;

  PureState eigenvector(std::size_t i) const;
  std::size_t size() const { return eigenvalues.size(); }
};

}  // namespace mqc
