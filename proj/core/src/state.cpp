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

#include "mqc/state.hpp"

#include <cmath>
#include <string>

#include "mqc/errors.hpp"
#include "mqc/tolerance.hpp"

namespace mqc {

PureState::PureState(Vector vector, SystemLayout layout)
    : vector_(std::move(vector)), layout_(std::move(layout)) {
  if (static_cast<std::size_t>(vector_.size()) != layout_.total_dim()) {
    throw LayoutError("pure state size " + std::to_string(vector_.size()) +
                      " does not match layout dim " +
                      std::to_string(layout_.total_dim()));
  }
  double n = vector_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol::norm) {
    throw InputError("pure state is not unit norm (norm " + std::to_string(n) + ")");
  }
}

PureState PureState::normalized(Vector vector, SystemLayout layout) {
  double n = vector.norm();
  if (!(n > 0.0)) throw InputError("cannot normalize a zero vector");
  return PureState(vector / n, std::move(layout));
}

PureState PureState::basis(std::size_t index, SystemLayout layout) {
  if (index >= layout.total_dim()) throw InputError("basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), std::move(layout));
}

namespace {

void check_square(const Matrix& m, const SystemLayout& layout) {
  auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (m.rows() != d || m.cols() != d) {
    throw LayoutError("operator shape " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + " does not match layout dim " +
                      std::to_string(d));
  }
}

void check_trace(double tr, Normalization norm) {
  if (!std::isfinite(tr)) throw InputError("density operator has non-finite trace");
  if (norm == Normalization::Normalized) {
    if (std::abs(tr - 1.0) > tol::trace) {
      throw InputError("density operator trace " + std::to_string(tr) + " is not 1");
    }
  } else if (tr < -tol::trace || tr > 1.0 + tol::trace) {
    throw InputError("subnormalized trace " + std::to_string(tr) + " outside [0, 1]");
  }
}

}  // namespace

DensityOperator::DensityOperator(Matrix matrix, SystemLayout layout, Normalization norm)
    : matrix_(std::move(matrix)), layout_(std::move(layout)), norm_(norm) {
  check_square(matrix_, layout_);
  double dev = hermitian_deviation(matrix_);
  if (dev > tol::herm) {
    throw InputError("density operator is not Hermitian (deviation " +
                     std::to_string(dev) + ")");
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (matrix_.size() > 0 && solver.eigenvalues().minCoeff() < -tol::psd) {
    throw InputError("density operator has a negative eigenvalue " +
                     std::to_string(solver.eigenvalues().minCoeff()));
  }
  check_trace(trace(), norm_);
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return trusted(psi.vector() * psi.vector().adjoint(), psi.layout());
}

DensityOperator DensityOperator::maximally_mixed(SystemLayout layout) {
  auto d = static_cast<Eigen::Index>(layout.total_dim());
  Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
  return trusted(std::move(m), std::move(layout));
}

DensityOperator DensityOperator::trusted(Matrix matrix, SystemLayout layout) {
  check_square(matrix, layout);
  DensityOperator out;
  out.matrix_ = 0.5 * (matrix + matrix.adjoint());
  out.layout_ = std::move(layout);
  double tr = out.trace();
  out.norm_ = std::abs(tr - 1.0) <= tol::trace ? Normalization::Normalized
                                                : Normalization::Subnormalized;
  check_trace(tr, out.norm_);
  return out;
}

double DensityOperator::trace() const { return matrix_.trace().real(); }

Operator::Operator(Matrix m, SystemLayout out, SystemLayout in)
    : matrix(std::move(m)), out_layout(std::move(out)), in_layout(std::move(in)) {
  if (static_cast<std::size_t>(matrix.rows()) != out_layout.total_dim() ||
      static_cast<std::size_t>(matrix.cols()) != in_layout.total_dim()) {
    throw LayoutError("operator shape does not match its layouts");
  }
}

Operator Operator::square(Matrix m, SystemLayout layout) {
  return Operator(std::move(m), layout, layout);
}

PureState Spectrum::eigenvector(std::size_t i) const {
  return PureState(vectors.col(static_cast<Eigen::Index>(i)), layout);
}

}  // namespace mqc
