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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mqc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
Matrix kron_all(const std::vector<Matrix>& factors);
Vector kron_all(const std::vector<Vector>& factors);

/// Largest entry of |M - M^dagger|.
double hermitian_deviation(const Matrix& m);

/// Multiplies `v` by a phase so that its first entry with modulus above
/// 1e-12 is real and positive.
void fix_phase(Vector& v);

/// Hermitian eigendecomposition with eigenvalues sorted descending.
/// Degenerate blocks (gaps below tol::degeneracy) get a canonical basis built
/// by pivoted Gram-Schmidt on the block projector, ordered by the index of
/// each vector's largest-magnitude component and phase-fixed.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;  // columns, same order as values
};
HermitianEigen hermitian_eigen_desc(const Matrix& hermitian);

/// Polar factor of M restricted to singular values above `cutoff`.
struct PolarResult {
  Matrix isometry;            // U_r V_r^dagger
  Matrix support_projector;   // V_r V_r^dagger
  RealVector singular_values; // all of them, descending
};
PolarResult polar_restricted(const Matrix& m, double cutoff);

/// Principal square root of a positive semidefinite matrix; negative
/// eigenvalues are clamped to zero.
Matrix psd_sqrt(const Matrix& m);

/// Columns of the thin Q factor of a Householder QR, with phases chosen so
/// diag(R) is real positive.
Matrix orthonormalize_columns(const Matrix& m);

}  // namespace mqc
