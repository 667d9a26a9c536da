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

#include "mqc/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "mqc/tolerance.hpp"

namespace mqc {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Vector kron_all(const std::vector<Vector>& factors) {
  Vector out = Vector::Ones(1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

double hermitian_deviation(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void fix_phase(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      v(i) = cplx(mag, 0.0);
      return;
    }
  }
}

namespace {

Eigen::Index argmax_abs(const Vector& v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double mag = std::abs(v(i));
    if (mag > best_mag + 1e-12) {
      best = i;
      best_mag = mag;
    }
  }
  return best;
}

// Canonical orthonormal basis for the range of an orthogonal projector.
std::vector<Vector> canonical_block_basis(const Matrix& projector, Eigen::Index rank) {
  const Eigen::Index n = projector.rows();
  Matrix residual = projector;  // columns are P e_j minus chosen components
  std::vector<Vector> basis;
  for (Eigen::Index step = 0; step < rank; ++step) {
    Eigen::Index pivot = 0;
    double pivot_norm = -1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double nrm = residual.col(j).norm();
      if (nrm > pivot_norm + 1e-12) {
        pivot = j;
        pivot_norm = nrm;
      }
    }
    Vector v = residual.col(pivot) / pivot_norm;
    for (const auto& b : basis) v -= b * b.dot(v);
    v.normalize();
    residual -= v * (v.adjoint() * residual);
    basis.push_back(v);
  }
  for (auto& b : basis) fix_phase(b);
  std::stable_sort(basis.begin(), basis.end(), [](const Vector& a, const Vector& b) {
    return argmax_abs(a) < argmax_abs(b);
  });
  return basis;
}

}  // namespace

HermitianEigen hermitian_eigen_desc(const Matrix& hermitian) {
  const Eigen::Index n = hermitian.rows();
  Matrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  RealVector asc = solver.eigenvalues();
  const Matrix& vecs = solver.eigenvectors();

  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = asc(n - 1 - i);
    out.vectors.col(i) = vecs.col(n - 1 - i);
  }

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && out.values(end - 1) - out.values(end) < tol::degeneracy) ++end;
    const Eigen::Index size = end - start;
    if (size == 1) {
      Vector v = out.vectors.col(start);
      fix_phase(v);
      out.vectors.col(start) = v;
    } else {
      Matrix block = out.vectors.middleCols(start, size);
      Matrix projector = block * block.adjoint();
      auto basis = canonical_block_basis(projector, size);
      for (Eigen::Index k = 0; k < size; ++k) out.vectors.col(start + k) = basis[k];
    }
    start = end;
  }
  return out;
}

PolarResult polar_restricted(const Matrix& m, double cutoff) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  PolarResult out;
  out.singular_values = svd.singularValues();
  Eigen::Index r = 0;
  while (r < out.singular_values.size() && out.singular_values(r) > cutoff) ++r;
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  out.isometry = u.leftCols(r) * v.leftCols(r).adjoint();
  out.support_projector = v.leftCols(r) * v.leftCols(r).adjoint();
  if (r == 0) {
    out.isometry = Matrix::Zero(m.rows(), m.cols());
    out.support_projector = Matrix::Zero(m.cols(), m.cols());
  }
  return out;
}

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
  RealVector vals = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = solver.eigenvectors();
  return v * vals.cast<cplx>().asDiagonal() * v.adjoint();
}

Matrix orthonormalize_columns(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    cplx d = r(j, j);
    double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

}  // namespace mqc
