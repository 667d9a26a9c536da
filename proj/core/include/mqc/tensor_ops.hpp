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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqc/state.hpp"
#include "mqc/tolerance.hpp"

namespace mqc {

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                       std::size_t max_dim = tol::max_total_dim);
PureState tensor(const PureState& a, const PureState& b,
                 std::size_t max_dim = tol::max_total_dim);
Operator tensor(const Operator& a, const Operator& b);
DensityOperator tensor_all(const std::vector<DensityOperator>& parts,
                           std::size_t max_dim = tol::max_total_dim);
PureState tensor_all(const std::vector<PureState>& parts,
                     std::size_t max_dim = tol::max_total_dim);

/// Reorders factors to `order`, which must be a permutation of the labels.
PureState permute(const PureState& psi, const std::vector<std::string>& order);
DensityOperator permute(const DensityOperator& rho, const std::vector<std::string>& order);
Vector permute_vector(const Vector& v, const SystemLayout& layout,
                      const std::vector<std::string>& order);
Matrix permute_matrix(const Matrix& m, const SystemLayout& layout,
                      const std::vector<std::string>& order);

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& discard);
DensityOperator partial_trace(const PureState& psi, const std::vector<std::string>& discard);
/// Reduced state on `keep`, with factors in the order given.
DensityOperator reduced_state(const DensityOperator& rho, const std::vector<std::string>& keep);
DensityOperator reduced_state(const PureState& psi, const std::vector<std::string>& keep);

/// A vector on the joint space of `labels`, in that order. It need not be
/// normalized.
struct Contraction {
  std::vector<std::string> labels;
  Vector vector;
};

/// Contracts <bra| on output factors and |ket> on input factors of M.
Operator partial_inner_product(const Operator& m, const std::vector<Contraction>& bras,
                               const std::vector<Contraction>& kets);
Operator partial_inner_product(const Operator& m, const std::map<std::string, Vector>& bras,
                               const std::map<std::string, Vector>& kets);

struct LabeledVector {
  Vector vector;
  SystemLayout layout;
};

/// (<bra| (x) I) v for a vector on `layout`.
LabeledVector contract_bra(const Vector& v, const SystemLayout& layout,
                           const std::vector<Contraction>& bras);

/// Applies `op` to the factors op.in_layout of v. When op.out_layout has the
/// same labels as op.in_layout the factors stay in place; otherwise the
/// output factors are appended after the untouched ones.
LabeledVector apply_operator(const Operator& op, const Vector& v, const SystemLayout& layout);

/// Applies a square matrix to the factors `labels` (in that order) in place.
Vector apply_local(const Matrix& op, const std::vector<std::string>& labels, const Vector& v,
                   const SystemLayout& layout);

/// Eigenbasis purification sum_i sqrt(lambda_i) |phi_i> (x) |i>_env with the
/// global phase fixed. The environment dim defaults to dim(rho).
PureState purify(const DensityOperator& rho, const std::string& env_label,
                 std::optional<std::size_t> env_dim = std::nullopt);

/// Unitary U on the factors outside `shared` maximizing |<psi1|(I (x) U)|psi2>|.
Operator uhlmann_unitary(const PureState& psi1, const PureState& psi2,
                         const std::vector<std::string>& shared);
/// As uhlmann_unitary, but first requires the reductions onto `shared` to
/// agree within tol::match and throws VerificationError otherwise.
Operator matching_unitary(const PureState& psi1, const PureState& psi2,
                          const std::vector<std::string>& shared);

/// Entropy in bits; eigenvalues at or below tol::eig are dropped.
double von_neumann_entropy(const DensityOperator& rho);
double entropy_bits(const std::vector<double>& eigenvalues);

Spectrum eig_desc(const DensityOperator& rho);
Spectrum eig_desc(const Matrix& hermitian, const SystemLayout& layout);

double fidelity_with_pure(const DensityOperator& rho, const PureState& psi);

}  // namespace mqc
