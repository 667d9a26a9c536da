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

// Dense reference computations used to cross-check the library. They only
// depend on Eigen and spell every contraction out with explicit loops.
namespace mqc::oracle {

using cplx = std::complex<double>;
using Dense = Eigen::MatrixXcd;
using Ops = std::vector<Dense>;

Dense kron(const Dense& a, const Dense& b);
Dense kron_all(const std::vector<Dense>& factors);

/// second o first, every pair of operators.
Ops compose(const Ops& second, const Ops& first);
/// Product map on factors in the given order.
Ops tensor(const std::vector<Ops>& maps);

/// sum_K |tr(K rho)|^2, the entanglement fidelity of any purification of rho.
double entanglement_fidelity(const Ops& ops, const Dense& rho);
/// sum_K tr(K rho K^dagger).
double trace_out(const Ops& ops, const Dense& rho);

/// rho on A (x) B; keeps A or B.
Dense trace_second(const Dense& rho, std::size_t da, std::size_t db);
Dense trace_first(const Dense& rho, std::size_t da, std::size_t db);

/// Entropy in bits from a Hermitian eigensolve, dropping eigenvalues <= 1e-12.
double entropy_bits(const Dense& rho);

/// max_i,j |m_ij|.
double max_abs(const Dense& m);

/// Completeness sum_K K^dagger K.
Dense completeness(const Ops& ops);

}  // namespace mqc::oracle
