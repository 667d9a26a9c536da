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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mqc/fidelity.hpp"
#include "mqc/state.hpp"

namespace mqc {

/// Outcome of one inequality check. pass <=> margin >= -tol::bound, where
/// margin is oriented so that positive means the inequality holds.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = true;
  /// The check's own hypothesis made the verdict ambiguous.
  bool inconclusive = false;
  nlohmann::json witness = nlohmann::json::object();
};

BoundReport make_report(std::string name, double lhs, double rhs, double margin,
                        nlohmann::json witness = nlohmann::json::object());

/// rho on k factors (layout order) and one unit vector per factor. With
/// g = <phi|rho|phi> and eps = 1 - g, checks every local overlap
/// m_l >= 1 - eps and the product-of-marginals overlap p >= 1 - k eps.
BoundReport check_local_from_global(const DensityOperator& rho, const std::vector<Vector>& states);

/// Requires m_i >= 1 - eps_i (up to tol::bound, InputError otherwise) and
/// checks <phi|rho|phi> >= 1 - sum eps_i.
BoundReport check_global_from_local(const DensityOperator& rho, const std::vector<Vector>& states,
                                    const std::vector<double>& epsilons);

/// With eta_i = 1 - |<phi_i|psi>|^2 checks |<phi1|phi2>|^2 >= 1 - eta1 - eta2.
/// The witness also carries the margin of 1 - (sqrt(eta1) + sqrt(eta2))^2.
BoundReport overlap_triangle(const Vector& phi1, const Vector& phi2, const Vector& psi);
/// |<phi1|phi2>|^2 >= 1 - (sqrt(eta1) + sqrt(eta2))^2.
BoundReport overlap_triangle_sqrt(const Vector& phi1, const Vector& phi2, const Vector& psi);

/// With eps = 1 - <phi|rho|phi>: lambda_max >= 1 - eps and
/// |<psi_max|phi>|^2 >= 1 - 2 eps. In a degenerate top block the eigenvector
/// closest to phi is used; the report is inconclusive there if eps >= 1/2.
BoundReport dominant_eigen_bounds(const DensityOperator& rho, const Vector& phi);

struct ProductPurification {
  std::vector<PureState> factors;  // Psi_i on (leg labels..., C_i)
  std::vector<std::string> ancilla_labels;
  BoundReport report;
};

/// rho on k legs given as label groups, with one state per leg (on the
/// leg's labels in the given order). Builds per leg
/// Psi_i = sqrt(l_max) |phi_max>|0> + sum_k sqrt(l_k) |phi_k>|k>
/// over the eigenpairs of rho_i, and checks
/// <Psi| rho (x) |0><0|_C |Psi> >= 1 - (2k + 4) eps.
ProductPurification product_purification(const DensityOperator& rho,
                                         const std::vector<std::vector<std::string>>& legs,
                                         const std::vector<Vector>& states);

/// With eps = 1 - <phi|rho|phi> < 1/72 (InputError otherwise) checks
/// |S(tr_T phi) - S(tr_T rho)| <= 2 sqrt(2 eps) log2 dim(kept) + 2 where T is
/// `traced`.
BoundReport entropy_continuity_check(const PureState& phi, const DensityOperator& rho,
                                     const std::vector<std::string>& traced);

/// prod a_l + prod (1 - a_l) <= 1 for weights in [0, 1].
BoundReport alpha_inequality(const std::vector<double>& weights);

/// (1 - eps)^k >= 1 - k eps.
BoundReport bernoulli_power(double eps, int k);

/// F_e of uniform sources on the subspaces versus the product F_s. Passes
/// when F_e >= 1 - C eta; the ratio (1 - F_e)/eta is in the witness.
/// eta defaults to 1 - F_s; a supplied eta must satisfy F_s >= 1 - eta.
BoundReport check_theorem1(const std::vector<Subspace>& subspaces, const KrausMap& map,
                           std::optional<double> eta = std::nullopt, double constant = 10.0,
                           const MinimizerConfig& config = {});

/// Uniform-source purification on one subspace: (1/sqrt d) sum_i |i>_R |b_i>.
PureState uniform_source_purification(const Subspace& s, const std::string& reference_label);

struct CarvePolicy {
  /// Removal never takes a leg's kept weight below this floor.
  double beta_min = 0.0;
  /// Stop once measured F_s reaches this value, if set.
  std::optional<double> fidelity_target;
  /// Stop once measured F_s reaches the certified bound (within 1e-9).
  bool stop_when_certified = true;
  std::size_t max_removals = 1u << 20;
  MinimizerConfig minimizer;
};

struct CarveResult {
  std::vector<std::string> legs;
  std::vector<Matrix> kept_basis;       // columns are kept eigenvectors
  std::vector<double> kept_weight;      // beta_l
  std::vector<std::size_t> removed_count;
  std::vector<std::size_t> support_dim; // eigenvectors with nonzero weight
  double certified_bound = 0.0;         // 1 - sum eta / prod beta
  double measured_Fs = 0.0;
  std::vector<double> dims;             // D_l
  std::vector<double> log2_dims;
  std::vector<double> local_eta;
  std::vector<double> measured_local_Fe;
  FidelityReport measured_report;
  bool certified_holds = false;         // measured >= certified - 1e-6
};

/// Removes, one at a time, the kept source eigenvector with the lowest
/// pure-state fidelity (other legs fed their full sources), until the policy
/// stops it. Starts from each source's support.
CarveResult carve_subspace(const KrausMap& channel, const std::vector<DensityOperator>& sources,
                           const std::vector<double>& local_eta, const CarvePolicy& policy = {});

}  // namespace mqc
