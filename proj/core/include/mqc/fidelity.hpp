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

#include "mqc/channels.hpp"
#include "mqc/state.hpp"

namespace mqc {

/// Orthonormal basis (columns) of a subspace of one leg's input space.
class Subspace {
 public:
  /// Throws InputError unless basis^dagger basis = I within tol::orth.
  Subspace(Matrix basis, Subsystem leg);
  static Subspace full(Subsystem leg);

  const Matrix& basis() const { return basis_; }
  const Subsystem& leg() const { return leg_; }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }

 private:
  Matrix basis_;
  Subsystem leg_;
};

enum class FidelityKind { Entanglement, SubspaceMin };

struct OptimizerStats {
  std::size_t restarts = 0;
  std::size_t iterations = 0;
  double spread = 0.0;  // max - min over restart results
  bool converged = true;
  std::optional<double> grid_value;
};

struct FidelityReport {
  double value = 0.0;
  FidelityKind kind = FidelityKind::Entanglement;
  bool global = true;
  std::optional<std::size_t> leg;  // set for local reports
  std::string leg_label;
  /// Per-leg witness vectors in each leg's full input space.
  std::vector<Vector> witness;
  std::vector<std::string> witness_labels;
  std::optional<OptimizerStats> stats;
};

/// <Psi| (I (x) map)(Psi) |Psi> with Psi the product of the leg states.
/// Reference factors are the labels of each input not present in the map.
/// For trace-nonincreasing maps this is the raw (unnormalized) value.
FidelityReport entanglement_fidelity(const std::vector<PureState>& inputs, const KrausMap& map);

/// Kraus-sum form: sum over alpha and beta tuples of
/// |sum over gamma tuples (x)<phi~| A_alpha (x) E^beta |phi~>|^2 with
/// phi~ = sqrt(lambda) phi from the spectra of the leg states.
FidelityReport entanglement_fidelity_kraus(const std::vector<DensityOperator>& leg_states,
                                           const KrausMap& decoder_noise,
                                           const std::vector<KrausMap>& encoders);

/// Overlap of leg `leg` of the output with its input leg state.
FidelityReport local_entanglement_fidelity(const std::vector<PureState>& inputs,
                                           const KrausMap& map, std::size_t leg);

struct MinimizerConfig {
  std::size_t restarts = 32;
  std::size_t max_iterations = 5000;
  double tolerance = 1e-9;            // objective change between sweeps
  double gradient_tolerance = 1e-7;   // tangent gradient norm
  std::uint64_t seed = 0x5eed0001ULL;
  bool grid_oracle = true;
  std::size_t grid_points = 1024;     // points per sphere circle
  double grid_disagreement = 1e-4;
  /// Also grid-check problems with several 2-dim legs, one leg at a time
  /// around the descent witness.
  bool grid_multi_leg = false;
  /// false: minimize over all (possibly entangled) states of the joint
  /// subspace. Global objective only.
  bool product_only = true;
};

/// Minimum over product pure states of <psi| map(psi) |psi>. The value is
/// attained by the returned witness, so it upper-bounds the exact minimum.
/// Throws VerificationError when the grid oracle disagrees with descent.
FidelityReport min_subspace_fidelity(const std::vector<Subspace>& subspaces, const KrausMap& map,
                                     const MinimizerConfig& config = {});

/// Same minimization for the objective <psi_l| tr_others map(psi) |psi_l>.
FidelityReport local_subspace_fidelity(const std::vector<Subspace>& subspaces,
                                       const KrausMap& map, std::size_t leg,
                                       const MinimizerConfig& config = {});

/// Objective evaluated through the density-operator path, for checking
/// witnesses. `legs` pairs a map input label with a unit vector.
double product_state_fidelity(const KrausMap& map,
                              const std::vector<std::pair<std::string, Vector>>& legs);
double local_product_state_fidelity(const KrausMap& map,
                                    const std::vector<std::pair<std::string, Vector>>& legs,
                                    std::size_t leg);

}  // namespace mqc
