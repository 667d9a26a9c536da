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
#include <string>
#include <string_view>
#include <vector>

#include "mqc/state.hpp"
#include "mqc/tolerance.hpp"

namespace mqc {

enum class MapKind { TracePreserving, TraceNonIncreasing };

std::string_view to_string(MapKind kind);
MapKind map_kind_from_string(std::string_view text);

/// Completely positive map rho -> sum_k E_k rho E_k^dagger between layouts.
class KrausMap {
 public:
  /// Checks operator shapes and the completeness condition for `kind`
  /// at tol::tp; throws InputError on violation.
  KrausMap(std::vector<Matrix> ops, SystemLayout in_layout, SystemLayout out_layout,
           MapKind kind);

  const std::vector<Matrix>& ops() const { return ops_; }
  const SystemLayout& in_layout() const { return in_; }
  const SystemLayout& out_layout() const { return out_; }
  MapKind kind() const { return kind_; }
  bool is_trace_preserving() const { return kind_ == MapKind::TracePreserving; }
  std::size_t size() const { return ops_.size(); }

  /// Same operators on relabeled factors (dims unchanged).
  KrausMap relabeled(const std::vector<std::string>& in_labels,
                     const std::vector<std::string>& out_labels) const;

 private:
  std::vector<Matrix> ops_;
  SystemLayout in_;
  SystemLayout out_;
  MapKind kind_;
};

struct ValidationReport {
  MapKind declared = MapKind::TracePreserving;
  double tp_deviation = 0.0;      // max |sum E^dag E - I|
  double max_eigenvalue = 0.0;    // of sum E^dag E
  bool tp_pass = false;
  bool tni_pass = false;
  bool pass = false;              // check for the declared kind
};

ValidationReport validate(const KrausMap& map);

/// second o first. Requires first.out_layout to match second.in_layout.
KrausMap compose(const KrausMap& second, const KrausMap& first);
KrausMap tensor_maps(const std::vector<KrausMap>& maps);
KrausMap identity_map(const SystemLayout& layout);
/// Drops operators with Frobenius norm below `threshold`. Keeps at least one.
KrausMap prune(const KrausMap& map, double threshold = tol::prune);

/// Applies the map to the factors map.in_layout of rho. If the map keeps the
/// labels the result keeps rho's factor order; otherwise the output factors
/// are appended after the untouched ones.
DensityOperator apply(const KrausMap& map, const DensityOperator& rho);

enum class StandardChannel { Identity, Depolarizing, Dephasing, AmplitudeDamping };

/// identity: {I}. depolarizing(p): (1-p) rho + p I/d via Weyl operators.
/// dephasing(p): (1-p) rho + p/(d-1) sum_{k>=1} Z^k rho Z^-k, which for a
/// qubit is the phase flip (1-p) rho + p Z rho Z. amplitude_damping(g):
/// qubit only, K0 = diag(1, sqrt(1-g)), K1 = sqrt(g) |0><1|.
KrausMap standard_channel(StandardChannel which, double param, const SystemLayout& layout);
/// Parses "name" or "name:param", e.g. "depolarizing:0.25".
KrausMap parse_channel_spec(std::string_view spec, const SystemLayout& layout);

/// Stinespring channel from an orthonormalized Gaussian isometry
/// V: in -> out (x) env; Kraus ops (I (x) <e_k|) V.
KrausMap random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t env_dim,
                        std::uint64_t seed);
KrausMap random_channel(const SystemLayout& in, const SystemLayout& out, std::size_t env_dim,
                        std::uint64_t seed);

/// W with W^dagger W a projector (the support projector).
class PartialIsometry {
 public:
  /// Throws InputError if W^dagger W is not idempotent within tol::iso.
  PartialIsometry(Matrix w, SystemLayout in_layout, SystemLayout out_layout);

  const Matrix& matrix() const { return w_; }
  const Matrix& support_projector() const { return support_; }
  const SystemLayout& in_layout() const { return in_; }
  const SystemLayout& out_layout() const { return out_; }
  /// max |P^2 - P| with P = W^dagger W.
  double idempotency_error() const;

 private:
  Matrix w_;
  Matrix support_;
  SystemLayout in_;
  SystemLayout out_;
};

/// rho -> W rho W^dagger + tr((I - W^dagger W) rho) sink.
KrausMap embed_isometry_tp(const PartialIsometry& w, const DensityOperator& sink);
/// Adds operators routing the missing weight I - sum E^dagger E to `sink`.
KrausMap tp_completion(const KrausMap& map, const DensityOperator& sink);

}  // namespace mqc
