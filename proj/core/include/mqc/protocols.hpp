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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqc/bounds.hpp"
#include "mqc/channels.hpp"
#include "mqc/fidelity.hpp"

namespace mqc {

enum class Regime { ZeroWay, OneWayForward, TwoWay };
enum class Topology { MAC, KUC, Broadcast, General };

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view text);
std::string_view to_string(Topology topology);
Topology topology_from_string(std::string_view text);

/// One classical message value of a one-way protocol: per-sender
/// (trace-nonincreasing) encodings and the matching decodings.
struct Branch {
  std::vector<KrausMap> encodings;
  std::vector<KrausMap> decodings;
};

/// Per-sender encodings, a channel and per-receiver decodings (a single
/// joint decoding for a MAC). Layouts must chain in declaration order:
/// tensor(encodings).out = channel.in, channel.out = tensor(decodings).in,
/// and tensor(decodings).out = tensor(encodings).in.
class Protocol {
 public:
  /// Zero-way protocols use `encodings` and `decodings`; one-way protocols
  /// carry them per branch and leave the top-level lists empty. Throws
  /// InputError when the layouts or the regime invariants do not hold.
  Protocol(Regime regime, Topology topology, std::vector<KrausMap> encodings, KrausMap channel,
           std::vector<KrausMap> decodings, std::vector<Branch> branches = {});

  static Protocol zero_way(std::vector<KrausMap> encodings, KrausMap channel,
                           std::vector<KrausMap> decodings, Topology topology = Topology::MAC);
  static Protocol one_way(KrausMap channel, std::vector<Branch> branches,
                          Topology topology = Topology::MAC);

  Regime regime() const { return regime_; }
  Topology topology() const { return topology_; }
  const std::vector<KrausMap>& encodings() const { return encodings_; }
  const KrausMap& channel() const { return channel_; }
  const std::vector<KrausMap>& decodings() const { return decodings_; }
  const std::vector<Branch>& branches() const { return branches_; }
  std::size_t senders() const;

  /// Encoder input labels grouped per sender.
  std::vector<std::vector<std::string>> sender_legs() const;
  /// D_j o channel o (x) eps_j for branch j (zero-way: j = 0 is the protocol).
  KrausMap branch_map(std::size_t j) const;
  std::size_t branch_count() const;
  /// Zero-way: D o channel o eps. One-way: the concatenated Kraus lists of all
  /// branch maps, which is trace preserving.
  KrausMap end_to_end() const;

 private:
  void validate_chain(const std::vector<KrausMap>& enc, const std::vector<KrausMap>& dec) const;

  Regime regime_;
  Topology topology_;
  std::vector<KrausMap> encodings_;
  KrausMap channel_;
  std::vector<KrausMap> decodings_;
  std::vector<Branch> branches_;
};

struct ProtocolRun {
  DensityOperator output;
  FidelityReport global;
  std::vector<FidelityReport> local;
};

/// Runs the protocol on one pure input per sender. Each input holds the
/// sender's encoder input factors plus any reference factors.
ProtocolRun run_protocol(const Protocol& p, const std::vector<PureState>& inputs);

/// Reductions of the inputs onto each sender's encoder input factors.
std::vector<DensityOperator> leg_sources(const Protocol& p, const std::vector<PureState>& inputs);

/// Kraus operators sum_gamma (x)<phi~| A_alpha (x) E^beta |phi~> contracting
/// every leg except `target` with the subnormalized eigenvectors of its
/// source. `decoder_noise` maps the encoder outputs to the encoder inputs.
KrausMap reduce_leg(const KrausMap& decoder_noise, const std::vector<KrausMap>& encoders,
                    const std::vector<DensityOperator>& sources, std::size_t target);

struct ExtractionStep {
  std::size_t leg = 0;
  std::size_t branch = 0;            // selected Kraus index of the encoder
  std::vector<double> scores;        // conditional fidelity per Kraus index
  double reduced_fidelity_before = 0.0;
  double reduced_fidelity_after = 0.0;
  std::size_t support_rank = 0;
};

struct ExtractionOptions {
  double support_cutoff = tol::support;
  double slack = 1e-7;
};

struct Extraction {
  std::vector<PartialIsometry> isometries;
  /// Each isometry embedded into a trace-preserving map with a maximally
  /// mixed sink.
  std::vector<KrausMap> encodings;
  double normalization = 1.0;     // prod_i tr(eps_i(rho_i))
  double fidelity_before = 0.0;   // raw F_e with the given encoders
  double eta = 0.0;               // 1 - fidelity_before / normalization
  double fidelity_after = 0.0;    // F_e with the partial isometries
  double fidelity_embedded = 0.0; // F_e with the embedded encodings
  double bound = 0.0;             // 1 - 2^k eta
  /// eta >= 2^-k / 2, where the bound carries little information.
  bool weak_guarantee = false;
  std::vector<ExtractionStep> steps;
};

/// Replaces every encoder by a partial isometry, one leg at a time. Throws
/// VerificationError with the step diagnostics if the result misses
/// F_e >= 1 - 2^k eta - slack.
Extraction extract_isometries(const KrausMap& decoder_noise, const std::vector<KrausMap>& encoders,
                              const std::vector<DensityOperator>& sources,
                              const ExtractionOptions& options = {});

struct ExtractionResult {
  Extraction extraction;
  Protocol protocol;
  FidelityReport report;
};

/// Zero-way protocol version of extract_isometries.
ExtractionResult extract_isometric_encodings(const Protocol& p,
                                             const std::vector<PureState>& inputs,
                                             const ExtractionOptions& options = {});

enum class BranchPolicy { HighestProbability, Fixed };
/// What the extra decoding rotates onto psi_i (x) |0>_C: the original input
/// phi_i (x) |0>_C, or the product purification of the branch output.
enum class MatchingTarget { SourcePurification, OutputPurification };

struct StripOptions {
  BranchPolicy policy = BranchPolicy::HighestProbability;
  std::vector<std::size_t> fixed_branches;  // per sender, for BranchPolicy::Fixed
  MatchingTarget target = MatchingTarget::SourcePurification;
  double branch_floor = 1e-6;
};

struct StripResult {
  std::vector<PureState> inputs;           // psi_i
  Protocol protocol;                       // identity encodings
  std::vector<KrausMap> extra_decodings;   // D~_i, leg local
  std::vector<std::size_t> branches;
  std::vector<double> branch_probabilities;
  double original_fidelity = 0.0;
  double epsilon = 0.0;                    // 1 - original_fidelity
  double branch_fidelity = 0.0;            // <phi| (D o channel)(psi) |phi>
  double stripped_fidelity = 0.0;
  std::vector<double> marginal_mismatch;   // per sender, reference marginals
  double entropy_original = 0.0;           // S(tr_ref phi)
  double entropy_stripped = 0.0;           // S(tr_ref psi)
  BoundReport product_purification;
  BoundReport entropy;
};

/// Moves the encodings into the sources. Requires a MAC or k-UC protocol
/// whose encoders keep their layouts.
StripResult strip_encodings(const Protocol& p, const std::vector<PureState>& inputs,
                            const StripOptions& options = {});

struct FlattenOptions {
  double branch_floor = 1e-6;
  bool chain_extraction = false;
  ExtractionOptions extraction;
};

struct FlattenResult {
  Protocol protocol;                   // zero-way, TP-completed branch
  std::size_t branch = 0;
  std::vector<double> raw_fidelity;    // F_e^(j), subnormalized
  std::vector<double> probability;     // tr(eps_j(rho))
  std::vector<double> conditional;     // F_e^(j) / p_j, 0 below the floor
  double ensemble_fidelity = 0.0;      // sum_j F_e^(j)
  double conditional_fidelity = 0.0;
  double zero_way_fidelity = 0.0;      // F_e of the returned protocol
  std::optional<Extraction> extraction;
  std::optional<Protocol> extracted;
};

FlattenResult flatten_one_way(const Protocol& p, const std::vector<PureState>& inputs,
                              const FlattenOptions& options = {});

struct RateReport {
  std::size_t n = 1;
  std::vector<std::string> legs;
  std::vector<double> entanglement_rate;  // S(rho_l^(n)) / n
  std::vector<double> subspace_rate;      // log2 dim(H_l^(n)) / n
};

/// Finite-n rate surrogates for single-copy sources, one per sender.
/// `subspace_dims` defaults to the full n-block leg dimension.
RateReport rates(const Protocol& p, const std::vector<DensityOperator>& sources, std::size_t n,
                 const std::vector<std::size_t>& subspace_dims = {});

}  // namespace mqc
