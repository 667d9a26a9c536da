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

#include "mqc/protocols.hpp"

#include <cmath>
#include <set>

#include "mqc/errors.hpp"
#include "mqc/sources.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::ZeroWay: return "zero-way";
    case Regime::OneWayForward: return "one-way-forward";
    case Regime::TwoWay: return "two-way";
  }
  return "zero-way";
}

Regime regime_from_string(std::string_view text) {
  if (text == "zero-way") return Regime::ZeroWay;
  if (text == "one-way-forward" || text == "one-way") return Regime::OneWayForward;
  if (text == "two-way") return Regime::TwoWay;
  throw InputError("unknown regime '" + std::string(text) + "'");
}

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::MAC: return "mac";
    case Topology::KUC: return "k-uc";
    case Topology::Broadcast: return "broadcast";
    case Topology::General: return "general";
  }
  return "general";
}

Topology topology_from_string(std::string_view text) {
  if (text == "mac" || text == "MAC") return Topology::MAC;
  if (text == "k-uc" || text == "kuc" || text == "k-UC") return Topology::KUC;
  if (text == "broadcast") return Topology::Broadcast;
  if (text == "general") return Topology::General;
  throw InputError("unknown topology '" + std::string(text) + "'");
}

Protocol::Protocol(Regime regime, Topology topology, std::vector<KrausMap> encodings,
                   KrausMap channel, std::vector<KrausMap> decodings, std::vector<Branch> branches)
    : regime_(regime),
      topology_(topology),
      encodings_(std::move(encodings)),
      channel_(std::move(channel)),
      decodings_(std::move(decodings)),
      branches_(std::move(branches)) {
  switch (regime_) {
    case Regime::TwoWay:
      throw NotImplemented("two-way protocols are not implemented");
    case Regime::ZeroWay:
      if (!branches_.empty()) throw InputError("zero-way protocol cannot carry branches");
      validate_chain(encodings_, decodings_);
      for (const auto& e : encodings_) {
        if (!e.is_trace_preserving()) throw InputError("zero-way encodings must be trace preserving");
      }
      for (const auto& d : decodings_) {
        if (!d.is_trace_preserving()) throw InputError("zero-way decodings must be trace preserving");
      }
      break;
    case Regime::OneWayForward: {
      if (branches_.empty()) throw InputError("one-way protocol needs at least one branch");
      if (!encodings_.empty() || !decodings_.empty()) {
        throw InputError("one-way protocol keeps its maps in the branches");
      }
      const std::size_t k = branches_.front().encodings.size();
      Matrix total;
      for (const auto& b : branches_) {
        if (b.encodings.size() != k) throw InputError("branches differ in sender count");
        validate_chain(b.encodings, b.decodings);
        for (const auto& d : b.decodings) {
          if (!d.is_trace_preserving()) throw InputError("branch decodings must be trace preserving");
        }
        KrausMap joint = tensor_maps(b.encodings);
        const auto din = static_cast<Eigen::Index>(joint.in_layout().total_dim());
        if (total.size() == 0) total = Matrix::Zero(din, din);
        for (const auto& e : joint.ops()) total += e.adjoint() * e;
      }
      double dev = (total - Matrix::Identity(total.rows(), total.cols())).cwiseAbs().maxCoeff();
      if (dev > tol::tp) {
        throw InputError("branch encodings do not sum to a trace-preserving map (deviation " +
                         std::to_string(dev) + ")");
      }
      break;
    }
  }
}

Protocol Protocol::zero_way(std::vector<KrausMap> encodings, KrausMap channel,
                            std::vector<KrausMap> decodings, Topology topology) {
  return Protocol(Regime::ZeroWay, topology, std::move(encodings), std::move(channel),
                  std::move(decodings));
}

Protocol Protocol::one_way(KrausMap channel, std::vector<Branch> branches, Topology topology) {
  return Protocol(Regime::OneWayForward, topology, {}, std::move(channel), {}, std::move(branches));
}

void Protocol::validate_chain(const std::vector<KrausMap>& enc,
                              const std::vector<KrausMap>& dec) const {
  if (enc.empty()) throw InputError("protocol needs at least one encoding");
  if (dec.empty()) throw InputError("protocol needs at least one decoding");
  KrausMap e = tensor_maps(enc);
  KrausMap d = tensor_maps(dec);
  if (!e.out_layout().same_shape(channel_.in_layout())) {
    throw LayoutError("encoding outputs do not match the channel input");
  }
  if (!channel_.out_layout().same_shape(d.in_layout())) {
    throw LayoutError("channel output does not match the decoding inputs");
  }
  if (!d.out_layout().same_shape(e.in_layout())) {
    throw LayoutError("decoding outputs do not match the encoding inputs");
  }
}

std::size_t Protocol::senders() const {
  return regime_ == Regime::ZeroWay ? encodings_.size() : branches_.front().encodings.size();
}

std::vector<std::vector<std::string>> Protocol::sender_legs() const {
  const auto& enc = regime_ == Regime::ZeroWay ? encodings_ : branches_.front().encodings;
  std::vector<std::vector<std::string>> out;
  for (const auto& e : enc) out.push_back(e.in_layout().labels());
  return out;
}

std::size_t Protocol::branch_count() const {
  return regime_ == Regime::ZeroWay ? 1 : branches_.size();
}

KrausMap Protocol::branch_map(std::size_t j) const {
  if (j >= branch_count()) throw InputError("branch index out of range");
  const auto& enc = regime_ == Regime::ZeroWay ? encodings_ : branches_[j].encodings;
  const auto& dec = regime_ == Regime::ZeroWay ? decodings_ : branches_[j].decodings;
  return compose(tensor_maps(dec), compose(channel_, tensor_maps(enc)));
}

KrausMap Protocol::end_to_end() const {
  if (regime_ == Regime::ZeroWay) return branch_map(0);
  std::vector<Matrix> ops;
  SystemLayout in, out;
  for (std::size_t j = 0; j < branches_.size(); ++j) {
    KrausMap m = branch_map(j);
    if (j == 0) {
      in = m.in_layout();
      out = m.out_layout();
    }
    ops.insert(ops.end(), m.ops().begin(), m.ops().end());
  }
  return KrausMap(std::move(ops), std::move(in), std::move(out), MapKind::TracePreserving);
}

namespace {

void check_inputs(const Protocol& p, const std::vector<PureState>& inputs) {
  auto legs = p.sender_legs();
  if (inputs.size() != legs.size()) {
    throw InputError("need one input state per sender (" + std::to_string(legs.size()) + ")");
  }
  for (std::size_t i = 0; i < legs.size(); ++i) {
    for (const auto& l : legs[i]) {
      if (!inputs[i].layout().contains(l)) {
        throw LayoutError("input " + std::to_string(i) + " lacks encoder factor '" + l + "'");
      }
    }
  }
}

}  // namespace

std::vector<DensityOperator> leg_sources(const Protocol& p, const std::vector<PureState>& inputs) {
  check_inputs(p, inputs);
  auto legs = p.sender_legs();
  std::vector<DensityOperator> out;
  for (std::size_t i = 0; i < legs.size(); ++i) out.push_back(reduced_state(inputs[i], legs[i]));
  return out;
}

ProtocolRun run_protocol(const Protocol& p, const std::vector<PureState>& inputs) {
  check_inputs(p, inputs);
  KrausMap e2e = p.end_to_end();
  PureState psi = tensor_all(inputs);
  ProtocolRun run{.output = apply(e2e, DensityOperator::from_pure(psi)),
                  .global = entanglement_fidelity(inputs, e2e),
                  .local = {}};
  for (std::size_t l = 0; l < inputs.size(); ++l) {
    run.local.push_back(local_entanglement_fidelity(inputs, e2e, l));
  }
  return run;
}

KrausMap reduce_leg(const KrausMap& decoder_noise, const std::vector<KrausMap>& encoders,
                    const std::vector<DensityOperator>& sources, std::size_t target) {
  const std::size_t k = encoders.size();
  if (k == 0 || sources.size() != k) throw InputError("need one source per encoder");
  if (target >= k) throw InputError("target leg " + std::to_string(target) + " out of range");
  KrausMap joint = tensor_maps(encoders);
  if (!decoder_noise.in_layout().same_shape(joint.out_layout()) ||
      !decoder_noise.out_layout().same_shape(joint.in_layout())) {
    throw LayoutError("reduce_leg: decoder-noise map does not close the encoder loop");
  }

  // Per non-target leg: subnormalized eigenvectors and their encoded images.
  struct Leg {
    std::vector<std::string> in_labels, out_labels;
    std::vector<Vector> tilde;
    std::vector<std::vector<Vector>> encoded;  // [beta][gamma]
  };
  std::vector<std::size_t> others;
  std::vector<Leg> legs;
  for (std::size_t i = 0; i < k; ++i) {
    if (!sources[i].layout().same_shape(encoders[i].in_layout())) {
      throw LayoutError("source " + std::to_string(i) + " does not match its encoder input");
    }
    if (i == target) continue;
    others.push_back(i);
    Leg leg;
    leg.in_labels = encoders[i].in_layout().labels();
    leg.out_labels = encoders[i].out_layout().labels();
    Spectrum s = eig_desc(sources[i]);
    for (std::size_t g = 0; g < s.size(); ++g) {
      if (s.eigenvalues[g] <= 0.0) continue;
      leg.tilde.push_back(std::sqrt(s.eigenvalues[g]) * s.vectors.col(static_cast<Eigen::Index>(g)));
    }
    for (const auto& e : encoders[i].ops()) {
      std::vector<Vector> row;
      for (const auto& t : leg.tilde) row.push_back(e * t);
      leg.encoded.push_back(std::move(row));
    }
    legs.push_back(std::move(leg));
  }

  const std::size_t m = legs.size();
  std::size_t gamma_count = 1, beta_count = 1;
  for (const auto& l : legs) {
    gamma_count *= l.tilde.size();
    beta_count *= l.encoded.size();
  }
  std::vector<Matrix> ops;
  for (const auto& a : decoder_noise.ops()) {
    Operator op(a, decoder_noise.out_layout(), decoder_noise.in_layout());
    std::vector<std::size_t> beta(m, 0);
    for (std::size_t nb = 0; nb < beta_count; ++nb) {
      Matrix sum;
      std::vector<std::size_t> gamma(m, 0);
      for (std::size_t ng = 0; ng < gamma_count; ++ng) {
        std::vector<Contraction> bras, kets;
        for (std::size_t j = 0; j < m; ++j) {
          bras.push_back({legs[j].in_labels, legs[j].tilde[gamma[j]]});
          kets.push_back({legs[j].out_labels, legs[j].encoded[beta[j]][gamma[j]]});
        }
        Operator c = partial_inner_product(op, bras, kets);
        if (sum.size() == 0) {
          sum = c.matrix;
        } else {
          sum += c.matrix;
        }
        for (std::size_t j = m; j-- > 0;) {
          if (++gamma[j] < legs[j].tilde.size()) break;
          gamma[j] = 0;
        }
      }
      ops.push_back(std::move(sum));
      for (std::size_t j = m; j-- > 0;) {
        if (++beta[j] < legs[j].encoded.size()) break;
        beta[j] = 0;
      }
    }
  }
  return KrausMap(std::move(ops), encoders[target].out_layout(), encoders[target].in_layout(),
                  MapKind::TraceNonIncreasing);
}

RateReport rates(const Protocol& p, const std::vector<DensityOperator>& sources, std::size_t n,
                 const std::vector<std::size_t>& subspace_dims) {
  if (n == 0) throw InputError("block length must be at least 1");
  auto legs = p.sender_legs();
  if (sources.size() != legs.size()) throw InputError("need one source per sender");
  if (!subspace_dims.empty() && subspace_dims.size() != legs.size()) {
    throw InputError("need one subspace dimension per sender");
  }
  RateReport r;
  r.n = n;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const auto& enc = p.regime() == Regime::ZeroWay ? p.encodings()[i]
                                                    : p.branches().front().encodings[i];
    if (sources[i].dim() != enc.in_layout().total_dim()) {
      throw LayoutError("source " + std::to_string(i) + " does not match its sender's legs");
    }
    std::string label;
    for (const auto& l : legs[i]) label += (label.empty() ? "" : ",") + l;
    r.legs.push_back(label);
    DensityOperator block = block_state(IIDSource(sources[i]), n);
    r.entanglement_rate.push_back(von_neumann_entropy(block) / nd);
    double full = static_cast<double>(block.dim());
    double dim = subspace_dims.empty() ? full : static_cast<double>(subspace_dims[i]);
    if (dim < 1.0 || dim > full) throw InputError("subspace dimension out of range");
    r.subspace_rate.push_back(std::log2(dim) / nd);
  }
  return r;
}

}  // namespace mqc
