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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mqc/errors.hpp"
#include "mqc/protocols.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

namespace {

double map_trace(const KrausMap& map, const DensityOperator& rho) {
  double t = 0.0;
  for (const auto& e : map.ops()) t += (e * rho.matrix() * e.adjoint()).trace().real();
  return t;
}

Matrix support_projector(const DensityOperator& rho, double cutoff, std::size_t& rank) {
  Spectrum s = eig_desc(rho);
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Matrix p = Matrix::Zero(d, d);
  rank = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.eigenvalues[i] <= cutoff) continue;
    auto v = s.vectors.col(static_cast<Eigen::Index>(i));
    p += v * v.adjoint();
    ++rank;
  }
  return p;
}

std::string describe(const Extraction& x) {
  std::ostringstream os;
  os.precision(12);
  os << "eta=" << x.eta << " bound=" << x.bound << " fidelity_after=" << x.fidelity_after;
  for (const auto& s : x.steps) {
    os << "; leg " << s.leg << " branch " << s.branch << " scores [";
    for (std::size_t b = 0; b < s.scores.size(); ++b) os << (b ? "," : "") << s.scores[b];
    os << "] reduced " << s.reduced_fidelity_before << " -> " << s.reduced_fidelity_after;
  }
  return os.str();
}

KrausMap joint_decoding(const Protocol& p, std::size_t branch) {
  if (p.regime() == Regime::ZeroWay) return tensor_maps(p.decodings());
  return tensor_maps(p.branches()[branch].decodings);
}

}  // namespace

Extraction extract_isometries(const KrausMap& decoder_noise, const std::vector<KrausMap>& encoders,
                              const std::vector<DensityOperator>& sources,
                              const ExtractionOptions& options) {
  const std::size_t k = encoders.size();
  if (k == 0 || sources.size() != k) throw InputError("need one source per encoder");
  for (const auto& s : sources) {
    if (!s.is_normalized()) throw InputError("extraction sources must be normalized");
  }
  Extraction x;
  for (std::size_t i = 0; i < k; ++i) x.normalization *= map_trace(encoders[i], sources[i]);
  if (x.normalization <= 0.0) throw InputError("encoders annihilate the sources");
  x.fidelity_before = entanglement_fidelity_kraus(sources, decoder_noise, encoders).value;
  x.eta = std::max(0.0, 1.0 - x.fidelity_before / x.normalization);
  x.bound = 1.0 - std::exp2(static_cast<double>(k)) * x.eta;
  x.weak_guarantee = x.eta >= 0.5 * std::exp2(-static_cast<double>(k));

  std::vector<KrausMap> current = encoders;
  for (std::size_t i = 0; i < k; ++i) {
    ExtractionStep step;
    step.leg = i;
    KrausMap reduced = reduce_leg(decoder_noise, current, sources, i);
    const Matrix& rho = sources[i].matrix();
    double best = -1.0;
    for (std::size_t b = 0; b < current[i].size(); ++b) {
      const Matrix& e = current[i].ops()[b];
      const double weight = (e * rho * e.adjoint()).trace().real();
      double f = 0.0;
      if (weight > 1e-14) {
        for (const auto& a : reduced.ops()) f += std::norm((rho * a * e).trace());
        f /= weight;
      }
      step.scores.push_back(f);
      if (f > best) {
        best = f;
        step.branch = b;
      }
    }
    step.reduced_fidelity_before =
        entanglement_fidelity_kraus({sources[i]}, reduced, {current[i]}).value;
    Matrix p = support_projector(sources[i], options.support_cutoff, step.support_rank);
    PolarResult polar =
        polar_restricted(current[i].ops()[step.branch] * p, options.support_cutoff);
    PartialIsometry w(polar.isometry, current[i].in_layout(), current[i].out_layout());
    current[i] = KrausMap({w.matrix()}, w.in_layout(), w.out_layout(), MapKind::TraceNonIncreasing);
    step.reduced_fidelity_after =
        entanglement_fidelity_kraus({sources[i]}, reduced, {current[i]}).value;
    x.isometries.push_back(std::move(w));
    x.steps.push_back(std::move(step));
  }
  x.fidelity_after = entanglement_fidelity_kraus(sources, decoder_noise, current).value;
  for (const auto& w : x.isometries) {
    x.encodings.push_back(embed_isometry_tp(w, DensityOperator::maximally_mixed(w.out_layout())));
  }
  x.fidelity_embedded = entanglement_fidelity_kraus(sources, decoder_noise, x.encodings).value;
  if (x.fidelity_after < x.bound - options.slack) {
    throw VerificationError("extracted isometries miss the fidelity bound: " + describe(x));
  }
  return x;
}

ExtractionResult extract_isometric_encodings(const Protocol& p,
                                             const std::vector<PureState>& inputs,
                                             const ExtractionOptions& options) {
  if (p.regime() != Regime::ZeroWay) throw InputError("extraction needs a zero-way protocol");
  std::vector<DensityOperator> sources = leg_sources(p, inputs);
  KrausMap a = compose(joint_decoding(p, 0), p.channel());
  Extraction x = extract_isometries(a, p.encodings(), sources, options);
  Protocol out = Protocol::zero_way(x.encodings, p.channel(), p.decodings(), p.topology());
  FidelityReport report = entanglement_fidelity(inputs, out.end_to_end());
  return {std::move(x), std::move(out), std::move(report)};
}

StripResult strip_encodings(const Protocol& p, const std::vector<PureState>& inputs,
                            const StripOptions& options) {
  if (p.regime() != Regime::ZeroWay) throw InputError("stripping needs a zero-way protocol");
  if (p.topology() != Topology::MAC && p.topology() != Topology::KUC) {
    throw UnsupportedTopology("encoding stripping supports only MAC and k-UC protocols, not " +
                              std::string(to_string(p.topology())));
  }
  const std::size_t k = p.senders();
  auto legs = p.sender_legs();
  for (const auto& e : p.encodings()) {
    if (!e.out_layout().same_shape(e.in_layout())) {
      throw LayoutError("stripping needs encoders whose output layout equals their input");
    }
  }
  if (options.policy == BranchPolicy::Fixed && options.fixed_branches.size() != k) {
    throw InputError("fixed branch policy needs one branch index per sender");
  }
  const double original = entanglement_fidelity(inputs, p.end_to_end()).value;

  // Branch selection: outcome b of sender i leaves (I (x) E_b) phi_i.
  std::vector<PureState> psi;
  std::vector<std::size_t> chosen;
  std::vector<double> probs;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& enc = p.encodings()[i];
    std::vector<LabeledVector> outcomes;
    std::vector<double> weight;
    for (const auto& e : enc.ops()) {
      LabeledVector y = apply_operator(Operator(e, enc.out_layout(), enc.in_layout()),
                                       inputs[i].vector(), inputs[i].layout());
      weight.push_back(y.vector.squaredNorm());
      outcomes.push_back(std::move(y));
    }
    std::size_t b = 0;
    if (options.policy == BranchPolicy::Fixed) {
      b = options.fixed_branches[i];
      if (b >= outcomes.size()) throw InputError("fixed branch index out of range");
    } else {
      b = static_cast<std::size_t>(std::max_element(weight.begin(), weight.end()) - weight.begin());
    }
    if (weight[b] < options.branch_floor) {
      throw InputError("branch " + std::to_string(b) + " of sender " + std::to_string(i) +
                       " has probability " + std::to_string(weight[b]) + " below the floor");
    }
    psi.push_back(PureState::normalized(outcomes[b].vector, outcomes[b].layout));
    chosen.push_back(b);
    probs.push_back(weight[b]);
  }

  // Output of the stripped protocol before the extra decodings.
  KrausMap decoder_noise = compose(tensor_maps(p.decodings()), p.channel());
  PureState psi_all = tensor_all(psi);
  PureState phi_all = tensor_all(inputs);
  DensityOperator branch_out = apply(decoder_noise, DensityOperator::from_pure(psi_all));

  std::vector<std::vector<std::string>> groups;
  std::vector<Vector> phi_vectors;
  for (const auto& in : inputs) {
    groups.push_back(in.layout().labels());
    phi_vectors.push_back(in.vector());
  }
  ProductPurification lemma7 = product_purification(branch_out, groups, phi_vectors);

  std::vector<KrausMap> extra;
  std::vector<double> mismatch;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::string> shared;
    for (const auto& l : inputs[i].layout().labels()) {
      if (std::find(legs[i].begin(), legs[i].end(), l) == legs[i].end()) shared.push_back(l);
    }
    const std::size_t dc = inputs[i].dim();
    const std::string& anc = lemma7.ancilla_labels[i];
    SystemLayout c_layout = SystemLayout::single(anc, dc, Role::Environment);
    PureState zero = PureState::basis(0, c_layout);
    PureState target = tensor(psi[i], zero);
    PureState source = options.target == MatchingTarget::SourcePurification
                           ? tensor(inputs[i], zero)
                           : lemma7.factors[i];
    mismatch.push_back(
        (reduced_state(target, shared).matrix() - reduced_state(source, shared).matrix()).norm());
    Operator u = options.target == MatchingTarget::SourcePurification
                     ? uhlmann_unitary(target, source, shared)
                     : matching_unitary(target, source, shared);
    // u acts on (leg factors in input order, C); Kraus ops (I (x) <c|) U (I (x) |0>).
    std::vector<std::string> leg_order;
    for (const auto& l : u.out_layout.labels()) {
      if (l != anc) leg_order.push_back(l);
    }
    SystemLayout leg_layout = u.out_layout.select(leg_order);
    const auto dl = static_cast<Eigen::Index>(leg_layout.total_dim());
    const auto dci = static_cast<Eigen::Index>(dc);
    std::vector<Matrix> ops;
    for (Eigen::Index c = 0; c < dci; ++c) {
      Matrix kop(dl, dl);
      for (Eigen::Index r = 0; r < dl; ++r) {
        for (Eigen::Index s = 0; s < dl; ++s) kop(r, s) = u.matrix(r * dci + c, s * dci);
      }
      ops.push_back(permute_matrix(kop, leg_layout, legs[i]));
    }
    const auto& leg_in = p.encodings()[i].in_layout();
    extra.emplace_back(std::move(ops), leg_in, leg_in, MapKind::TracePreserving);
  }

  std::vector<KrausMap> identities;
  for (const auto& e : p.encodings()) identities.push_back(identity_map(e.in_layout()));
  std::vector<KrausMap> decodings;
  bool paired = p.topology() == Topology::KUC && p.decodings().size() == k;
  if (paired) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!p.decodings()[i].out_layout().same_shape(extra[i].in_layout())) paired = false;
    }
  }
  if (paired) {
    for (std::size_t i = 0; i < k; ++i) decodings.push_back(compose(extra[i], p.decodings()[i]));
  } else {
    decodings.push_back(compose(tensor_maps(extra), tensor_maps(p.decodings())));
  }
  Protocol stripped = Protocol::zero_way(identities, p.channel(), decodings, p.topology());

  StripResult res{.inputs = psi, .protocol = stripped, .extra_decodings = extra};
  res.branches = chosen;
  res.branch_probabilities = probs;
  res.original_fidelity = original;
  res.epsilon = std::max(0.0, 1.0 - original);
  res.branch_fidelity = fidelity_with_pure(branch_out, phi_all);
  res.stripped_fidelity = entanglement_fidelity(psi, stripped.end_to_end()).value;
  res.marginal_mismatch = mismatch;
  std::vector<std::string> all_legs;
  for (const auto& l : legs) all_legs.insert(all_legs.end(), l.begin(), l.end());
  res.entropy_original = von_neumann_entropy(reduced_state(phi_all, all_legs));
  res.entropy_stripped = von_neumann_entropy(reduced_state(psi_all, all_legs));
  res.product_purification = lemma7.report;
  const double eps_l = 1.0 - res.branch_fidelity;
  if (eps_l < 1.0 / 72.0) {
    res.entropy = entropy_continuity_check(phi_all, branch_out, all_legs);
  } else {
    res.entropy = make_report("lemma8", std::abs(res.entropy_original - res.entropy_stripped), 0.0,
                              0.0, {{"epsilon", eps_l}});
    res.entropy.inconclusive = true;
  }
  res.entropy.witness["entropy_source"] = res.entropy_original;
  res.entropy.witness["entropy_stripped_source"] = res.entropy_stripped;
  return res;
}

FlattenResult flatten_one_way(const Protocol& p, const std::vector<PureState>& inputs,
                              const FlattenOptions& options) {
  if (p.regime() != Regime::OneWayForward) throw InputError("flattening needs a one-way protocol");
  std::vector<DensityOperator> sources = leg_sources(p, inputs);
  const std::size_t nb = p.branch_count();
  std::vector<double> raw(nb), prob(nb), cond(nb, 0.0);
  double ensemble = 0.0;
  std::size_t best = nb;
  for (std::size_t j = 0; j < nb; ++j) {
    raw[j] = entanglement_fidelity(inputs, p.branch_map(j)).value;
    prob[j] = 1.0;
    for (std::size_t i = 0; i < sources.size(); ++i) {
      prob[j] *= map_trace(p.branches()[j].encodings[i], sources[i]);
    }
    ensemble += raw[j];
    if (prob[j] >= options.branch_floor) {
      cond[j] = raw[j] / prob[j];
      if (best == nb || cond[j] > cond[best]) best = j;
    }
  }
  if (best == nb) throw InputError("every branch probability is below the floor");

  const Branch& br = p.branches()[best];
  std::vector<KrausMap> completed;
  for (const auto& e : br.encodings) {
    completed.push_back(tp_completion(e, DensityOperator::maximally_mixed(e.out_layout())));
  }
  Protocol zero = Protocol::zero_way(completed, p.channel(), br.decodings, p.topology());
  FlattenResult res{.protocol = zero, .branch = best};
  res.raw_fidelity = raw;
  res.probability = prob;
  res.conditional = cond;
  res.ensemble_fidelity = ensemble;
  res.conditional_fidelity = cond[best];
  res.zero_way_fidelity = entanglement_fidelity(inputs, zero.end_to_end()).value;
  if (options.chain_extraction) {
    KrausMap a = compose(tensor_maps(br.decodings), p.channel());
    Extraction x = extract_isometries(a, br.encodings, sources, options.extraction);
    res.extracted = Protocol::zero_way(x.encodings, p.channel(), br.decodings, p.topology());
    res.extraction = std::move(x);
  }
  return res;
}

}  // namespace mqc
