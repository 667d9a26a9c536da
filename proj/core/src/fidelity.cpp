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

#include "mqc/fidelity.hpp"

#include <cmath>
#include <set>

#include "mqc/errors.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

Subspace::Subspace(Matrix basis, Subsystem leg) : basis_(std::move(basis)), leg_(std::move(leg)) {
  if (basis_.cols() < 1) throw InputError("subspace must have dim >= 1");
  if (static_cast<std::size_t>(basis_.rows()) != leg_.dim) {
    throw LayoutError("subspace basis rows do not match leg '" + leg_.label + "' dim");
  }
  Matrix gram = basis_.adjoint() * basis_;
  double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (err > tol::orth) {
    throw InputError("subspace basis is not orthonormal (error " + std::to_string(err) + ")");
  }
}

Subspace Subspace::full(Subsystem leg) {
  const auto d = static_cast<Eigen::Index>(leg.dim);
  return Subspace(Matrix::Identity(d, d), std::move(leg));
}

namespace {

struct LegGroups {
  std::vector<std::vector<std::string>> channel_labels;  // per input, in input order
};

LegGroups check_inputs(const std::vector<PureState>& inputs, const KrausMap& map) {
  if (inputs.empty()) throw InputError("no input legs");
  if (!map.out_layout().same_shape(map.in_layout())) {
    throw LayoutError("fidelity needs a map whose output layout equals its input layout");
  }
  LegGroups g;
  std::set<std::string> covered;
  for (const auto& in : inputs) {
    std::vector<std::string> mine;
    for (const auto& s : in.layout().subsystems()) {
      if (map.in_layout().contains(s.label)) {
        if (map.in_layout()[map.in_layout().index_of(s.label)].dim != s.dim) {
          throw LayoutError("leg '" + s.label + "' dim differs from the map input");
        }
        mine.push_back(s.label);
        covered.insert(s.label);
      }
    }
    if (mine.empty()) throw LayoutError("an input state has no factor acted on by the map");
    g.channel_labels.push_back(std::move(mine));
  }
  if (covered.size() != map.in_layout().size()) {
    throw LayoutError("map acts on factors not provided by any input");
  }
  return g;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ",";
    out += p;
  }
  return out;
}

}  // namespace

FidelityReport entanglement_fidelity(const std::vector<PureState>& inputs, const KrausMap& map) {
  check_inputs(inputs, map);
  PureState psi = tensor_all(inputs);
  double f = 0.0;
  for (const auto& k : map.ops()) {
    LabeledVector y =
        apply_operator(Operator(k, map.out_layout(), map.in_layout()), psi.vector(), psi.layout());
    f += std::norm(psi.vector().dot(y.vector));
  }
  FidelityReport r;
  r.value = f;
  r.kind = FidelityKind::Entanglement;
  return r;
}

FidelityReport local_entanglement_fidelity(const std::vector<PureState>& inputs,
                                           const KrausMap& map, std::size_t leg) {
  LegGroups groups = check_inputs(inputs, map);
  if (leg >= inputs.size()) throw InputError("unknown leg index " + std::to_string(leg));
  PureState psi = tensor_all(inputs);
  const PureState& target = inputs[leg];
  std::vector<Contraction> bra{{target.layout().labels(), target.vector()}};
  double f = 0.0;
  for (const auto& k : map.ops()) {
    LabeledVector y =
        apply_operator(Operator(k, map.out_layout(), map.in_layout()), psi.vector(), psi.layout());
    f += contract_bra(y.vector, y.layout, bra).vector.squaredNorm();
  }
  FidelityReport r;
  r.value = f;
  r.kind = FidelityKind::Entanglement;
  r.global = false;
  r.leg = leg;
  r.leg_label = join(groups.channel_labels[leg]);
  return r;
}

FidelityReport entanglement_fidelity_kraus(const std::vector<DensityOperator>& leg_states,
                                           const KrausMap& decoder_noise,
                                           const std::vector<KrausMap>& encoders) {
  const std::size_t k = leg_states.size();
  if (k == 0 || encoders.size() != k) {
    throw InputError("need one encoder per leg state");
  }
  SystemLayout enc_in = encoders[0].in_layout();
  SystemLayout enc_out = encoders[0].out_layout();
  for (std::size_t i = 0; i < k; ++i) {
    if (!encoders[i].in_layout().same_shape(leg_states[i].layout())) {
      throw LayoutError("encoder " + std::to_string(i) + " input does not match its leg state");
    }
    if (i > 0) {
      enc_in = SystemLayout::concat(enc_in, encoders[i].in_layout());
      enc_out = SystemLayout::concat(enc_out, encoders[i].out_layout());
    }
  }
  if (!decoder_noise.in_layout().same_shape(enc_out)) {
    throw LayoutError("decoder-noise input does not match the encoder outputs");
  }
  if (!decoder_noise.out_layout().same_shape(enc_in)) {
    throw LayoutError("decoder-noise output does not match the encoder inputs");
  }

  // tilde_phi[i][g] = sqrt(lambda_g) phi_g; enc_phi[i][b][g] = E_i^b tilde_phi[i][g].
  std::vector<std::vector<Vector>> tilde(k);
  std::vector<std::vector<std::vector<Vector>>> enc_phi(k);
  for (std::size_t i = 0; i < k; ++i) {
    Spectrum s = eig_desc(leg_states[i]);
    for (std::size_t g = 0; g < s.size(); ++g) {
      if (s.eigenvalues[g] <= 0.0) continue;
      tilde[i].push_back(std::sqrt(s.eigenvalues[g]) * s.vectors.col(static_cast<Eigen::Index>(g)));
    }
    enc_phi[i].resize(encoders[i].size());
    for (std::size_t b = 0; b < encoders[i].size(); ++b) {
      for (const auto& t : tilde[i]) enc_phi[i][b].push_back(encoders[i].ops()[b] * t);
    }
  }

  std::size_t gamma_count = 1;
  for (const auto& t : tilde) gamma_count *= t.size();
  std::vector<Vector> bras;
  bras.reserve(gamma_count);
  std::vector<std::size_t> gamma(k, 0);
  for (std::size_t n = 0; n < gamma_count; ++n) {
    Vector b = Vector::Ones(1);
    for (std::size_t i = 0; i < k; ++i) b = kron(b, tilde[i][gamma[i]]);
    bras.push_back(std::move(b));
    for (std::size_t i = k; i-- > 0;) {
      if (++gamma[i] < tilde[i].size()) break;
      gamma[i] = 0;
    }
  }

  std::size_t beta_count = 1;
  for (const auto& e : encoders) beta_count *= e.size();
  double f = 0.0;
  std::vector<std::size_t> beta(k, 0);
  for (std::size_t nb = 0; nb < beta_count; ++nb) {
    std::vector<Vector> kets;
    kets.reserve(gamma_count);
    std::fill(gamma.begin(), gamma.end(), 0);
    for (std::size_t n = 0; n < gamma_count; ++n) {
      Vector v = Vector::Ones(1);
      for (std::size_t i = 0; i < k; ++i) v = kron(v, enc_phi[i][beta[i]][gamma[i]]);
      kets.push_back(std::move(v));
      for (std::size_t i = k; i-- > 0;) {
        if (++gamma[i] < tilde[i].size()) break;
        gamma[i] = 0;
      }
    }
    for (const auto& a : decoder_noise.ops()) {
      cplx s = 0.0;
      for (std::size_t n = 0; n < gamma_count; ++n) s += bras[n].dot(a * kets[n]);
      f += std::norm(s);
    }
    for (std::size_t i = k; i-- > 0;) {
      if (++beta[i] < encoders[i].size()) break;
      beta[i] = 0;
    }
  }

  FidelityReport r;
  r.value = f;
  r.kind = FidelityKind::Entanglement;
  return r;
}

namespace {

DensityOperator product_input(const KrausMap& map,
                              const std::vector<std::pair<std::string, Vector>>& legs) {
  std::vector<DensityOperator> parts;
  std::vector<std::string> labels;
  for (const auto& [label, v] : legs) {
    const auto& sub = map.in_layout()[map.in_layout().index_of(label)];
    parts.push_back(DensityOperator::from_pure(PureState(v, SystemLayout({sub}))));
    labels.push_back(label);
  }
  if (labels.size() != map.in_layout().size()) {
    throw LayoutError("product state must cover every map input factor");
  }
  return permute(tensor_all(parts), map.in_layout().labels());
}

}  // namespace

double product_state_fidelity(const KrausMap& map,
                              const std::vector<std::pair<std::string, Vector>>& legs) {
  DensityOperator in = product_input(map, legs);
  DensityOperator out = apply(map, in);
  return (in.matrix() * out.matrix()).trace().real();
}

double local_product_state_fidelity(const KrausMap& map,
                                    const std::vector<std::pair<std::string, Vector>>& legs,
                                    std::size_t leg) {
  if (leg >= legs.size()) throw InputError("unknown leg index");
  DensityOperator out = apply(map, product_input(map, legs));
  const auto& [label, v] = legs[leg];
  DensityOperator reduced = reduced_state(out, {label});
  return v.dot(reduced.matrix() * v).real();
}

}  // namespace mqc
