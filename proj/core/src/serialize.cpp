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

#include "mqc/serialize.hpp"

#include <cstdio>

#include "mqc/errors.hpp"
#include "mqc/random.hpp"

namespace mqc {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("JSON object lacks field '") + key + "'");
  }
  return j.at(key);
}

json matrix_part(const Matrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> labels_from(const json& j) {
  std::vector<std::string> out;
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else {
    for (const auto& l : j) out.push_back(l.get<std::string>());
  }
  return out;
}

json union_layout(const Protocol& p) {
  const auto& enc = p.regime() == Regime::ZeroWay ? p.encodings() : p.branches().front().encodings;
  SystemLayout legs = tensor_maps(enc).in_layout();
  for (const auto& s : p.channel().in_layout().subsystems()) {
    if (!legs.contains(s.label)) legs = SystemLayout::concat(legs, SystemLayout({s}));
  }
  for (const auto& s : p.channel().out_layout().subsystems()) {
    if (!legs.contains(s.label)) legs = SystemLayout::concat(legs, SystemLayout({s}));
  }
  return to_json(legs);
}

json maps_to_json(const std::vector<KrausMap>& maps) {
  json out = json::array();
  for (const auto& m : maps) out.push_back(to_json(m));
  return out;
}

std::vector<KrausMap> maps_from_json(const json& j, const SystemLayout& legs) {
  std::vector<KrausMap> out;
  for (const auto& m : j) out.push_back(map_from_json(m, legs));
  return out;
}

}  // namespace

json to_json(const SystemLayout& layout) {
  json out = json::array();
  for (const auto& s : layout.subsystems()) {
    json e = {{"label", s.label}, {"dim", s.dim}, {"role", std::string(to_string(s.role))}};
    if (s.party >= 0) e["party"] = s.party;
    if (s.slot >= 0) e["slot"] = s.slot;
    out.push_back(std::move(e));
  }
  return out;
}

SystemLayout layout_from_json(const json& j) {
  if (!j.is_array()) throw InputError("layout must be a JSON array");
  std::vector<Subsystem> subs;
  for (const auto& e : j) {
    Subsystem s;
    s.label = field(e, "label").get<std::string>();
    s.dim = field(e, "dim").get<std::size_t>();
    s.role = e.contains("role") ? role_from_string(e.at("role").get<std::string>()) : Role::Reference;
    s.party = e.value("party", -1);
    s.slot = e.value("slot", -1);
    subs.push_back(std::move(s));
  }
  return SystemLayout(std::move(subs));
}

json matrix_to_json(const Matrix& m) {
  return {{"re", matrix_part(m, false)}, {"im", matrix_part(m, true)}};
}

Matrix matrix_from_json(const json& j) {
  const json& re = field(j, "re");
  const json& im = field(j, "im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size()) {
    throw InputError("matrix re/im must be arrays of equal size");
  }
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(re.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& rr = re.at(static_cast<std::size_t>(r));
    const auto& ir = im.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(rr.size()) != cols || static_cast<Eigen::Index>(ir.size()) != cols) {
      throw InputError("matrix rows have unequal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = cplx(rr.at(static_cast<std::size_t>(c)).get<double>(),
                     ir.at(static_cast<std::size_t>(c)).get<double>());
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

Vector vector_from_json(const json& j) {
  const json& re = field(j, "re");
  const json& im = field(j, "im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size()) {
    throw InputError("vector re/im must be arrays of equal size");
  }
  Vector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = cplx(re.at(i).get<double>(), im.at(i).get<double>());
  }
  return v;
}

json to_json(const DensityOperator& rho) {
  json out = matrix_to_json(rho.matrix());
  out["layout"] = to_json(rho.layout());
  out["normalization"] = rho.is_normalized() ? "normalized" : "subnormalized";
  return out;
}

DensityOperator density_from_json(const json& j) {
  Normalization n = Normalization::Normalized;
  if (j.contains("normalization") && j.at("normalization").get<std::string>() == "subnormalized") {
    n = Normalization::Subnormalized;
  }
  return DensityOperator(matrix_from_json(j), layout_from_json(field(j, "layout")), n);
}

json to_json(const PureState& psi) {
  json out = vector_to_json(psi.vector());
  out["layout"] = to_json(psi.layout());
  return out;
}

PureState pure_state_from_json(const json& j) {
  return PureState(vector_from_json(j), layout_from_json(field(j, "layout")));
}

json to_json(const KrausMap& map) {
  json ops = json::array();
  for (const auto& e : map.ops()) ops.push_back(matrix_to_json(e));
  return {{"in_layout", to_json(map.in_layout())},
          {"out_layout", to_json(map.out_layout())},
          {"kind", std::string(to_string(map.kind()))},
          {"ops", ops}};
}

KrausMap kraus_map_from_json(const json& j) {
  std::vector<Matrix> ops;
  for (const auto& e : field(j, "ops")) ops.push_back(matrix_from_json(e));
  return KrausMap(std::move(ops), layout_from_json(field(j, "in_layout")),
                  layout_from_json(field(j, "out_layout")),
                  map_kind_from_string(field(j, "kind").get<std::string>()));
}

KrausMap map_from_json(const json& j, const SystemLayout& legs) {
  if (j.is_string()) return parse_channel_spec(j.get<std::string>(), legs);
  if (j.is_object() && j.contains("ops")) return kraus_map_from_json(j);
  if (j.is_object() && j.contains("spec")) {
    SystemLayout on = j.contains("legs") ? legs.select(labels_from(j.at("legs"))) : legs;
    return parse_channel_spec(j.at("spec").get<std::string>(), on);
  }
  throw InputError("map must be a Kraus map object, a spec object, or a spec string");
}

json to_json(const Protocol& p) {
  json out = {{"legs", union_layout(p)},
              {"regime", std::string(to_string(p.regime()))},
              {"topology", std::string(to_string(p.topology()))},
              {"encodings", maps_to_json(p.encodings())},
              {"channel", to_json(p.channel())},
              {"decodings", maps_to_json(p.decodings())}};
  if (p.regime() == Regime::OneWayForward) {
    json branches = json::array();
    for (const auto& b : p.branches()) {
      branches.push_back({{"encodings", maps_to_json(b.encodings)},
                          {"decodings", maps_to_json(b.decodings)}});
    }
    out["branches"] = std::move(branches);
  }
  return out;
}

Protocol protocol_from_json(const json& j) {
  SystemLayout legs = j.contains("legs") ? layout_from_json(j.at("legs")) : SystemLayout();
  Regime regime = regime_from_string(field(j, "regime").get<std::string>());
  Topology topology = j.contains("topology")
                          ? topology_from_string(j.at("topology").get<std::string>())
                          : Topology::MAC;
  KrausMap channel = map_from_json(field(j, "channel"), legs);
  std::vector<KrausMap> enc, dec;
  if (j.contains("encodings")) enc = maps_from_json(j.at("encodings"), legs);
  if (j.contains("decodings")) dec = maps_from_json(j.at("decodings"), legs);
  std::vector<Branch> branches;
  if (j.contains("branches")) {
    for (const auto& b : j.at("branches")) {
      branches.push_back({maps_from_json(field(b, "encodings"), legs),
                          maps_from_json(field(b, "decodings"), legs)});
    }
  }
  return Protocol(regime, topology, std::move(enc), std::move(channel), std::move(dec),
                  std::move(branches));
}

std::string protocol_hash(const Protocol& p) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json(p).dump())));
  return buf;
}

json to_json(const ValidationReport& r) {
  return {{"declared", std::string(to_string(r.declared))},
          {"tp_deviation", r.tp_deviation},
          {"max_eigenvalue", r.max_eigenvalue},
          {"tp_pass", r.tp_pass},
          {"tni_pass", r.tni_pass},
          {"pass", r.pass}};
}

json to_json(const Spectrum& s) {
  json vectors = json::array();
  for (Eigen::Index c = 0; c < s.vectors.cols(); ++c) vectors.push_back(vector_to_json(s.vectors.col(c)));
  return {{"layout", to_json(s.layout)}, {"eigenvalues", s.eigenvalues}, {"eigenvectors", vectors}};
}

json to_json(const OptimizerStats& s) {
  json out = {{"restarts", s.restarts},
              {"iterations", s.iterations},
              {"spread", s.spread},
              {"converged", s.converged}};
  if (s.grid_value) out["grid_value"] = *s.grid_value;
  return out;
}

json to_json(const FidelityReport& r) {
  json out = {{"value", r.value},
              {"kind", r.kind == FidelityKind::Entanglement ? "entanglement" : "subspace-min"},
              {"scope", r.global ? "global" : "local"}};
  if (r.leg) {
    out["leg"] = *r.leg;
    out["leg_label"] = r.leg_label;
  }
  if (!r.witness.empty()) {
    json w = json::array();
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
      json e = vector_to_json(r.witness[i]);
      if (i < r.witness_labels.size()) e["label"] = r.witness_labels[i];
      w.push_back(std::move(e));
    }
    out["witness"] = std::move(w);
  }
  if (r.stats) out["optimizer"] = to_json(*r.stats);
  return out;
}

json to_json(const BoundReport& r) {
  return {{"name", r.name},   {"lhs", r.lhs},   {"rhs", r.rhs},
          {"margin", r.margin}, {"pass", r.pass}, {"inconclusive", r.inconclusive},
          {"witness", r.witness}};
}

BoundReport bound_report_from_json(const json& j) {
  BoundReport r;
  r.name = field(j, "name").get<std::string>();
  r.lhs = field(j, "lhs").get<double>();
  r.rhs = field(j, "rhs").get<double>();
  r.margin = field(j, "margin").get<double>();
  r.pass = field(j, "pass").get<bool>();
  r.inconclusive = j.value("inconclusive", false);
  r.witness = j.value("witness", json::object());
  return r;
}

json to_json(const CarveResult& r) {
  json kept = json::array();
  for (const auto& b : r.kept_basis) kept.push_back(matrix_to_json(b));
  return {{"legs", r.legs},
          {"kept_basis", kept},
          {"kept_weight", r.kept_weight},
          {"removed_count", r.removed_count},
          {"support_dim", r.support_dim},
          {"certified_bound", r.certified_bound},
          {"measured_Fs", r.measured_Fs},
          {"dims", r.dims},
          {"log2_dims", r.log2_dims},
          {"local_eta", r.local_eta},
          {"measured_local_Fe", r.measured_local_Fe},
          {"measured_report", to_json(r.measured_report)},
          {"certified_holds", r.certified_holds}};
}

json to_json(const TypicalReport& r) {
  json out = {{"n", r.n},
              {"epsilon", r.epsilon},
              {"window", {r.window_lo, r.window_hi}},
              {"log2_window", {r.log2_window_lo, r.log2_window_hi}},
              {"typical_dim", r.typical_dim},
              {"mass", r.mass}};
  if (r.typical_dim > 0.0) out["log2_typical_dim"] = r.log2_typical_dim;
  return out;
}

json to_json(const QaepCurve& c) {
  json points = json::array();
  for (const auto& p : c.points) points.push_back(to_json(p));
  json pass = json::array();
  for (const auto& [d, n] : c.pass_at) {
    pass.push_back({{"delta", d}, {"n", n ? json(*n) : json(nullptr)}});
  }
  return {{"epsilon", c.epsilon}, {"points", points}, {"qaep_pass_at", pass}};
}

json to_json(const SweepSummary& s) {
  return {{"suite", s.suite},
          {"family", s.family},
          {"instances", s.instances},
          {"min_margin", s.min_margin},
          {"violations", s.violations},
          {"inconclusive", s.inconclusive},
          {"seconds", s.seconds}};
}

json to_json(const ExtractionStep& s) {
  return {{"leg", s.leg},
          {"branch", s.branch},
          {"scores", s.scores},
          {"reduced_fidelity_before", s.reduced_fidelity_before},
          {"reduced_fidelity_after", s.reduced_fidelity_after},
          {"support_rank", s.support_rank}};
}

json to_json(const Extraction& x) {
  json isos = json::array();
  for (const auto& w : x.isometries) {
    json e = matrix_to_json(w.matrix());
    e["in_layout"] = to_json(w.in_layout());
    e["out_layout"] = to_json(w.out_layout());
    e["idempotency_error"] = w.idempotency_error();
    isos.push_back(std::move(e));
  }
  json steps = json::array();
  for (const auto& s : x.steps) steps.push_back(to_json(s));
  return {{"isometries", isos},
          {"normalization", x.normalization},
          {"fidelity_before", x.fidelity_before},
          {"eta", x.eta},
          {"fidelity_after", x.fidelity_after},
          {"fidelity_embedded", x.fidelity_embedded},
          {"bound", x.bound},
          {"weak_guarantee", x.weak_guarantee},
          {"steps", steps}};
}

json to_json(const StripResult& r) {
  json inputs = json::array();
  for (const auto& s : r.inputs) inputs.push_back(to_json(s));
  return {{"inputs", inputs},
          {"protocol", to_json(r.protocol)},
          {"extra_decodings", maps_to_json(r.extra_decodings)},
          {"branches", r.branches},
          {"branch_probabilities", r.branch_probabilities},
          {"original_fidelity", r.original_fidelity},
          {"epsilon", r.epsilon},
          {"branch_fidelity", r.branch_fidelity},
          {"stripped_fidelity", r.stripped_fidelity},
          {"marginal_mismatch", r.marginal_mismatch},
          {"entropy_original", r.entropy_original},
          {"entropy_stripped", r.entropy_stripped},
          {"product_purification", to_json(r.product_purification)},
          {"entropy", to_json(r.entropy)}};
}

json to_json(const FlattenResult& r) {
  json out = {{"protocol", to_json(r.protocol)},
              {"branch", r.branch},
              {"raw_fidelity", r.raw_fidelity},
              {"probability", r.probability},
              {"conditional", r.conditional},
              {"ensemble_fidelity", r.ensemble_fidelity},
              {"conditional_fidelity", r.conditional_fidelity},
              {"zero_way_fidelity", r.zero_way_fidelity}};
  if (r.extraction) out["extraction"] = to_json(*r.extraction);
  if (r.extracted) out["extracted_protocol"] = to_json(*r.extracted);
  return out;
}

json to_json(const RateReport& r) {
  return {{"n", r.n},
          {"legs", r.legs},
          {"entanglement_rate", r.entanglement_rate},
          {"subspace_rate", r.subspace_rate}};
}

}  // namespace mqc
