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

#include <string>

#include <nlohmann/json.hpp>

#include "mqc/bounds.hpp"
#include "mqc/channels.hpp"
#include "mqc/fidelity.hpp"
#include "mqc/protocols.hpp"
#include "mqc/sources.hpp"
#include "mqc/state.hpp"
#include "mqc/sweeps.hpp"

namespace mqc {

using json = nlohmann::json;

/// [{label, dim, role, party?, slot?}]
json to_json(const SystemLayout& layout);
SystemLayout layout_from_json(const json& j);

/// {re: [[...]], im: [[...]]}, row major.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// {layout, re, im, normalization}
json to_json(const DensityOperator& rho);
DensityOperator density_from_json(const json& j);
/// {layout, re, im}
json to_json(const PureState& psi);
PureState pure_state_from_json(const json& j);

/// {in_layout, out_layout, kind, ops: [{re, im}]}
json to_json(const KrausMap& map);
KrausMap kraus_map_from_json(const json& j);
/// Accepts a full map object, a spec object {spec, legs: [labels]} or a
/// bare spec string acting on all of `legs`. Spec legs are looked up in `legs`.
KrausMap map_from_json(const json& j, const SystemLayout& legs);

/// {legs, regime, topology, encodings, channel, decodings, branches?}
json to_json(const Protocol& p);
Protocol protocol_from_json(const json& j);
/// FNV-1a hash of the canonical (compact) protocol JSON.
std::string protocol_hash(const Protocol& p);

json to_json(const ValidationReport& r);
json to_json(const Spectrum& s);
json to_json(const OptimizerStats& s);
json to_json(const FidelityReport& r);
json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const json& j);
json to_json(const CarveResult& r);
json to_json(const TypicalReport& r);
json to_json(const QaepCurve& c);
json to_json(const SweepSummary& s);
json to_json(const ExtractionStep& s);
json to_json(const Extraction& x);
json to_json(const StripResult& r);
json to_json(const FlattenResult& r);
json to_json(const RateReport& r);

}  // namespace mqc
