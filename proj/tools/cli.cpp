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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "mqc/errors.hpp"
#include "mqc/protocols.hpp"
#include "mqc/serialize.hpp"
#include "mqc/sources.hpp"
#include "mqc/sweeps.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc::cli {

namespace {

constexpr const char* kToolVersion = "mqc 0.1.0";

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Reports {
 public:
  Reports(const RunConfig& config)
      : jsonl_(open(config, config.command + ".jsonl")),
        csv_(open(config, config.command + "_summary.csv")) {
    json header = {{"type", "header"},
                   {"tool", kToolVersion},
                   {"command", config.command},
                   {"timestamp", utc_timestamp()}};
    header["seed"] = config.seed ? json(*config.seed) : json(nullptr);
    jsonl_ << header.dump() << '\n';
    csv_ << "suite,instances,min_margin,violations,seconds\n";
  }

  void line(const json& j) { jsonl_ << j.dump() << '\n'; }

  void summary(const std::string& suite, std::size_t instances, std::optional<double> min_margin,
               std::size_t violations, double seconds) {
    csv_ << suite << ',' << instances << ',' << (min_margin ? format_double(*min_margin) : "")
         << ',' << violations << ',' << format_double(seconds) << '\n';
  }

 private:
  static std::ofstream open(const RunConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.out_dir);
    std::ofstream out(config.out_dir / name);
    if (!out) throw InputError("cannot write '" + (config.out_dir / name).string() + "'");
    return out;
  }

  std::ofstream jsonl_;
  std::ofstream csv_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double tolerance(const RunConfig& c, const std::string& key, double fallback) {
  auto it = c.tolerances.find(key);
  return it == c.tolerances.end() ? fallback : it->second;
}

Protocol load_protocol(const RunConfig& c) {
  if (c.protocol_path.empty()) throw InputError(c.command + " needs --protocol");
  return protocol_from_json(read_json(c.protocol_path));
}

SystemLayout leg_layout(const Protocol& p) {
  const auto& enc = p.regime() == Regime::ZeroWay ? p.encodings() : p.branches().front().encodings;
  return tensor_maps(enc).in_layout();
}

PureState max_entangled(const Subsystem& leg, const std::string& reference) {
  const std::size_t d = leg.dim;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i * d + i)) = 1.0;
  return PureState::normalized(v, SystemLayout({{reference, d, Role::Reference}, leg}));
}

PureState input_from_json(const json& j, const SystemLayout& legs) {
  if (j.contains("layout")) return pure_state_from_json(j);
  if (j.contains("max_entangled")) {
    const json& m = j.at("max_entangled");
    const std::string leg = m.at("leg").get<std::string>();
    return max_entangled(legs[legs.index_of(leg)], m.at("reference").get<std::string>());
  }
  if (j.contains("purify")) {
    return purify(density_from_json(j.at("purify")), j.at("reference").get<std::string>());
  }
  throw InputError("input entry must be a pure state, {max_entangled} or {purify}");
}

// Without an inputs file every encoder factor is maximally entangled with
// its own reference "ref:<label>".
std::vector<PureState> default_inputs(const Protocol& p) {
  SystemLayout legs = leg_layout(p);
  std::vector<PureState> out;
  for (const auto& group : p.sender_legs()) {
    std::vector<PureState> parts;
    for (const auto& l : group) parts.push_back(max_entangled(legs[legs.index_of(l)], "ref:" + l));
    out.push_back(tensor_all(parts));
  }
  return out;
}

std::vector<PureState> load_inputs(const RunConfig& c, const Protocol& p) {
  if (c.inputs_path.empty()) return default_inputs(p);
  json j = read_json(c.inputs_path);
  if (j.is_object() && j.contains("inputs")) j = j.at("inputs");
  if (!j.is_array()) throw InputError("inputs must be a JSON array");
  SystemLayout legs = leg_layout(p);
  std::vector<PureState> out;
  for (const auto& e : j) out.push_back(input_from_json(e, legs));
  return out;
}

int verify_lemmas(const RunConfig& c, Reports& reports) {
  std::vector<std::string> suites = c.suites.empty() ? lemma_suites() : c.suites;
  int status = kPass;
  for (const auto& suite : suites) {
    SweepConfig sc;
    sc.seed = *c.seed;
    auto it = c.instance_counts.find(suite);
    sc.instances = it == c.instance_counts.end() ? c.instances : it->second;
    SweepSummary s = run_lemma_sweep(suite, sc, [&](std::size_t index, std::uint64_t seed,
                                                    const BoundReport& r) {
      json line = to_json(r);
      if (r.pass) line.erase("witness");
      line["type"] = "report";
      line["suite"] = suite;
      line["index"] = index;
      line["instance_seed"] = seed;
      reports.line(line);
    });
    json sj = to_json(s);
    sj.erase("seconds");
    sj["type"] = "summary";
    reports.line(sj);
    reports.summary(s.suite, s.instances, s.min_margin, s.violations, s.seconds);
    if (s.violations > 0) status = kViolation;
  }
  return status;
}

int fidelity(const RunConfig& c, Reports& reports, bool full_run) {
  const auto start = std::chrono::steady_clock::now();
  Protocol p = load_protocol(c);
  std::vector<PureState> inputs = load_inputs(c, p);
  ProtocolRun run = run_protocol(p, inputs);
  json line = {{"type", full_run ? "protocol_run" : "fidelity"},
               {"protocol_hash", protocol_hash(p)},
               {"global", to_json(run.global)}};
  json locals = json::array();
  for (const auto& r : run.local) locals.push_back(to_json(r));
  line["local"] = std::move(locals);
  if (p.regime() == Regime::ZeroWay) {
    KrausMap a = compose(tensor_maps(p.decodings()), p.channel());
    double kraus = entanglement_fidelity_kraus(leg_sources(p, inputs), a, p.encodings()).value;
    line["kraus_form"] = kraus;
    line["kraus_form_difference"] = std::abs(kraus - run.global.value);
  }
  if (full_run) {
    line["output"] = to_json(run.output);
    line["rates"] = to_json(rates(p, leg_sources(p, inputs), c.block_length));
  }
  reports.line(line);
  reports.summary(c.command, 1, std::nullopt, 0, seconds_since(start));
  return kPass;
}

StripOptions strip_options(const RunConfig& c) {
  StripOptions o;
  if (c.branch_policy == "fixed") {
    o.policy = BranchPolicy::Fixed;
    o.fixed_branches = c.fixed_branches;
  } else if (c.branch_policy != "highest-probability") {
    throw InputError("unknown branch policy '" + c.branch_policy + "'");
  }
  if (c.matching == "output") {
    o.target = MatchingTarget::OutputPurification;
  } else if (c.matching != "source") {
    throw InputError("unknown matching target '" + c.matching + "'");
  }
  o.branch_floor = tolerance(c, "branch_floor", o.branch_floor);
  return o;
}

int transform(const RunConfig& c, Reports& reports) {
  const auto start = std::chrono::steady_clock::now();
  Protocol p = load_protocol(c);
  std::vector<PureState> inputs = load_inputs(c, p);
  json provenance = {{"input_hash", protocol_hash(p)},
                     {"seed", c.seed ? json(*c.seed) : json(nullptr)},
                     {"kind", c.kind}};
  json line = {{"type", "transform"}, {"kind", c.kind}};
  std::optional<Protocol> produced;
  std::optional<double> margin;
  std::size_t violations = 0;
  auto note = [&](double m, bool pass) {
    margin = margin ? std::min(*margin, m) : m;
    if (!pass) ++violations;
  };
  try {
    if (c.kind == "extract") {
      ExtractionOptions o;
      o.slack = tolerance(c, "extraction_slack", o.slack);
      provenance["policy"] = {{"slack", o.slack}, {"support_cutoff", o.support_cutoff}};
      ExtractionResult r = extract_isometric_encodings(p, inputs, o);
      line["result"] = to_json(r.extraction);
      line["fidelity"] = to_json(r.report);
      note(r.extraction.fidelity_after - r.extraction.bound, true);
      produced = r.protocol;
    } else if (c.kind == "strip") {
      StripOptions o = strip_options(c);
      provenance["policy"] = {{"branch_policy", c.branch_policy},
                              {"matching", c.matching},
                              {"branch_floor", o.branch_floor}};
      StripResult r = strip_encodings(p, inputs, o);
      line["result"] = to_json(r);
      for (const auto* b : {&r.product_purification, &r.entropy}) {
        if (!b->inconclusive) note(b->margin, b->pass);
      }
      produced = r.protocol;
    } else if (c.kind == "flatten") {
      FlattenOptions o;
      o.chain_extraction = c.chain;
      o.branch_floor = tolerance(c, "branch_floor", o.branch_floor);
      o.extraction.slack = tolerance(c, "extraction_slack", o.extraction.slack);
      provenance["policy"] = {{"chain", o.chain_extraction}, {"branch_floor", o.branch_floor}};
      FlattenResult r = flatten_one_way(p, inputs, o);
      line["result"] = to_json(r);
      line["branch"] = r.branch;
      const double m = r.conditional_fidelity - r.ensemble_fidelity;
      note(m, m >= -1e-12);
      if (r.extraction) note(r.extraction->fidelity_after - r.extraction->bound, true);
      produced = r.extracted ? *r.extracted : r.protocol;
    } else {
      throw InputError("transform --kind must be extract, strip or flatten");
    }
  } catch (const VerificationError& e) {
    line["provenance"] = provenance;
    line["violation"] = e.what();
    reports.line(line);
    reports.summary("transform:" + c.kind, 1, std::nullopt, 1, seconds_since(start));
    return kViolation;
  }
  line["provenance"] = provenance;
  line["protocol"] = to_json(*produced);
  reports.line(line);
  std::ofstream out(c.out_dir / "transform_protocol.json");
  out << to_json(*produced).dump(2) << '\n';
  reports.summary("transform:" + c.kind, 1, margin, violations, seconds_since(start));
  return violations > 0 ? kViolation : kPass;
}

int typical(const RunConfig& c, Reports& reports) {
  const auto start = std::chrono::steady_clock::now();
  const TypicalConfig& t = c.typical;
  std::optional<DensityOperator> base;
  if (!t.source_path.empty()) {
    base = density_from_json(read_json(t.source_path));
  } else if (!t.spectrum.empty()) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(t.spectrum.size()),
                            static_cast<Eigen::Index>(t.spectrum.size()));
    for (std::size_t i = 0; i < t.spectrum.size(); ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = t.spectrum[i];
    }
    base = DensityOperator(m, SystemLayout::single("s", t.spectrum.size()));
  } else {
    throw InputError("typical needs --spectrum or --source");
  }
  IIDSource src(*base);
  std::vector<std::size_t> ns = t.ns;
  if (ns.empty()) {
    for (std::size_t n = 1; n <= 100; ++n) ns.push_back(n);
  }
  QaepCurve curve = qaep_mass_curve(src, t.epsilon, ns, t.deltas);
  std::size_t violations = 0;
  for (const auto& r : curve.points) {
    json line = to_json(r);
    line["type"] = "typical";
    if (r.n <= t.matrix_check_max_n) {
      TypicalReport m = typical_projector(src, r.n, t.epsilon).report;
      const bool agree = m.typical_dim == r.typical_dim && std::abs(m.mass - r.mass) <= 1e-12;
      line["matrix_path"] = {{"typical_dim", m.typical_dim}, {"mass", m.mass}, {"agree", agree}};
      if (!agree) ++violations;
    }
    reports.line(line);
  }
  json q = to_json(curve);
  q.erase("points");
  q["type"] = "qaep";
  q["entropy"] = src.entropy();
  reports.line(q);
  std::ofstream csv(c.out_dir / "typical.csv");
  write_typical_csv(csv, curve.points);
  reports.summary("typical", curve.points.size(), std::nullopt, violations, seconds_since(start));
  return violations > 0 ? kViolation : kPass;
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const std::vector<std::string>& tolerance_keys() {
  static const std::vector<std::string> keys{"extraction_slack", "branch_floor"};
  return keys;
}

RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  RunConfig c;
  try {
    read_if(j, "command", c.command);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    read_if(j, "instances", c.instances);
    read_if(j, "instance_counts", c.instance_counts);
    read_if(j, "suites", c.suites);
    read_if(j, "tolerances", c.tolerances);
    read_if(j, "kind", c.kind);
    read_if(j, "chain", c.chain);
    read_if(j, "branch_policy", c.branch_policy);
    read_if(j, "fixed_branches", c.fixed_branches);
    read_if(j, "matching", c.matching);
    read_if(j, "block_length", c.block_length);
    auto path = [&](const char* key, std::filesystem::path& out) {
      if (!j.contains(key)) return;
      std::filesystem::path p = j.at(key).get<std::string>();
      out = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    path("protocol", c.protocol_path);
    path("inputs", c.inputs_path);
    path("out", c.out_dir);
    if (j.contains("typical")) {
      const json& t = j.at("typical");
      read_if(t, "spectrum", c.typical.spectrum);
      read_if(t, "epsilon", c.typical.epsilon);
      read_if(t, "n", c.typical.ns);
      read_if(t, "deltas", c.typical.deltas);
      read_if(t, "matrix_check_max_n", c.typical.matrix_check_max_n);
      if (t.contains("source")) {
        std::filesystem::path p = t.at("source").get<std::string>();
        c.typical.source_path = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).string();
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad config field: ") + e.what());
  }
  return c;
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands{"verify-lemmas", "fidelity", "protocol-run",
                                                 "transform", "typical"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    throw InputError("unknown command '" + c.command + "'");
  }
  if (c.command == "verify-lemmas") {
    if (!c.seed) throw InputError("verify-lemmas needs a seed");
    for (const auto& s : c.suites) suite_family(s);
    for (const auto& [s, n] : c.instance_counts) suite_family(s);
  }
  for (const auto& [key, value] : c.tolerances) {
    if (std::find(tolerance_keys().begin(), tolerance_keys().end(), key) == tolerance_keys().end()) {
      throw InputError("unknown tolerance '" + key + "'");
    }
    if (!(value >= std::numeric_limits<double>::epsilon())) {
      throw InputError("tolerance '" + key + "' must be at least machine epsilon");
    }
  }
  if (c.command == "typical" && !(c.typical.epsilon >= 0.0)) {
    throw InputError("epsilon must be non-negative");
  }
  if (c.block_length == 0) throw InputError("block length must be at least 1");
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    validate(config);
    Reports reports(config);
    if (config.command == "verify-lemmas") return verify_lemmas(config, reports);
    if (config.command == "fidelity") return fidelity(config, reports, false);
    if (config.command == "protocol-run") return fidelity(config, reports, true);
    if (config.command == "transform") return transform(config, reports);
    return typical(config, reports);
  } catch (const InputError& e) {
    log << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const NotImplemented& e) {
    log << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    log << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const VerificationError& e) {
    log << "verification failed: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace mqc::cli
