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
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "instances.hpp"
#include "mqc/bounds.hpp"
#include "mqc/channels.hpp"
#include "mqc/errors.hpp"
#include "mqc/fidelity.hpp"
#include "mqc/linalg.hpp"
#include "mqc/protocols.hpp"
#include "mqc/random.hpp"
#include "mqc/sources.hpp"
#include "mqc/sweeps.hpp"
#include "mqc/tensor_ops.hpp"
#include "oracles.hpp"

namespace {

using namespace mqc;
namespace orc = mqc::oracle;

constexpr std::uint64_t kSeed = 20240607;

// Pinned tolerances, one per check.
constexpr double kFidelityAgreement = 1e-9;
constexpr double kPurificationSpread = 1e-9;
constexpr double kAnalytic = 1e-9;
constexpr double kMinimizer = 1e-6;
constexpr double kGrid = 1e-4;
constexpr double kLemmaMargin = 1e-9;
constexpr double kLemma7 = 1e-9;
constexpr double kReduceLeg = 1e-9;
constexpr double kIdempotent = 1e-9;
constexpr double kExtractionSlack = 1e-7;
constexpr double kEmbedding = 1e-10;
constexpr double kPigeonhole = 1e-12;
constexpr double kStripUnitary = 1e-9;
constexpr double kStripFactor = 10.0;
constexpr double kTypicalMass = 1e-12;
constexpr double kFrozenMass = 1e-9;
constexpr double kCarve = 1e-6;
constexpr double kOracleAgreement = 1e-9;

// Frozen from tests/oracles/typical_binomial.py (diag(0.9, 0.1), eps 0.15).
constexpr std::size_t kQaepCrossing = 258;
constexpr double kQaepMassAtCrossing = 0.99085606173147007658;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

orc::Dense product_source(const std::vector<DensityOperator>& sources) {
  std::vector<orc::Dense> parts;
  for (const auto& s : sources) parts.push_back(s.matrix());
  return orc::kron_all(parts);
}

orc::Ops tensor_ops(const std::vector<KrausMap>& maps) {
  std::vector<orc::Ops> parts;
  for (const auto& m : maps) parts.push_back(m.ops());
  return orc::tensor(parts);
}

// D o channel o (x) enc for one branch, assembled by the oracle.
orc::Ops chain_ops(const std::vector<KrausMap>& enc, const KrausMap& channel,
                   const std::vector<KrausMap>& dec) {
  return orc::compose(tensor_ops(dec), orc::compose(channel.ops(), tensor_ops(enc)));
}

// Marginal of a two-factor pure state on `label`.
orc::Dense leg_marginal(const PureState& psi, const std::string& label) {
  const SystemLayout& l = psi.layout();
  if (l.size() != 2) throw InputError("leg_marginal expects two factors");
  const orc::Dense rho = psi.vector() * psi.vector().adjoint();
  return l[0].label == label ? orc::trace_second(rho, l[0].dim, l[1].dim)
                             : orc::trace_first(rho, l[0].dim, l[1].dim);
}

Outcome criterion1() {
  Rng rng(derive_seed(kSeed, 1));
  double worst = 0.0, worst_oracle = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::size_t k = 1 + i % 3;
    testing::Instance inst = testing::random_mac(k, 4, rng);
    const Protocol& p = inst.protocol;
    const double direct = entanglement_fidelity(inst.inputs, p.end_to_end()).value;
    const KrausMap noise = compose(tensor_maps(p.decodings()), p.channel());
    const double kraus = entanglement_fidelity_kraus(inst.sources, noise, p.encodings()).value;
    const double oracle = orc::entanglement_fidelity(
        chain_ops(p.encodings(), p.channel(), p.decodings()), product_source(inst.sources));
    worst = std::max(worst, std::abs(direct - kraus));
    worst_oracle = std::max(worst_oracle, std::abs(direct - oracle));
  }
  double spread = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t k = 1 + i % 3;
    testing::Instance inst = testing::random_mac(k, 4, rng);
    const KrausMap e2e = inst.protocol.end_to_end();
    std::vector<PureState> other;
    for (std::size_t l = 0; l < k; ++l) {
      const std::string ref = "R" + std::to_string(l + 1);
      PureState wide = purify(inst.sources[l], ref, 4);
      Vector v = apply_local(random_unitary(4, rng), {ref}, wide.vector(), wide.layout());
      other.emplace_back(v, wide.layout());
    }
    spread = std::max(spread, std::abs(entanglement_fidelity(inst.inputs, e2e).value -
                                       entanglement_fidelity(other, e2e).value));
  }
  Outcome o;
  o.pass = worst <= kFidelityAgreement && spread <= kPurificationSpread &&
           worst_oracle <= kOracleAgreement;
  o.detail = fmt("max|F_e - F_kraus| = %.2e over 1000, purification spread = %.2e over 100, "
                 "dense oracle gap = %.2e",
                 worst, spread, worst_oracle);
  return o;
}

Outcome criterion2() {
  Outcome o;
  // Phi+ on (R, A) and a Pauli-twirl Kraus set built independently.
  const SystemLayout leg = testing::sender_leg(0, 2);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  PureState phi(bell, SystemLayout({{"R1", 2, Role::Reference}, leg[0]}));
  orc::Dense x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  z << 1, 0, 0, -1;
  double worst_fe = 0.0;
  for (double p : {0.0, 0.2, 1.0}) {
    const double lib = entanglement_fidelity({phi}, standard_channel(StandardChannel::Depolarizing,
                                                                     p, leg))
                           .value;
    orc::Ops pauli{std::sqrt(1.0 - 3.0 * p / 4.0) * orc::Dense::Identity(2, 2),
                   std::sqrt(p / 4.0) * x, std::sqrt(p / 4.0) * y, std::sqrt(p / 4.0) * z};
    // <Phi| (I (x) K) |Phi><Phi| (I (x) K^dagger) |Phi> on the 4x4 space.
    double direct = 0.0;
    for (const auto& k : pauli) {
      orc::Dense full = orc::kron(orc::Dense::Identity(2, 2), k);
      direct += std::norm(bell.dot(full * bell));
    }
    worst_fe = std::max({worst_fe, std::abs(lib - (1.0 - 3.0 * p / 4.0)), std::abs(lib - direct)});
  }
  double worst_min = 0.0, worst_grid = 0.0;
  std::string error;
  for (double p : {0.1, 0.25, 0.5}) {
    try {
      FidelityReport r = min_subspace_fidelity({Subspace::full(leg[0])},
                                               standard_channel(StandardChannel::Dephasing, p, leg));
      worst_min = std::max(worst_min, std::abs(r.value - (1.0 - p)));
      const double grid = r.stats && r.stats->grid_value ? *r.stats->grid_value
                                                         : std::numeric_limits<double>::infinity();
      worst_grid = std::max(worst_grid, std::abs(grid - (1.0 - p)));
    } catch (const Error& e) {
      error = e.what();
    }
  }
  o.pass = error.empty() && worst_fe <= kAnalytic && worst_min <= kMinimizer && worst_grid <= kGrid;
  o.detail = fmt("depolarizing F_e error %.2e at p in {0,0.2,1}; dephasing F_s minimizer error "
                 "%.2e, grid error %.2e at p in {0.1,0.25,0.5}",
                 worst_fe, worst_min, worst_grid) +
             (error.empty() ? "" : "; " + error);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::string parts;
  for (const char* suite :
       {"lemma1", "lemma2", "lemma5", "lemma6", "lemma8", "alpha_inequality"}) {
    SweepSummary s = run_lemma_sweep(suite, {.seed = 7, .instances = 10000});
    const bool ok = s.violations == 0 && s.min_margin >= -kLemmaMargin;
    o.pass = o.pass && ok;
    parts += fmt("%s %zu/%zu%s; ", suite, s.violations, s.instances,
                 s.inconclusive ? fmt(" (%zu inconclusive)", s.inconclusive).c_str() : "");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail = "violations " + parts + fmt("%.1f s", seconds);
  return o;
}

Outcome criterion4() {
  Rng rng(derive_seed(kSeed, 4));
  Outcome o;
  double min_margin = std::numeric_limits<double>::infinity(), worst_gap = 0.0, max_eps = 0.0;
  for (std::size_t n = 0; n < 1000; ++n) {
    const std::size_t k = 2 + n % 2;
    std::vector<Subsystem> subs;
    std::vector<std::vector<std::string>> groups;
    std::vector<Vector> phis;
    for (std::size_t i = 0; i < k; ++i) {
      const std::string a = "a" + std::to_string(i + 1), b = "b" + std::to_string(i + 1);
      subs.push_back({a, 2, Role::SenderLeg, static_cast<int>(i), 0});
      subs.push_back({b, 2, Role::SenderLeg, static_cast<int>(i), 1});
      groups.push_back({a, b});
      phis.push_back(random_unit_vector(4, rng));
    }
    SystemLayout layout(subs);
    const Vector big = kron_all(phis);
    const double t = rng.uniform(0.0, 0.02);
    const Matrix sigma = random_density(layout, 0, rng).matrix();
    DensityOperator rho((1.0 - t) * big * big.adjoint() + t * sigma, layout);
    const double eps = 1.0 - big.dot(rho.matrix() * big).real();
    max_eps = std::max(max_eps, eps);
    ProductPurification pp = product_purification(rho, groups, phis);
    // Project each C_i onto |0> and evaluate the overlap densely.
    std::vector<orc::Dense> chis;
    for (std::size_t i = 0; i < k; ++i) {
      PureState f = permute(pp.factors[i], {groups[i][0], groups[i][1], pp.ancilla_labels[i]});
      const auto dc = static_cast<Eigen::Index>(f.layout()[2].dim);
      orc::Dense chi(4, 1);
      for (Eigen::Index j = 0; j < 4; ++j) chi(j, 0) = f.vector()(j * dc);
      chis.push_back(chi);
    }
    const orc::Dense chi = orc::kron_all(chis);
    const double overlap = (chi.adjoint() * rho.matrix() * chi)(0, 0).real();
    const double margin = overlap - (1.0 - (2.0 * k + 4.0) * eps);
    min_margin = std::min(min_margin, margin);
    worst_gap = std::max(worst_gap, std::abs(overlap - pp.report.lhs));
    if (margin < -kLemma7) o.pass = false;
  }
  if (worst_gap > kOracleAgreement) o.pass = false;
  o.detail = fmt("1000 instances k in {2,3}, max eps %.4f: min overlap margin %.3e, "
                 "report vs dense overlap gap %.2e",
                 max_eps, min_margin, worst_gap);
  return o;
}

Outcome criterion5() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 5));
  double worst_reduce = 0.0;
  for (std::size_t n = 0; n < 500; ++n) {
    const std::size_t k = 2 + n % 2;
    std::vector<KrausMap> enc;
    for (std::size_t i = 0; i < k; ++i) {
      enc.push_back(random_channel(testing::sender_leg(i, 2), testing::sender_leg(i, 2),
                                   1 + rng.index(2), rng.next()));
    }
    const SystemLayout all = testing::sender_legs(k, 2);
    const KrausMap noise = random_channel(all, all, 1 + rng.index(4), rng.next());
    std::vector<DensityOperator> src = testing::random_sources(k, 2, rng);
    const double total =
        orc::entanglement_fidelity(orc::compose(noise.ops(), tensor_ops(enc)), product_source(src));
    for (std::size_t t = 0; t < k; ++t) {
      const KrausMap reduced = reduce_leg(noise, enc, src, t);
      const double single =
          orc::entanglement_fidelity(orc::compose(reduced.ops(), enc[t].ops()), src[t].matrix());
      worst_reduce = std::max(worst_reduce, std::abs(total - single));
    }
  }
  if (worst_reduce > kReduceLeg) o.pass = false;

  std::size_t accepted = 0, attempts = 0, supported = 0, weak = 0;
  double worst_idem = 0.0, min_slack = std::numeric_limits<double>::infinity(), worst_embed = 0.0,
         worst_lib = 0.0, max_eta = 0.0;
  std::string error;
  while (accepted < 200 && attempts < 2000) {
    ++attempts;
    const std::size_t k = 1 + attempts % 2;
    const double s = rng.uniform(0.0, 0.004), q = rng.uniform(0.0, 0.003);
    std::vector<KrausMap> enc, dec;
    SystemLayout xs;
    for (std::size_t i = 0; i < k; ++i) {
      const SystemLayout a = testing::sender_leg(i, 2);
      const SystemLayout x({{"X" + std::to_string(i + 1), 3, Role::SenderLeg, static_cast<int>(i), 0}});
      const Matrix w = random_isometry(3, 2, rng);
      enc.push_back(testing::noisy_isometry(w, random_isometry(3, 2, rng), s, a, x));
      dec.push_back(tp_completion(KrausMap({w.adjoint()}, x, a, MapKind::TraceNonIncreasing),
                                  DensityOperator::maximally_mixed(a)));
      xs = SystemLayout::concat(xs, x);
    }
    const KrausMap noise = compose(tensor_maps(dec), testing::noisy_identity(xs, q, 2, rng));
    std::vector<DensityOperator> src = testing::random_sources(k, 2, rng);
    Extraction ex;
    try {
      ex = extract_isometries(noise, enc, src);
    } catch (const VerificationError& e) {
      error = e.what();
      o.pass = false;
      continue;
    }
    if (ex.eta > 0.01) continue;
    ++accepted;
    max_eta = std::max(max_eta, ex.eta);
    if (ex.weak_guarantee) ++weak;
    orc::Ops ws;
    std::vector<orc::Ops> iso;
    bool all_supported = true;
    for (std::size_t i = 0; i < k; ++i) {
      const PartialIsometry& w = ex.isometries[i];
      worst_idem = std::max(worst_idem, w.idempotency_error());
      iso.push_back({w.matrix()});
      const orc::Dense off = orc::Dense::Identity(2, 2) - w.matrix().adjoint() * w.matrix();
      if ((off * src[i].matrix()).trace().real() > 1e-12) all_supported = false;
    }
    const orc::Dense rho = product_source(src);
    const double after = orc::entanglement_fidelity(orc::compose(noise.ops(), orc::tensor(iso)), rho);
    const double bound = 1.0 - std::pow(2.0, static_cast<double>(k)) * ex.eta;
    min_slack = std::min(min_slack, after - bound);
    worst_lib = std::max(worst_lib, std::abs(after - ex.fidelity_after));
    if (after < bound - kExtractionSlack) o.pass = false;
    if (all_supported) {
      ++supported;
      const double embedded =
          orc::entanglement_fidelity(orc::compose(noise.ops(), tensor_ops(ex.encodings)), rho);
      worst_embed = std::max({worst_embed, std::abs(embedded - after),
                              std::abs(ex.fidelity_embedded - ex.fidelity_after)});
    }
  }
  if (accepted < 200 || worst_idem > kIdempotent || worst_embed > kEmbedding ||
      worst_lib > kOracleAgreement || supported == 0) {
    o.pass = false;
  }
  o.detail = fmt("reduce_leg max gap %.2e over 500; %zu extractions (eta <= %.4f, %zu weak): "
                 "idempotency %.2e, min F_e - (1 - 2^k eta) = %.3e, embedding gap %.2e on %zu "
                 "supported, oracle gap %.2e",
                 worst_reduce, accepted, max_eta, weak, worst_idem, min_slack, worst_embed,
                 supported, worst_lib) +
             (error.empty() ? "" : "; " + error);
  return o;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 6));
  double min_gap = std::numeric_limits<double>::infinity(),
         min_slack = std::numeric_limits<double>::infinity(), worst_oracle = 0.0;
  std::size_t not_tp = 0, errors = 0;
  std::string error;
  for (std::size_t n = 0; n < 1000; ++n) {
    const std::size_t k = 1 + (n / 2) % 2;
    testing::Instance inst = testing::random_one_way(k, n % 2 == 0, rng);
    const Protocol& p = inst.protocol;
    FlattenOptions opts;
    opts.chain_extraction = true;
    FlattenResult r = [&]() -> FlattenResult {
      try {
        return flatten_one_way(p, inst.inputs, opts);
      } catch (const VerificationError& e) {
        error = e.what();
        ++errors;
        opts.chain_extraction = false;
        return flatten_one_way(p, inst.inputs, opts);
      }
    }();
    min_gap = std::min(min_gap, r.conditional_fidelity - r.ensemble_fidelity);
    const orc::Dense rho = product_source(inst.sources);
    double ensemble = 0.0;
    for (const auto& b : p.branches()) {
      ensemble += orc::entanglement_fidelity(chain_ops(b.encodings, p.channel(), b.decodings), rho);
    }
    worst_oracle = std::max(worst_oracle, std::abs(ensemble - r.ensemble_fidelity));
    if (!r.extracted || !r.extraction) continue;
    const Protocol& z = *r.extracted;
    bool tp = z.regime() == Regime::ZeroWay && validate(z.channel()).tp_pass;
    for (const auto& m : z.encodings()) tp = tp && m.is_trace_preserving() && validate(m).tp_pass;
    for (const auto& m : z.decodings()) tp = tp && m.is_trace_preserving() && validate(m).tp_pass;
    if (!tp) ++not_tp;
    const double f =
        orc::entanglement_fidelity(chain_ops(z.encodings(), z.channel(), z.decodings()), rho);
    min_slack = std::min(
        min_slack, f - (1.0 - std::pow(2.0, static_cast<double>(k)) * r.extraction->eta));
  }
  o.pass = min_gap >= -kPigeonhole && not_tp == 0 && errors == 0 &&
           min_slack >= -kExtractionSlack && worst_oracle <= kOracleAgreement;
  o.detail = fmt("1000 one-way protocols: min(conditional - ensemble) = %.3e, ensemble oracle gap "
                 "%.2e; chained extraction: %zu not TP, %zu failures, min F_e - (1 - 2^k eta) = "
                 "%.3e",
                 min_gap, worst_oracle, not_tp, errors, min_slack) +
             (error.empty() ? "" : "; " + error);
  return o;
}

// Stripped fidelity recomputed from the stripped sources and end-to-end map.
double stripped_oracle(const StripResult& r) {
  std::vector<orc::Dense> parts;
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    parts.push_back(leg_marginal(r.inputs[i], "A" + std::to_string(i + 1)));
  }
  const Protocol& z = r.protocol;
  return orc::entanglement_fidelity(chain_ops(z.encodings(), z.channel(), z.decodings()),
                                    orc::kron_all(parts));
}

Outcome criterion7() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 7));
  double worst_unitary = 0.0, worst_oracle = 0.0;
  const SystemLayout all = testing::sender_legs(2, 2);
  for (std::size_t n = 0; n < 200; ++n) {
    std::vector<KrausMap> enc;
    for (std::size_t i = 0; i < 2; ++i) {
      enc.emplace_back(std::vector<Matrix>{random_unitary(2, rng)}, testing::sender_leg(i, 2),
                       testing::sender_leg(i, 2), MapKind::TracePreserving);
    }
    KrausMap channel = random_channel(all, all, 1 + rng.index(4), rng.next());
    KrausMap dec = random_channel(all, all, 1 + rng.index(4), rng.next());
    Protocol p = Protocol::zero_way(std::move(enc), std::move(channel), {std::move(dec)});
    std::vector<DensityOperator> src = testing::random_sources(2, 2, rng, true);
    StripResult r = strip_encodings(p, testing::purified(src));
    worst_unitary = std::max(worst_unitary, std::abs(r.stripped_fidelity - r.original_fidelity));
    worst_oracle = std::max(worst_oracle, std::abs(stripped_oracle(r) - r.stripped_fidelity));
  }
  std::size_t accepted = 0, attempts = 0, below = 0, entropy_fail = 0, errors = 0;
  double min_slack = std::numeric_limits<double>::infinity(), max_eps = 0.0;
  std::string error;
  while (accepted < 200 && attempts < 2000) {
    ++attempts;
    testing::Instance inst =
        testing::near_unitary_mac(2, rng.uniform(0.0, 0.004), rng.uniform(0.0, 0.002), rng);
    std::optional<StripResult> stripped;
    try {
      stripped = strip_encodings(inst.protocol, inst.inputs);
    } catch (const VerificationError& e) {
      error = e.what();
      ++errors;
      continue;
    }
    const StripResult& r = *stripped;
    if (r.epsilon > 0.005) continue;
    ++accepted;
    max_eps = std::max(max_eps, r.epsilon);
    const double slack = r.stripped_fidelity - (1.0 - kStripFactor * r.epsilon);
    min_slack = std::min(min_slack, slack);
    if (slack < 0.0) ++below;
    if (r.entropy.inconclusive || !r.entropy.pass) ++entropy_fail;
    worst_oracle = std::max(worst_oracle, std::abs(stripped_oracle(r) - r.stripped_fidelity));
  }
  o.pass = worst_unitary <= kStripUnitary && accepted == 200 && below == 0 && entropy_fail == 0 &&
           errors == 0 && worst_oracle <= kOracleAgreement;
  o.detail = fmt("unitary encodings: max|stripped - original| = %.2e over 200; noisy (eps <= "
                 "%.4f, %zu runs): min slack over 1 - 10 eps = %.3e, %zu below, %zu entropy "
                 "failures, %zu errors; oracle gap %.2e",
                 worst_unitary, max_eps, accepted, min_slack, below, entropy_fail, errors,
                 worst_oracle) +
             (error.empty() ? "" : "; " + error);
  return o;
}

DensityOperator diagonal(const std::vector<double>& spectrum) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(spectrum.size()),
                          static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = spectrum[i];
  }
  return DensityOperator(m, SystemLayout::single("s", spectrum.size()));
}

Outcome criterion8() {
  Outcome o;
  double worst_trivial = 0.0;
  for (const auto& spec : std::vector<std::vector<double>>{
           {0.5, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.25, 0.25, 0.25, 0.25}, {1.0, 0.0},
           {1.0, 0.0, 0.0}}) {
    IIDSource src(diagonal(spec));
    for (double eps : {0.0, 0.05, 0.3}) {
      for (std::size_t n = 1; n <= 60; ++n) {
        worst_trivial = std::max(worst_trivial, std::abs(typical_spectral(src, n, eps).mass - 1.0));
      }
    }
  }
  IIDSource skew(diagonal({0.9, 0.1}));
  const double mass4 = typical_spectral(skew, 4, 0.1).mass;
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 400; ++n) ns.push_back(n);
  QaepCurve curve = qaep_mass_curve(skew, 0.15, ns, {0.01});
  const std::optional<std::size_t> crossing = curve.pass_at.at(0.01);
  const double crossing_mass = typical_spectral(skew, kQaepCrossing, 0.15).mass;

  Rng rng(derive_seed(kSeed, 8));
  std::vector<IIDSource> bases{skew};
  for (std::size_t i = 0; i < 2; ++i) {
    bases.emplace_back(random_density(SystemLayout::single("s", 2), 0, rng));
  }
  bases.emplace_back(random_density(SystemLayout::single("s", 3), 0, rng));
  std::size_t dim_mismatch = 0;
  double worst_mass = 0.0;
  for (const auto& src : bases) {
    const std::size_t d = src.base().dim();
    const std::size_t n_max = d == 2 ? 10 : 6;
    for (double eps : {0.05, 0.2}) {
      for (std::size_t n = 1; n <= n_max; ++n) {
        TypicalReport spectral = typical_spectral(src, n, eps);
        TypicalReport matrix = typical_projector(src, n, eps).report;
        if (spectral.typical_dim != matrix.typical_dim) ++dim_mismatch;
        worst_mass = std::max(worst_mass, std::abs(spectral.mass - matrix.mass));
      }
    }
  }
  o.pass = worst_trivial <= kTypicalMass && mass4 == 0.0 && crossing == kQaepCrossing &&
           std::abs(crossing_mass - kQaepMassAtCrossing) <= kFrozenMass && dim_mismatch == 0 &&
           worst_mass <= kTypicalMass;
  o.detail = fmt("flat/pure mass error %.1e; diag(0.9,0.1) eps 0.1 n 4 mass %.3g; eps 0.15 "
                 "crossing n = %s (frozen %zu, mass %.12f); matrix vs spectral: %zu dim "
                 "mismatches, mass gap %.1e",
                 worst_trivial, mass4, crossing ? std::to_string(*crossing).c_str() : "none",
                 kQaepCrossing, crossing_mass, dim_mismatch, worst_mass);
  return o;
}

Outcome criterion9() {
  Outcome o;
  Rng rng(derive_seed(kSeed, 9));
  std::size_t runs = 0, below = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::string error;
  auto carve_run = [&](const KrausMap& channel, const std::vector<DensityOperator>& src) {
    std::vector<PureState> inputs = testing::purified(src);
    std::vector<double> eta;
    for (std::size_t l = 0; l < src.size(); ++l) {
      eta.push_back(std::max(0.0, 1.0 - local_entanglement_fidelity(inputs, channel, l).value));
    }
    try {
      CarveResult r = carve_subspace(channel, src, eta);
      ++runs;
      const double slack = r.measured_Fs - r.certified_bound;
      min_slack = std::min(min_slack, slack);
      if (slack < -kCarve) ++below;
    } catch (const Error& e) {
      error = e.what();
      ++below;
    }
  };
  const SystemLayout one = testing::sender_leg(0, 2);
  carve_run(standard_channel(StandardChannel::AmplitudeDamping, 0.1, one),
            {DensityOperator::maximally_mixed(one)});
  for (std::size_t n = 0; n < 60; ++n) {
    const std::size_t k = 1 + n % 2;
    const std::size_t d = 2 + (n / 2) % 2;
    SystemLayout all;
    for (std::size_t i = 0; i < k; ++i) all = SystemLayout::concat(all, testing::sender_leg(i, d));
    KrausMap channel = testing::noisy_identity(all, rng.uniform(0.0, 0.1), 1 + rng.index(3), rng);
    carve_run(channel, testing::random_sources(k, d, rng, n % 3 == 0));
  }
  o.pass = below == 0 && runs == 61;
  o.detail = fmt("%zu carve runs: min(measured F_s - certified bound) = %.3e, %zu below "
                 "tolerance",
                 runs, min_slack, below) +
             (error.empty() ? "" : "; " + error);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fidelity engine", criterion1},      {"analytic spot checks", criterion2},
      {"lemma suites", criterion3},         {"product purification", criterion4},
      {"isometric extraction", criterion5}, {"flattening", criterion6},
      {"encoding stripping", criterion7},   {"typicality", criterion8},
      {"carving", criterion9}};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s [%s] %s (%.1f s)\n", id, out.pass ? "PASS" : "FAIL",
                criteria[i].first, out.detail.c_str(), seconds);
    std::fflush(stdout);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
