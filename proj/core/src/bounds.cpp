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

#include "mqc/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "mqc/errors.hpp"
#include "mqc/tensor_ops.hpp"
#include "mqc/tolerance.hpp"

namespace mqc {

BoundReport make_report(std::string name, double lhs, double rhs, double margin,
                        nlohmann::json witness) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin;
  r.pass = margin >= -tol::bound;
  r.witness = std::move(witness);
  return r;
}

namespace {

void require_unit(const Vector& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > tol::norm) {
    throw InputError(std::string(what) + " is not a unit vector");
  }
}

Vector product_vector(const DensityOperator& rho, const std::vector<Vector>& states) {
  if (states.size() != rho.layout().size()) {
    throw InputError("need one state per factor (" + std::to_string(rho.layout().size()) +
                     "), got " + std::to_string(states.size()));
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<std::size_t>(states[i].size()) != rho.layout()[i].dim) {
      throw LayoutError("state " + std::to_string(i) + " does not match its factor dim");
    }
    require_unit(states[i], "factor state");
  }
  return kron_all(states);
}

std::vector<double> local_overlaps(const DensityOperator& rho, const std::vector<Vector>& states) {
  std::vector<double> m;
  for (std::size_t i = 0; i < states.size(); ++i) {
    DensityOperator r = reduced_state(rho, {rho.layout()[i].label});
    m.push_back(states[i].dot(r.matrix() * states[i]).real());
  }
  return m;
}

// Eigenbasis of a Hermitian matrix reordered so that column 0 is the top
// eigenvector closest to phi when the top eigenvalue is degenerate.
struct TopEigen {
  std::vector<double> values;
  Matrix vectors;
  std::size_t block = 1;
};

TopEigen top_eigen_towards(const Matrix& h, const Vector& phi) {
  HermitianEigen e = hermitian_eigen_desc(h);
  TopEigen out;
  out.values.assign(e.values.data(), e.values.data() + e.values.size());
  out.vectors = e.vectors;
  const auto n = e.values.size();
  Eigen::Index s = 1;
  while (s < n && e.values(0) - e.values(s) < tol::degeneracy) ++s;
  out.block = static_cast<std::size_t>(s);
  if (s == 1) return out;
  Matrix vb = e.vectors.leftCols(s);
  Vector a = vb.adjoint() * phi;
  if (a.norm() < 1e-12) return out;
  std::vector<Vector> coeffs{a / a.norm()};
  for (Eigen::Index j = 0; j < s && static_cast<Eigen::Index>(coeffs.size()) < s; ++j) {
    Vector v = Vector::Zero(s);
    v(j) = 1.0;
    for (const auto& c : coeffs) v -= c * c.dot(v);
    if (v.norm() > 1e-8) coeffs.push_back(v / v.norm());
  }
  for (Eigen::Index j = 0; j < s; ++j) out.vectors.col(j) = vb * coeffs[static_cast<std::size_t>(j)];
  return out;
}

}  // namespace

BoundReport check_local_from_global(const DensityOperator& rho, const std::vector<Vector>& states) {
  Vector phi = product_vector(rho, states);
  const double g = phi.dot(rho.matrix() * phi).real();
  const double eps = 1.0 - g;
  const auto k = static_cast<double>(states.size());
  std::vector<double> m = local_overlaps(rho, states);
  double p = 1.0;
  for (double x : m) p *= x;
  const double min_m = *std::min_element(m.begin(), m.end());
  const double margin_local = min_m - (1.0 - eps);
  const double margin_product = p - (1.0 - k * eps);
  nlohmann::json w = {{"global", g}, {"epsilon", eps}, {"locals", m}, {"product", p},
                      {"k", states.size()}};
  if (margin_local <= margin_product) {
    return make_report("lemma1", min_m, 1.0 - eps, margin_local, std::move(w));
  }
  return make_report("lemma1", p, 1.0 - k * eps, margin_product, std::move(w));
}

BoundReport check_global_from_local(const DensityOperator& rho, const std::vector<Vector>& states,
                                    const std::vector<double>& epsilons) {
  Vector phi = product_vector(rho, states);
  if (epsilons.size() != states.size()) throw InputError("need one epsilon per factor");
  std::vector<double> m = local_overlaps(rho, states);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 1.0 - epsilons[i] - tol::bound) {
      throw InputError("local overlap " + std::to_string(m[i]) + " of factor " +
                       std::to_string(i) + " is below 1 - eps");
    }
    sum += epsilons[i];
  }
  const double g = phi.dot(rho.matrix() * phi).real();
  return make_report("lemma2", g, 1.0 - sum, g - (1.0 - sum),
                     {{"locals", m}, {"epsilons", epsilons}, {"global", g}});
}

BoundReport overlap_triangle(const Vector& phi1, const Vector& phi2, const Vector& psi) {
  require_unit(phi1, "phi1");
  require_unit(phi2, "phi2");
  require_unit(psi, "psi");
  if (phi1.size() != phi2.size() || phi1.size() != psi.size()) {
    throw InputError("overlap_triangle: vectors differ in dimension");
  }
  const double eta1 = std::max(0.0, 1.0 - std::norm(phi1.dot(psi)));
  const double eta2 = std::max(0.0, 1.0 - std::norm(phi2.dot(psi)));
  const double ov = std::norm(phi1.dot(phi2));
  const double rhs = 1.0 - eta1 - eta2;
  const double sqrt_rhs = 1.0 - std::pow(std::sqrt(eta1) + std::sqrt(eta2), 2);
  return make_report("lemma5", ov, rhs, ov - rhs,
                     {{"eta1", eta1}, {"eta2", eta2}, {"overlap", ov},
                      {"sqrt_rhs", sqrt_rhs}, {"sqrt_margin", ov - sqrt_rhs}});
}

BoundReport overlap_triangle_sqrt(const Vector& phi1, const Vector& phi2, const Vector& psi) {
  BoundReport base = overlap_triangle(phi1, phi2, psi);
  const double rhs = base.witness["sqrt_rhs"].get<double>();
  return make_report("lemma5_sqrt", base.lhs, rhs, base.lhs - rhs, base.witness);
}

BoundReport dominant_eigen_bounds(const DensityOperator& rho, const Vector& phi) {
  if (static_cast<std::size_t>(phi.size()) != rho.dim()) throw LayoutError("phi dim mismatch");
  require_unit(phi, "phi");
  const double eps = 1.0 - phi.dot(rho.matrix() * phi).real();
  TopEigen top = top_eigen_towards(rho.matrix(), phi);
  const double lmax = top.values.front();
  const double ov = std::norm(top.vectors.col(0).dot(phi));
  const double m1 = lmax - (1.0 - eps);
  const double m2 = ov - (1.0 - 2.0 * eps);
  nlohmann::json w = {{"epsilon", eps}, {"lambda_max", lmax}, {"overlap", ov},
                      {"degenerate_block", top.block}};
  BoundReport r = m1 <= m2 ? make_report("lemma6", lmax, 1.0 - eps, m1, std::move(w))
                           : make_report("lemma6", ov, 1.0 - 2.0 * eps, m2, std::move(w));
  r.inconclusive = top.block > 1 && eps >= 0.5;
  return r;
}

ProductPurification product_purification(const DensityOperator& rho,
                                         const std::vector<std::vector<std::string>>& legs,
                                         const std::vector<Vector>& states) {
  if (legs.empty() || legs.size() != states.size()) {
    throw InputError("need one state per leg");
  }
  std::vector<std::string> all;
  for (const auto& l : legs) all.insert(all.end(), l.begin(), l.end());
  SystemLayout joint = rho.layout().select(all);
  if (joint.size() != rho.layout().size()) throw LayoutError("legs must cover every factor of rho");

  const std::size_t k = legs.size();
  ProductPurification out;
  double weight = 1.0;
  std::vector<Vector> tops;
  std::vector<double> lmax;
  double purification_error = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    SystemLayout leg = rho.layout().select(legs[i]);
    if (static_cast<std::size_t>(states[i].size()) != leg.total_dim()) {
      throw LayoutError("leg state " + std::to_string(i) + " does not match the leg dim");
    }
    require_unit(states[i], "leg state");
    DensityOperator ri = reduced_state(rho, legs[i]);
    TopEigen top = top_eigen_towards(ri.matrix(), states[i]);
    const std::size_t d = leg.total_dim();
    std::string anc = "anc:" + legs[i].front();
    while (rho.layout().contains(anc)) anc += "'";
    SystemLayout layout = SystemLayout::concat(leg, SystemLayout::single(anc, d, Role::Environment));
    Vector psi = Vector::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t c = 0; c < d; ++c) {
      const double amp = std::sqrt(std::max(top.values[c], 0.0));
      for (std::size_t a = 0; a < d; ++a) {
        psi(static_cast<Eigen::Index>(a * d + c)) =
            amp * top.vectors(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
      }
    }
    psi /= psi.norm();
    PureState factor(psi, layout);
    purification_error = std::max(
        purification_error, (reduced_state(factor, legs[i]).matrix() - ri.matrix()).norm());
    out.factors.push_back(std::move(factor));
    out.ancilla_labels.push_back(anc);
    weight *= top.values[0];
    lmax.push_back(top.values[0]);
    tops.push_back(top.vectors.col(0));
  }

  PureState phi(kron_all(states), joint);
  const double eps = 1.0 - fidelity_with_pure(rho, phi);
  PureState top_state(kron_all(tops), joint);
  const double overlap = weight * fidelity_with_pure(rho, top_state);
  const double rhs = 1.0 - (2.0 * static_cast<double>(k) + 4.0) * eps;
  out.report = make_report("lemma7", overlap, rhs, overlap - rhs,
                           {{"epsilon", eps}, {"k", k}, {"overlap", overlap},
                            {"lambda_max", lmax}, {"purification_error", purification_error}});
  return out;
}

BoundReport entropy_continuity_check(const PureState& phi, const DensityOperator& rho,
                                     const std::vector<std::string>& traced) {
  const double eps = std::max(0.0, 1.0 - fidelity_with_pure(rho, phi));
  if (eps >= 1.0 / 72.0) {
    throw InputError("entropy continuity needs eps < 1/72, got " + std::to_string(eps));
  }
  const double s_phi = von_neumann_entropy(partial_trace(phi, traced));
  const double s_rho = von_neumann_entropy(partial_trace(rho, traced));
  const double kept_dim = static_cast<double>(rho.layout().without(traced).total_dim());
  const double lhs = std::abs(s_phi - s_rho);
  const double rhs = 2.0 * std::sqrt(2.0 * eps) * std::log2(kept_dim) + 2.0;
  return make_report("lemma8", lhs, rhs, rhs - lhs,
                     {{"epsilon", eps}, {"entropy_phi", s_phi}, {"entropy_rho", s_rho},
                      {"kept_dim", kept_dim}});
}

BoundReport alpha_inequality(const std::vector<double>& weights) {
  if (weights.size() < 2) throw InputError("alpha_inequality needs L >= 2");
  double prod = 1.0, comp = 1.0;
  for (double a : weights) {
    if (!(a >= 0.0 && a <= 1.0)) throw InputError("weight outside [0, 1]");
    prod *= a;
    comp *= 1.0 - a;
  }
  const double lhs = prod + comp;
  return make_report("alpha_inequality", lhs, 1.0, 1.0 - lhs, {{"weights", weights}});
}

BoundReport bernoulli_power(double eps, int k) {
  if (!(eps >= 0.0 && eps <= 1.0) || k < 1) throw InputError("bernoulli_power domain");
  const double lhs = std::pow(1.0 - eps, k);
  const double rhs = 1.0 - k * eps;
  return make_report("bernoulli_power", lhs, rhs, lhs - rhs, {{"epsilon", eps}, {"k", k}});
}

PureState uniform_source_purification(const Subspace& s, const std::string& reference_label) {
  const std::size_t d = s.dim();
  const std::size_t n = s.leg().dim;
  SystemLayout layout({Subsystem{reference_label, d, Role::Reference}, s.leg()});
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d * n));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    psi.segment(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n)) =
        amp * s.basis().col(static_cast<Eigen::Index>(i));
  }
  return PureState(std::move(psi), std::move(layout));
}

BoundReport check_theorem1(const std::vector<Subspace>& subspaces, const KrausMap& map,
                           std::optional<double> eta, double constant,
                           const MinimizerConfig& config) {
  FidelityReport fs = min_subspace_fidelity(subspaces, map, config);
  if (eta && fs.value < 1.0 - *eta - 1e-6) {
    throw InputError("theorem1 precondition: F_s " + std::to_string(fs.value) +
                     " below 1 - eta");
  }
  const double e = std::max(eta.value_or(1.0 - fs.value), 0.0);
  std::vector<PureState> inputs;
  for (const auto& s : subspaces) {
    inputs.push_back(uniform_source_purification(s, "ref:" + s.leg().label));
  }
  const double fe = entanglement_fidelity(inputs, map).value;
  const double gap = 1.0 - fe;
  nlohmann::json ratio = nullptr;
  if (e > 0.0) {
    ratio = gap / e;
  } else if (gap <= 1e-12) {
    ratio = 0.0;
  }
  const double rhs = 1.0 - constant * e;
  return make_report("theorem1", fe, rhs, fe - rhs,
                     {{"F_s", fs.value}, {"eta", e}, {"F_e", fe}, {"ratio", ratio},
                      {"constant", constant}});
}

}  // namespace mqc
