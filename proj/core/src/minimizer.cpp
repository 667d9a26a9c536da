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
#include <limits>
#include <numbers>
#include <set>

#include "factor_split.hpp"
#include "mqc/errors.hpp"
#include "mqc/fidelity.hpp"
#include "mqc/random.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

namespace {

struct Block {
  std::vector<std::string> labels;
  Matrix basis;  // full block dim x subspace dim
};

// Objective over product states x_m = B_m c_m on a virtual layout whose
// factors are the blocks. Global: sum_K |<psi|K|psi>|^2. Local leg l:
// sum_K || (<x_l| (x) I) K psi ||^2.
class Problem {
 public:
  Problem(const std::vector<Subspace>& subspaces, const KrausMap& map, bool product_only,
          std::optional<std::size_t> local_leg)
      : global_(!local_leg.has_value()), local_(local_leg.value_or(0)) {
    if (subspaces.empty()) throw InputError("no subspaces given");
    if (!map.out_layout().same_shape(map.in_layout())) {
      throw LayoutError("subspace fidelity needs a map whose output layout equals its input");
    }
    std::set<std::string> seen;
    std::vector<std::string> order;
    for (const auto& s : subspaces) {
      const auto& sub = map.in_layout()[map.in_layout().index_of(s.leg().label)];
      if (sub.dim != s.leg().dim) throw LayoutError("subspace leg dim differs from map input");
      if (!seen.insert(s.leg().label).second) throw LayoutError("two subspaces on one leg");
      order.push_back(s.leg().label);
    }
    if (order.size() != map.in_layout().size()) {
      throw LayoutError("subspaces must cover every map input factor");
    }
    if (!global_ && local_ >= subspaces.size()) throw InputError("unknown leg index");

    if (product_only) {
      std::vector<Subsystem> v;
      for (const auto& s : subspaces) {
        blocks_.push_back({{s.leg().label}, s.basis()});
        v.push_back({"b" + std::to_string(v.size()), s.leg().dim});
      }
      vlayout_ = SystemLayout(std::move(v));
    } else {
      if (!global_) throw InputError("the unrestricted minimizer supports the global objective only");
      Matrix basis = Matrix::Ones(1, 1);
      for (const auto& s : subspaces) basis = kron(basis, s.basis());
      blocks_.push_back({order, basis});
      vlayout_ = SystemLayout::single("b0", static_cast<std::size_t>(basis.rows()));
    }
    for (std::size_t m = 0; m < blocks_.size(); ++m) {
      splits_.emplace_back(vlayout_, std::vector<std::string>{vlayout_[m].label});
    }
    for (const auto& k : map.ops()) {
      Matrix p = permute_matrix(k, map.in_layout(), order);
      ops_adj_.push_back(p.adjoint());
      ops_.push_back(std::move(p));
    }
  }

  std::size_t blocks() const { return blocks_.size(); }
  std::size_t subdim(std::size_t m) const { return static_cast<std::size_t>(blocks_[m].basis.cols()); }
  const Block& block(std::size_t m) const { return blocks_[m]; }

  std::vector<Vector> lift(const std::vector<Vector>& c) const {
    std::vector<Vector> x;
    x.reserve(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) x.push_back(blocks_[m].basis * c[m]);
    return x;
  }

  double value(const std::vector<Vector>& c) const {
    auto x = lift(c);
    Vector psi = kron_all(x);
    double f = 0.0;
    for (const auto& k : ops_) {
      Vector y = k * psi;
      if (global_) {
        f += std::norm(psi.dot(y));
      } else {
        f += contract_one(y, local_, x[local_]).squaredNorm();
      }
    }
    return f;
  }

  // Wirtinger gradient d f / d conj(c_m).
  Vector gradient(const std::vector<Vector>& c, std::size_t m) const {
    auto x = lift(c);
    Vector psi = kron_all(x);
    Vector g = Vector::Zero(x[m].size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      Vector y = ops_[i] * psi;
      if (global_) {
        cplx v = psi.dot(y);
        g += std::conj(v) * contract_all_but(y, m, x) +
             v * contract_all_but(ops_adj_[i] * psi, m, x);
      } else {
        Vector v = contract_one(y, local_, x[local_]);
        Vector full = insert(x[local_], v, local_);
        g += contract_all_but(ops_adj_[i] * full, m, x);
        if (m == local_) g += contract_rest(y, local_, v);
      }
    }
    return blocks_[m].basis.adjoint() * g;
  }

  // f(c) = sum_j |c^dag N_j c|^2 + c^dag Q c for block m with the others
  // fixed at x.
  struct Effective {
    std::vector<Matrix> quartic;
    Matrix quadratic;
  };

  Effective effective(std::size_t m, const std::vector<Vector>& x) const {
    const Matrix& b = blocks_[m].basis;
    const auto k = b.cols();
    Effective e;
    e.quadratic = Matrix::Zero(k, k);
    std::vector<Vector> cols_in;  // insert(B col j at m, others)
    for (Eigen::Index j = 0; j < k; ++j) {
      std::vector<Vector> xx = x;
      xx[m] = b.col(j);
      cols_in.push_back(kron_all(xx));
    }
    const auto& split = splits_[m];
    for (const auto& op : ops_) {
      Matrix g(op.rows(), k);
      for (Eigen::Index j = 0; j < k; ++j) g.col(j) = op * cols_in[static_cast<std::size_t>(j)];
      if (global_) {
        Matrix h(k, k);
        for (Eigen::Index i = 0; i < k; ++i) {
          for (Eigen::Index j = 0; j < k; ++j) h(i, j) = cols_in[static_cast<std::size_t>(i)].dot(g.col(j));
        }
        e.quartic.push_back(std::move(h));
      } else if (m == local_) {
        for (std::size_t r = 0; r < split.rest_dim(); ++r) {
          Matrix n = Matrix::Zero(k, k);
          for (std::size_t s = 0; s < split.sel_dim(); ++s) {
            auto row = static_cast<Eigen::Index>(split.full(r, s));
            for (Eigen::Index i = 0; i < k; ++i) {
              cplx w = std::conj(b(static_cast<Eigen::Index>(s), i));
              n.row(i) += w * g.row(row);
            }
          }
          e.quartic.push_back(std::move(n));
        }
      } else {
        Matrix l(static_cast<Eigen::Index>(splits_[local_].rest_dim()), k);
        for (Eigen::Index j = 0; j < k; ++j) l.col(j) = contract_one(g.col(j), local_, x[local_]);
        e.quadratic += l.adjoint() * l;
      }
    }
    return e;
  }

 private:
  Vector contract_one(const Vector& v, std::size_t l, const Vector& xl) const {
    const auto& split = splits_[l];
    Vector out = Vector::Zero(static_cast<Eigen::Index>(split.rest_dim()));
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
      cplx acc = 0.0;
      for (std::size_t s = 0; s < split.sel_dim(); ++s) {
        acc += std::conj(xl(static_cast<Eigen::Index>(s))) * v(static_cast<Eigen::Index>(split.full(r, s)));
      }
      out(static_cast<Eigen::Index>(r)) = acc;
    }
    return out;
  }

  Vector contract_rest(const Vector& v, std::size_t l, const Vector& rest) const {
    const auto& split = splits_[l];
    Vector out = Vector::Zero(static_cast<Eigen::Index>(split.sel_dim()));
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
      cplx w = std::conj(rest(static_cast<Eigen::Index>(r)));
      for (std::size_t s = 0; s < split.sel_dim(); ++s) {
        out(static_cast<Eigen::Index>(s)) += w * v(static_cast<Eigen::Index>(split.full(r, s)));
      }
    }
    return out;
  }

  Vector contract_all_but(const Vector& v, std::size_t m, const std::vector<Vector>& x) const {
    std::vector<Vector> others;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k != m) others.push_back(x[k]);
    }
    return contract_rest(v, m, kron_all(others));
  }

  Vector insert(const Vector& xl, const Vector& rest, std::size_t l) const {
    const auto& split = splits_[l];
    Vector out(static_cast<Eigen::Index>(split.rest_dim() * split.sel_dim()));
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
      for (std::size_t s = 0; s < split.sel_dim(); ++s) {
        out(static_cast<Eigen::Index>(split.full(r, s))) =
            xl(static_cast<Eigen::Index>(s)) * rest(static_cast<Eigen::Index>(r));
      }
    }
    return out;
  }

  bool global_;
  std::size_t local_;
  std::vector<Block> blocks_;
  SystemLayout vlayout_;
  std::vector<detail::FactorSplit> splits_;
  std::vector<Matrix> ops_;
  std::vector<Matrix> ops_adj_;
};

struct DescentResult {
  std::vector<Vector> c;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

DescentResult descend(const Problem& p, std::vector<Vector> c, const MinimizerConfig& cfg) {
  const std::size_t n = p.blocks();
  std::vector<double> step(n, 0.5);
  double f = p.value(c);
  DescentResult out;
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    const double f_start = f;
    double max_grad = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (p.subdim(m) < 2) continue;
      Vector g = p.gradient(c, m);
      Vector t = g - c[m] * c[m].dot(g);
      const double tn2 = t.squaredNorm();
      max_grad = std::max(max_grad, std::sqrt(tn2));
      if (tn2 < 1e-30) continue;
      double s = step[m];
      while (s > 1e-16) {
        std::vector<Vector> trial = c;
        trial[m] = c[m] - s * t;
        trial[m].normalize();
        double ft = p.value(trial);
        if (ft <= f - 1e-4 * s * tn2) {
          c = std::move(trial);
          f = ft;
          step[m] = std::min(2.0 * s, 8.0);
          break;
        }
        s *= 0.5;
      }
      if (s <= 1e-16) step[m] = 0.5;
    }
    out.iterations = it + 1;
    if (std::abs(f_start - f) < cfg.tolerance && max_grad < cfg.gradient_tolerance) {
      out.converged = true;
      break;
    }
    if (max_grad == 0.0) {
      out.converged = true;
      break;
    }
  }
  out.c = std::move(c);
  out.value = f;
  return out;
}

double grid_minimum(const Problem::Effective& e, std::size_t points) {
  const std::size_t n_theta = points / 2;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a <= n_theta; ++a) {
    const double theta = std::numbers::pi * static_cast<double>(a) / static_cast<double>(n_theta);
    const double c0 = std::cos(0.5 * theta);
    const double s0 = std::sin(0.5 * theta);
    const std::size_t n_phi = (a == 0 || a == n_theta) ? 1 : points;
    for (std::size_t b = 0; b < n_phi; ++b) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(b) / static_cast<double>(points);
      const cplx c1 = std::polar(s0, phi);
      double f = 0.0;
      for (const auto& q : e.quartic) {
        cplx v = c0 * (q(0, 0) * c0 + q(0, 1) * c1) + std::conj(c1) * (q(1, 0) * c0 + q(1, 1) * c1);
        f += std::norm(v);
      }
      const auto& q = e.quadratic;
      f += (c0 * (q(0, 0) * c0 + q(0, 1) * c1) + std::conj(c1) * (q(1, 0) * c0 + q(1, 1) * c1)).real();
      best = std::min(best, f);
    }
  }
  return best;
}

FidelityReport minimize(const std::vector<Subspace>& subspaces, const KrausMap& map,
                        std::optional<std::size_t> local_leg, const MinimizerConfig& cfg) {
  Problem p(subspaces, map, cfg.product_only, local_leg);
  const std::size_t restarts = std::max<std::size_t>(cfg.restarts, 1);

  OptimizerStats stats;
  stats.restarts = restarts;
  DescentResult best;
  best.value = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, r));
    std::vector<Vector> c;
    for (std::size_t m = 0; m < p.blocks(); ++m) {
      c.push_back(p.subdim(m) == 1 ? Vector::Ones(1) : random_unit_vector(p.subdim(m), rng));
    }
    DescentResult d = descend(p, std::move(c), cfg);
    stats.iterations += d.iterations;
    worst = std::max(worst, d.value);
    if (d.value < best.value) best = std::move(d);
  }
  stats.spread = worst - best.value;
  stats.converged = best.converged;

  std::vector<Vector> x = p.lift(best.c);

  std::size_t two_dim = 0;
  bool small = true;
  for (std::size_t m = 0; m < p.blocks(); ++m) {
    if (p.subdim(m) > 2) small = false;
    if (p.subdim(m) == 2) ++two_dim;
  }
  if (cfg.grid_oracle && cfg.product_only && small && two_dim > 0 &&
      (two_dim == 1 || cfg.grid_multi_leg)) {
    double grid = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < p.blocks(); ++m) {
      if (p.subdim(m) != 2) continue;
      grid = std::min(grid, grid_minimum(p.effective(m, x), cfg.grid_points));
    }
    stats.grid_value = grid;
    if (std::abs(grid - best.value) > cfg.grid_disagreement) {
      throw VerificationError("grid oracle " + std::to_string(grid) +
                              " disagrees with descent minimum " + std::to_string(best.value));
    }
  }

  FidelityReport r;
  r.value = best.value;
  r.kind = FidelityKind::SubspaceMin;
  r.global = !local_leg.has_value();
  r.leg = local_leg;
  if (local_leg) r.leg_label = subspaces[*local_leg].leg().label;
  for (std::size_t m = 0; m < p.blocks(); ++m) {
    r.witness.push_back(x[m]);
    std::string label;
    for (const auto& l : p.block(m).labels) label += (label.empty() ? "" : ",") + l;
    r.witness_labels.push_back(label);
  }
  r.stats = stats;
  return r;
}

}  // namespace

FidelityReport min_subspace_fidelity(const std::vector<Subspace>& subspaces, const KrausMap& map,
                                     const MinimizerConfig& config) {
  return minimize(subspaces, map, std::nullopt, config);
}

FidelityReport local_subspace_fidelity(const std::vector<Subspace>& subspaces,
                                       const KrausMap& map, std::size_t leg,
                                       const MinimizerConfig& config) {
  if (!config.product_only) {
    throw InputError("local subspace fidelity is defined over product states only");
  }
  return minimize(subspaces, map, leg, config);
}

}  // namespace mqc
