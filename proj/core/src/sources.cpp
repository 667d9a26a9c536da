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

#include "mqc/sources.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "mqc/errors.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

namespace {

constexpr double kWindowSlack = 1e-9;
constexpr double kExactLimit = 9007199254740992.0;  // 2^53

double log2_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log2(1.0 + std::exp2(std::min(a, b) - hi));
}

TypicalReport make_window(const IIDSource& src, std::size_t n, double epsilon) {
  if (n == 0) throw InputError("block length must be at least 1");
  if (!(epsilon >= 0.0)) throw InputError("epsilon must be non-negative");
  TypicalReport r;
  r.n = n;
  r.epsilon = epsilon;
  const double nd = static_cast<double>(n);
  r.log2_window_lo = -nd * (src.entropy() + epsilon);
  r.log2_window_hi = -nd * (src.entropy() - epsilon);
  r.window_lo = std::exp2(r.log2_window_lo);
  r.window_hi = std::exp2(r.log2_window_hi);
  r.log2_typical_dim = -std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace

IIDSource::IIDSource(DensityOperator base) : base_(std::move(base)) {
  if (!base_.is_normalized()) throw InputError("IID source base must be normalized");
  Spectrum s = eig_desc(base_);
  eigenvalues_ = s.eigenvalues;
  entropy_ = entropy_bits(eigenvalues_);
}

DensityOperator block_state(const IIDSource& src, std::size_t n, std::size_t max_dim) {
  if (n == 0) throw InputError("block length must be at least 1");
  const auto& base = src.base();
  double total = 1.0;
  for (std::size_t c = 0; c < n; ++c) total *= static_cast<double>(base.dim());
  if (total > static_cast<double>(max_dim)) {
    throw DimensionGuardError("block state of dim " + std::to_string(total) +
                              " exceeds the guard " + std::to_string(max_dim));
  }
  std::vector<DensityOperator> copies;
  for (std::size_t c = 1; c <= n; ++c) {
    std::vector<std::string> labels;
    for (const auto& l : base.layout().labels()) labels.push_back(l + "#" + std::to_string(c));
    copies.push_back(DensityOperator::trusted(base.matrix(), base.layout().relabeled(labels)));
  }
  return tensor_all(copies, max_dim);
}

bool in_typical_window(double log2_lambda, const TypicalReport& w) {
  return log2_lambda >= w.log2_window_lo - kWindowSlack &&
         log2_lambda <= w.log2_window_hi + kWindowSlack;
}

TypicalProjector typical_projector(const IIDSource& src, std::size_t n, double epsilon,
                                   std::size_t max_dim) {
  TypicalReport r = make_window(src, n, epsilon);
  DensityOperator block = block_state(src, n, max_dim);
  Eigen::SelfAdjointEigenSolver<Matrix> es(block.matrix());
  const auto d = block.matrix().rows();
  Matrix proj = Matrix::Zero(d, d);
  double count = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda <= 0.0 || !in_typical_window(std::log2(lambda), r)) continue;
    proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    r.mass += lambda;
    count += 1.0;
  }
  r.typical_dim = count;
  if (count > 0.0) r.log2_typical_dim = std::log2(count);
  return {std::move(proj), block.layout(), r};
}

TypicalReport typical_spectral(const IIDSource& src, std::size_t n, double epsilon) {
  TypicalReport r = make_window(src, n, epsilon);

  // Distinct nonzero base eigenvalues with multiplicities.
  std::vector<double> values;
  std::vector<double> mult;
  for (double v : src.eigenvalues()) {
    if (v <= tol::eig) continue;
    if (!values.empty() && std::abs(values.back() - v) <= tol::degeneracy) {
      mult.back() += 1.0;
    } else {
      values.push_back(v);
      mult.push_back(1.0);
    }
  }
  const std::size_t g = values.size();
  std::vector<double> log2_value(g), log2_mult(g);
  for (std::size_t j = 0; j < g; ++j) {
    log2_value[j] = std::log2(values[j]);
    log2_mult[j] = std::log2(mult[j]);
  }
  const double ln2 = std::log(2.0);
  const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);

  std::vector<std::size_t> counts(g, 0);
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t j, std::size_t left) {
    if (j + 1 == g) {
      counts[j] = left;
      double log2_count = lg_n / ln2;
      double log2_lambda = 0.0;
      for (std::size_t q = 0; q < g; ++q) {
        const double c = static_cast<double>(counts[q]);
        log2_count += c * log2_mult[q] - std::lgamma(c + 1.0) / ln2;
        log2_lambda += c * log2_value[q];
      }
      if (!in_typical_window(log2_lambda, r)) return;
      double count = std::exp2(log2_count);
      if (count < kExactLimit) count = std::round(count);
      r.typical_dim += count;
      r.log2_typical_dim = log2_add(r.log2_typical_dim, log2_count);
      r.mass += std::exp2(log2_count + log2_lambda);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[j] = c;
      visit(j + 1, left - c);
    }
  };
  if (g > 0) visit(0, n);
  r.mass = std::min(r.mass, 1.0);
  return r;
}

QaepCurve qaep_mass_curve(const IIDSource& src, double epsilon, const std::vector<std::size_t>& ns,
                          const std::vector<double>& deltas) {
  QaepCurve curve;
  curve.epsilon = epsilon;
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) throw InputError("delta must lie in (0, 1)");
    curve.pass_at[d] = std::nullopt;
  }
  std::vector<std::size_t> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t n : sorted) {
    TypicalReport r = typical_spectral(src, n, epsilon);
    for (auto& [d, at] : curve.pass_at) {
      if (!at && r.mass > 1.0 - d) at = n;
    }
    curve.points.push_back(r);
  }
  return curve;
}

void write_typical_csv(std::ostream& os, const std::vector<TypicalReport>& reports) {
  os << "n,epsilon,typical_dim,mass\n";
  const auto old = os.precision(17);
  for (const auto& r : reports) {
    os << r.n << ',' << r.epsilon << ',' << r.typical_dim << ',' << r.mass << '\n';
  }
  os.precision(old);
}

}  // namespace mqc
