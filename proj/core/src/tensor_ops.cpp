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

#include "mqc/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "factor_split.hpp"
#include "mqc/errors.hpp"

namespace mqc {

namespace detail {

FactorSplit::FactorSplit(const SystemLayout& layout, const std::vector<std::string>& selected) {
  std::vector<std::size_t> sel_pos;
  sel_pos.reserve(selected.size());
  std::set<std::string> uniq;
  for (const auto& l : selected) {
    if (!uniq.insert(l).second) throw LayoutError("label '" + l + "' selected twice");
    sel_pos.push_back(layout.index_of(l));
  }
  sel_layout_ = layout.select(selected);
  rest_layout_ = layout.without(selected);
  sel_dim_ = sel_layout_.total_dim();
  rest_dim_ = rest_layout_.total_dim();

  const std::size_t n = layout.size();
  std::vector<bool> is_sel(n, false);
  for (auto p : sel_pos) is_sel[p] = true;

  // Weight of each layout digit inside the rest index and inside the sel index.
  std::vector<std::size_t> rest_w(n, 0), sel_w(n, 0);
  std::size_t w = 1;
  for (std::size_t k = n; k-- > 0;) {
    if (!is_sel[k]) {
      rest_w[k] = w;
      w *= layout[k].dim;
    }
  }
  w = 1;
  for (std::size_t k = sel_pos.size(); k-- > 0;) {
    sel_w[sel_pos[k]] = w;
    w *= layout[sel_pos[k]].dim;
  }

  const std::size_t total = layout.total_dim();
  table_.assign(total, 0);
  std::vector<std::size_t> digit(n, 0);
  std::size_t r = 0, s = 0;
  for (std::size_t i = 0; i < total; ++i) {
    table_[r * sel_dim_ + s] = i;
    for (std::size_t k = n; k-- > 0;) {
      ++digit[k];
      if (is_sel[k]) s += sel_w[k]; else r += rest_w[k];
      if (digit[k] < layout[k].dim) break;
      if (is_sel[k]) s -= sel_w[k] * digit[k]; else r -= rest_w[k] * digit[k];
      digit[k] = 0;
    }
  }
}

}  // namespace detail

using detail::FactorSplit;

namespace {

std::vector<std::string> require_permutation(const SystemLayout& layout,
                                             const std::vector<std::string>& order) {
  if (order.size() != layout.size()) {
    throw LayoutError("permutation must list every factor exactly once");
  }
  for (const auto& l : order) layout.index_of(l);
  return order;
}

}  // namespace

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b, std::size_t max_dim) {
  SystemLayout layout = SystemLayout::concat(a.layout(), b.layout());
  require_dim_guard(layout.total_dim(), max_dim);
  return DensityOperator::trusted(kron(a.matrix(), b.matrix()), std::move(layout));
}

PureState tensor(const PureState& a, const PureState& b, std::size_t max_dim) {
  SystemLayout layout = SystemLayout::concat(a.layout(), b.layout());
  require_dim_guard(layout.total_dim(), max_dim);
  return PureState(kron(a.vector(), b.vector()), std::move(layout));
}

Operator tensor(const Operator& a, const Operator& b) {
  return Operator(kron(a.matrix, b.matrix), SystemLayout::concat(a.out_layout, b.out_layout),
                  SystemLayout::concat(a.in_layout, b.in_layout));
}

DensityOperator tensor_all(const std::vector<DensityOperator>& parts, std::size_t max_dim) {
  if (parts.empty()) throw InputError("tensor_all of an empty list");
  DensityOperator out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i], max_dim);
  return out;
}

PureState tensor_all(const std::vector<PureState>& parts, std::size_t max_dim) {
  if (parts.empty()) throw InputError("tensor_all of an empty list");
  PureState out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i], max_dim);
  return out;
}

Vector permute_vector(const Vector& v, const SystemLayout& layout,
                      const std::vector<std::string>& order) {
  FactorSplit split(layout, require_permutation(layout, order));
  Vector out(v.size());
  for (std::size_t s = 0; s < split.sel_dim(); ++s) {
    out(static_cast<Eigen::Index>(s)) = v(static_cast<Eigen::Index>(split.full(0, s)));
  }
  return out;
}

Matrix permute_matrix(const Matrix& m, const SystemLayout& layout,
                      const std::vector<std::string>& order) {
  FactorSplit split(layout, require_permutation(layout, order));
  const auto d = static_cast<Eigen::Index>(split.sel_dim());
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  for (Eigen::Index s = 0; s < d; ++s) {
    idx[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(split.full(0, s));
  }
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      out(i, j) = m(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

PureState permute(const PureState& psi, const std::vector<std::string>& order) {
  return PureState(permute_vector(psi.vector(), psi.layout(), order),
                   psi.layout().select(order));
}

DensityOperator permute(const DensityOperator& rho, const std::vector<std::string>& order) {
  return DensityOperator::trusted(permute_matrix(rho.matrix(), rho.layout(), order),
                                  rho.layout().select(order));
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& discard) {
  FactorSplit split(rho.layout(), discard);
  const auto kd = static_cast<Eigen::Index>(split.rest_dim());
  Matrix out = Matrix::Zero(kd, kd);
  const Matrix& m = rho.matrix();
  for (std::size_t x = 0; x < split.sel_dim(); ++x) {
    for (Eigen::Index b = 0; b < kd; ++b) {
      auto col = static_cast<Eigen::Index>(split.full(static_cast<std::size_t>(b), x));
      for (Eigen::Index a = 0; a < kd; ++a) {
        out(a, b) += m(static_cast<Eigen::Index>(split.full(static_cast<std::size_t>(a), x)), col);
      }
    }
  }
  return DensityOperator::trusted(std::move(out), split.rest_layout());
}

DensityOperator partial_trace(const PureState& psi, const std::vector<std::string>& discard) {
  return reduced_state(psi, psi.layout().without(discard).labels());
}

DensityOperator reduced_state(const DensityOperator& rho, const std::vector<std::string>& keep) {
  std::vector<std::string> discard;
  for (const auto& l : rho.layout().labels()) {
    if (std::find(keep.begin(), keep.end(), l) == keep.end()) discard.push_back(l);
  }
  for (const auto& l : keep) rho.layout().index_of(l);
  DensityOperator reduced = partial_trace(rho, discard);
  if (reduced.layout().labels() == keep) return reduced;
  return permute(reduced, keep);
}

DensityOperator reduced_state(const PureState& psi, const std::vector<std::string>& keep) {
  FactorSplit split(psi.layout(), keep);
  const auto sd = static_cast<Eigen::Index>(split.sel_dim());
  const auto rd = static_cast<Eigen::Index>(split.rest_dim());
  Matrix coeffs(sd, rd);
  for (Eigen::Index r = 0; r < rd; ++r) {
    for (Eigen::Index s = 0; s < sd; ++s) {
      coeffs(s, r) = psi.vector()(static_cast<Eigen::Index>(
          split.full(static_cast<std::size_t>(r), static_cast<std::size_t>(s))));
    }
  }
  return DensityOperator::trusted(coeffs * coeffs.adjoint(), split.sel_layout());
}

namespace {

Contraction merge(const SystemLayout& layout, const std::vector<Contraction>& parts) {
  Contraction out;
  out.vector = Vector::Ones(1);
  for (const auto& p : parts) {
    std::size_t d = 1;
    for (const auto& l : p.labels) d *= layout[layout.index_of(l)].dim;
    if (static_cast<std::size_t>(p.vector.size()) != d) {
      throw LayoutError("contraction vector has size " + std::to_string(p.vector.size()) +
                        " but its factors have dim " + std::to_string(d));
    }
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
    out.vector = kron(out.vector, p.vector);
  }
  return out;
}

std::vector<Contraction> from_map(const std::map<std::string, Vector>& m) {
  std::vector<Contraction> out;
  for (const auto& [label, v] : m) out.push_back({{label}, v});
  return out;
}

}  // namespace

Operator partial_inner_product(const Operator& m, const std::vector<Contraction>& bras,
                               const std::vector<Contraction>& kets) {
  Contraction bra = merge(m.out_layout, bras);
  Contraction ket = merge(m.in_layout, kets);
  FactorSplit out_split(m.out_layout, bra.labels);
  FactorSplit in_split(m.in_layout, ket.labels);
  const auto ro = static_cast<Eigen::Index>(out_split.rest_dim());
  const auto ri = static_cast<Eigen::Index>(in_split.rest_dim());
  const auto cols = m.matrix.cols();

  Matrix partial = Matrix::Zero(ro, cols);
  for (std::size_t x = 0; x < out_split.sel_dim(); ++x) {
    cplx w = std::conj(bra.vector(static_cast<Eigen::Index>(x)));
    if (w == cplx(0.0)) continue;
    for (Eigen::Index a = 0; a < ro; ++a) {
      partial.row(a) += w * m.matrix.row(
          static_cast<Eigen::Index>(out_split.full(static_cast<std::size_t>(a), x)));
    }
  }
  Matrix out = Matrix::Zero(ro, ri);
  for (std::size_t y = 0; y < in_split.sel_dim(); ++y) {
    cplx w = ket.vector(static_cast<Eigen::Index>(y));
    if (w == cplx(0.0)) continue;
    for (Eigen::Index b = 0; b < ri; ++b) {
      out.col(b) += w * partial.col(
          static_cast<Eigen::Index>(in_split.full(static_cast<std::size_t>(b), y)));
    }
  }
  return Operator(std::move(out), out_split.rest_layout(), in_split.rest_layout());
}

Operator partial_inner_product(const Operator& m, const std::map<std::string, Vector>& bras,
                               const std::map<std::string, Vector>& kets) {
  return partial_inner_product(m, from_map(bras), from_map(kets));
}

LabeledVector contract_bra(const Vector& v, const SystemLayout& layout,
                           const std::vector<Contraction>& bras) {
  Contraction bra = merge(layout, bras);
  FactorSplit split(layout, bra.labels);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(split.rest_dim()));
  for (std::size_t r = 0; r < split.rest_dim(); ++r) {
    cplx acc = 0.0;
    for (std::size_t x = 0; x < split.sel_dim(); ++x) {
      acc += std::conj(bra.vector(static_cast<Eigen::Index>(x))) *
             v(static_cast<Eigen::Index>(split.full(r, x)));
    }
    out(static_cast<Eigen::Index>(r)) = acc;
  }
  return {std::move(out), split.rest_layout()};
}

LabeledVector apply_operator(const Operator& op, const Vector& v, const SystemLayout& layout) {
  const auto in_labels = op.in_layout.labels();
  FactorSplit split(layout, in_labels);
  if (!split.sel_layout().same_shape(op.in_layout)) {
    throw LayoutError("operator input layout does not match the state factors");
  }
  const auto din = static_cast<Eigen::Index>(split.sel_dim());
  const auto dout = op.matrix.rows();
  Vector out(static_cast<Eigen::Index>(split.rest_dim()) * dout);
  Vector seg(din);
  for (std::size_t r = 0; r < split.rest_dim(); ++r) {
    for (Eigen::Index s = 0; s < din; ++s) {
      seg(s) = v(static_cast<Eigen::Index>(split.full(r, static_cast<std::size_t>(s))));
    }
    out.segment(static_cast<Eigen::Index>(r) * dout, dout) = op.matrix * seg;
  }
  SystemLayout appended = SystemLayout::concat(split.rest_layout(), op.out_layout);
  if (op.out_layout.labels() == in_labels) {
    auto order = layout.labels();
    SystemLayout target = appended.select(order);
    return {permute_vector(out, appended, order), target};
  }
  return {std::move(out), std::move(appended)};
}

Vector apply_local(const Matrix& op, const std::vector<std::string>& labels, const Vector& v,
                   const SystemLayout& layout) {
  FactorSplit split(layout, labels);
  const auto d = static_cast<Eigen::Index>(split.sel_dim());
  if (op.rows() != d || op.cols() != d) throw LayoutError("apply_local: operator size mismatch");
  Vector out(v.size());
  Vector seg(d);
  for (std::size_t r = 0; r < split.rest_dim(); ++r) {
    for (Eigen::Index s = 0; s < d; ++s) {
      seg(s) = v(static_cast<Eigen::Index>(split.full(r, static_cast<std::size_t>(s))));
    }
    Vector res = op * seg;
    for (Eigen::Index s = 0; s < d; ++s) {
      out(static_cast<Eigen::Index>(split.full(r, static_cast<std::size_t>(s)))) = res(s);
    }
  }
  return out;
}

Spectrum eig_desc(const Matrix& hermitian, const SystemLayout& layout) {
  if (static_cast<std::size_t>(hermitian.rows()) != layout.total_dim() ||
      hermitian.rows() != hermitian.cols()) {
    throw LayoutError("eig_desc: matrix does not match layout");
  }
  double dev = hermitian_deviation(hermitian);
  if (dev > tol::herm) {
    throw InputError("eig_desc: matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  HermitianEigen e = hermitian_eigen_desc(hermitian);
  Spectrum out;
  out.eigenvalues.assign(e.values.data(), e.values.data() + e.values.size());
  out.vectors = std::move(e.vectors);
  out.layout = layout;
  return out;
}

Spectrum eig_desc(const DensityOperator& rho) { return eig_desc(rho.matrix(), rho.layout()); }

PureState purify(const DensityOperator& rho, const std::string& env_label,
                 std::optional<std::size_t> env_dim) {
  if (!rho.is_normalized()) throw InputError("purify requires a normalized state");
  Spectrum spec = eig_desc(rho);
  std::size_t rank = 0;
  for (double l : spec.eigenvalues) {
    if (l > tol::eig) ++rank;
  }
  const std::size_t edim = env_dim.value_or(rho.dim());
  if (edim < rank) {
    throw InputError("purify: environment dim " + std::to_string(edim) + " below rank " +
                     std::to_string(rank));
  }
  SystemLayout env = SystemLayout::single(env_label, edim, Role::Environment);
  SystemLayout layout = SystemLayout::concat(rho.layout(), env);
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  const auto d = static_cast<Eigen::Index>(rho.dim());
  for (std::size_t i = 0; i < rank; ++i) {
    double amp = std::sqrt(std::max(spec.eigenvalues[i], 0.0));
    for (Eigen::Index a = 0; a < d; ++a) {
      psi(a * static_cast<Eigen::Index>(edim) + static_cast<Eigen::Index>(i)) +=
          amp * spec.vectors(a, static_cast<Eigen::Index>(i));
    }
  }
  psi /= psi.norm();
  fix_phase(psi);
  return PureState(std::move(psi), std::move(layout));
}

namespace {

// Coefficient matrix C(s, r) = psi(full(r, s)) for shared s and rest r.
Matrix coefficient_matrix(const Vector& v, const FactorSplit& split) {
  Matrix c(static_cast<Eigen::Index>(split.sel_dim()), static_cast<Eigen::Index>(split.rest_dim()));
  for (std::size_t r = 0; r < split.rest_dim(); ++r) {
    for (std::size_t s = 0; s < split.sel_dim(); ++s) {
      c(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) =
          v(static_cast<Eigen::Index>(split.full(r, s)));
    }
  }
  return c;
}

}  // namespace

Operator uhlmann_unitary(const PureState& psi1, const PureState& psi2,
                         const std::vector<std::string>& shared) {
  const SystemLayout& layout = psi2.layout();
  PureState aligned = psi1;
  if (!psi1.layout().same_shape(layout)) {
    aligned = permute(psi1, layout.labels());
    if (!aligned.layout().same_shape(layout)) {
      throw LayoutError("matching_unitary: states live on different layouts");
    }
  }
  FactorSplit split(layout, shared);
  Matrix m1 = coefficient_matrix(aligned.vector(), split);
  Matrix m2 = coefficient_matrix(psi2.vector(), split);
  // (I (x) U) psi2 has coefficients m2 U^T; choose U^T as the polar factor
  // of m2^dagger m1.
  Eigen::JacobiSVD<Matrix> svd(m2.adjoint() * m1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix ut = svd.matrixU() * svd.matrixV().adjoint();
  return Operator::square(ut.transpose(), split.rest_layout());
}

Operator matching_unitary(const PureState& psi1, const PureState& psi2,
                          const std::vector<std::string>& shared) {
  DensityOperator r1 = reduced_state(psi1, shared);
  DensityOperator r2 = reduced_state(psi2, shared);
  double diff = (r1.matrix() - r2.matrix()).norm();
  if (diff > tol::match) {
    throw VerificationError("matching_unitary: reduced states differ by " + std::to_string(diff) +
                            " (inputs do not purify the same state)");
  }
  return uhlmann_unitary(psi1, psi2, shared);
}

double entropy_bits(const std::vector<double>& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l > tol::eig) s -= l * std::log2(l);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityOperator& rho) {
  if (!rho.is_normalized()) throw InputError("entropy requires a normalized state");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  const RealVector& ev = solver.eigenvalues();
  return entropy_bits(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

double fidelity_with_pure(const DensityOperator& rho, const PureState& psi) {
  const Vector& v = psi.layout().same_shape(rho.layout())
                        ? psi.vector()
                        : permute(psi, rho.layout().labels()).vector();
  if (static_cast<std::size_t>(v.size()) != rho.dim()) {
    throw LayoutError("fidelity_with_pure: layout mismatch");
  }
  return v.dot(rho.matrix() * v).real();
}

}  // namespace mqc
