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

#include "mqc/channels.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "factor_split.hpp"
#include "mqc/errors.hpp"
#include "mqc/random.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

std::string_view to_string(MapKind kind) {
  return kind == MapKind::TracePreserving ? "trace-preserving" : "trace-nonincreasing";
}

MapKind map_kind_from_string(std::string_view text) {
  if (text == "trace-preserving" || text == "TP") return MapKind::TracePreserving;
  if (text == "trace-nonincreasing" || text == "TNI") return MapKind::TraceNonIncreasing;
  throw InputError("unknown map kind '" + std::string(text) + "'");
}

namespace {

Matrix completeness(const std::vector<Matrix>& ops, Eigen::Index in_dim) {
  Matrix s = Matrix::Zero(in_dim, in_dim);
  for (const auto& e : ops) s.noalias() += e.adjoint() * e;
  return s;
}

double max_eigenvalue(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (s + s.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace

KrausMap::KrausMap(std::vector<Matrix> ops, SystemLayout in_layout, SystemLayout out_layout,
                   MapKind kind)
    : ops_(std::move(ops)), in_(std::move(in_layout)), out_(std::move(out_layout)), kind_(kind) {
  if (ops_.empty()) throw InputError("Kraus map needs at least one operator");
  const auto din = static_cast<Eigen::Index>(in_.total_dim());
  const auto dout = static_cast<Eigen::Index>(out_.total_dim());
  for (const auto& e : ops_) {
    if (e.rows() != dout || e.cols() != din) {
      throw LayoutError("Kraus operator is " + std::to_string(e.rows()) + "x" +
                        std::to_string(e.cols()) + ", expected " + std::to_string(dout) + "x" +
                        std::to_string(din));
    }
    if (!e.allFinite()) throw InputError("Kraus operator has non-finite entries");
  }
  Matrix s = completeness(ops_, din);
  if (kind_ == MapKind::TracePreserving) {
    double dev = (s - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
    if (dev > tol::tp) {
      throw InputError("map declared trace-preserving deviates by " + std::to_string(dev));
    }
  } else {
    double top = max_eigenvalue(s);
    if (top > 1.0 + tol::tp) {
      throw InputError("map declared trace-nonincreasing has completeness eigenvalue " +
                       std::to_string(top));
    }
  }
}

KrausMap KrausMap::relabeled(const std::vector<std::string>& in_labels,
                             const std::vector<std::string>& out_labels) const {
  return KrausMap(ops_, in_.relabeled(in_labels), out_.relabeled(out_labels), kind_);
}

ValidationReport validate(const KrausMap& map) {
  ValidationReport r;
  r.declared = map.kind();
  const auto din = static_cast<Eigen::Index>(map.in_layout().total_dim());
  Matrix s = completeness(map.ops(), din);
  r.tp_deviation = (s - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
  r.max_eigenvalue = max_eigenvalue(s);
  r.tp_pass = r.tp_deviation <= tol::tp;
  r.tni_pass = r.max_eigenvalue <= 1.0 + tol::tp;
  r.pass = map.kind() == MapKind::TracePreserving ? r.tp_pass : r.tni_pass;
  return r;
}

KrausMap compose(const KrausMap& second, const KrausMap& first) {
  if (!first.out_layout().same_shape(second.in_layout())) {
    throw LayoutError("compose: first map output layout does not match second map input");
  }
  std::vector<Matrix> ops;
  ops.reserve(first.size() * second.size());
  for (const auto& f : first.ops()) {
    for (const auto& s : second.ops()) ops.push_back(s * f);
  }
  MapKind kind = first.is_trace_preserving() && second.is_trace_preserving()
                     ? MapKind::TracePreserving
                     : MapKind::TraceNonIncreasing;
  return KrausMap(std::move(ops), first.in_layout(), second.out_layout(), kind);
}

KrausMap tensor_maps(const std::vector<KrausMap>& maps) {
  if (maps.empty()) throw InputError("tensor_maps of an empty list");
  std::vector<Matrix> ops = maps.front().ops();
  SystemLayout in = maps.front().in_layout();
  SystemLayout out = maps.front().out_layout();
  bool tp = maps.front().is_trace_preserving();
  for (std::size_t m = 1; m < maps.size(); ++m) {
    std::vector<Matrix> next;
    next.reserve(ops.size() * maps[m].size());
    for (const auto& a : ops) {
      for (const auto& b : maps[m].ops()) next.push_back(kron(a, b));
    }
    ops = std::move(next);
    in = SystemLayout::concat(in, maps[m].in_layout());
    out = SystemLayout::concat(out, maps[m].out_layout());
    tp = tp && maps[m].is_trace_preserving();
  }
  return KrausMap(std::move(ops), std::move(in), std::move(out),
                  tp ? MapKind::TracePreserving : MapKind::TraceNonIncreasing);
}

KrausMap identity_map(const SystemLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return KrausMap({Matrix::Identity(d, d)}, layout, layout, MapKind::TracePreserving);
}

KrausMap prune(const KrausMap& map, double threshold) {
  std::vector<Matrix> kept;
  for (const auto& e : map.ops()) {
    if (e.norm() >= threshold) kept.push_back(e);
  }
  if (kept.empty()) kept.push_back(map.ops().front());
  return KrausMap(std::move(kept), map.in_layout(), map.out_layout(), map.kind());
}

DensityOperator apply(const KrausMap& map, const DensityOperator& rho) {
  const auto in_labels = map.in_layout().labels();
  detail::FactorSplit split(rho.layout(), in_labels);
  if (!split.sel_layout().same_shape(map.in_layout())) {
    throw LayoutError("apply: map input layout does not match the state factors");
  }
  const auto rest = static_cast<Eigen::Index>(split.rest_dim());
  const auto din = static_cast<Eigen::Index>(split.sel_dim());
  const auto dout = static_cast<Eigen::Index>(map.out_layout().total_dim());

  // R is rho reordered to (rest, in) factor order.
  const Eigen::Index n = rest * din;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index a = 0; a < rest; ++a) {
    for (Eigen::Index x = 0; x < din; ++x) {
      idx[static_cast<std::size_t>(a * din + x)] = static_cast<Eigen::Index>(
          split.full(static_cast<std::size_t>(a), static_cast<std::size_t>(x)));
    }
  }
  Matrix r(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      r(i, j) = rho.matrix()(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }

  const Eigen::Index m = rest * dout;
  Matrix out = Matrix::Zero(m, m);
  Matrix left(m, n);
  for (const auto& e : map.ops()) {
    for (Eigen::Index a = 0; a < rest; ++a) {
      left.middleRows(a * dout, dout).noalias() = e * r.middleRows(a * din, din);
    }
    Matrix ed = e.adjoint();
    for (Eigen::Index b = 0; b < rest; ++b) {
      out.middleCols(b * dout, dout).noalias() += left.middleCols(b * din, din) * ed;
    }
  }

  SystemLayout appended = SystemLayout::concat(split.rest_layout(), map.out_layout());
  if (map.out_layout().labels() == in_labels) {
    auto order = rho.layout().labels();
    return DensityOperator::trusted(permute_matrix(out, appended, order), appended.select(order));
  }
  return DensityOperator::trusted(std::move(out), std::move(appended));
}

namespace {

Matrix shift_op(std::size_t d, std::size_t a) {
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    x(static_cast<Eigen::Index>((j + a) % d), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return x;
}

Matrix clock_op(std::size_t d, std::size_t b) {
  Matrix z = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>((j * b) % d) /
                   static_cast<double>(d);
    z(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = std::polar(1.0, angle);
  }
  return z;
}

void require_unit_interval(double p, std::string_view name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError(std::string(name) + " parameter " + std::to_string(p) + " outside [0, 1]");
  }
}

}  // namespace

KrausMap standard_channel(StandardChannel which, double param, const SystemLayout& layout) {
  const std::size_t d = layout.total_dim();
  const auto di = static_cast<Eigen::Index>(d);
  const double dd = static_cast<double>(d);
  std::vector<Matrix> ops;
  switch (which) {
    case StandardChannel::Identity:
      ops.push_back(Matrix::Identity(di, di));
      break;
    case StandardChannel::Depolarizing: {
      require_unit_interval(param, "depolarizing");
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
          double w = (a == 0 && b == 0) ? 1.0 - param + param / (dd * dd) : param / (dd * dd);
          if (w > 0.0 || (a == 0 && b == 0)) ops.push_back(std::sqrt(w) * shift_op(d, a) * clock_op(d, b));
        }
      }
      break;
    }
    case StandardChannel::Dephasing: {
      require_unit_interval(param, "dephasing");
      ops.push_back(std::sqrt(1.0 - param) * Matrix::Identity(di, di));
      if (d > 1 && param > 0.0) {
        for (std::size_t k = 1; k < d; ++k) {
          ops.push_back(std::sqrt(param / (dd - 1.0)) * clock_op(d, k));
        }
      }
      break;
    }
    case StandardChannel::AmplitudeDamping: {
      require_unit_interval(param, "amplitude_damping");
      if (d != 2) throw InputError("amplitude_damping is defined for a qubit only");
      Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(1.0 - param);
      k1(0, 1) = std::sqrt(param);
      ops = {k0, k1};
      break;
    }
  }
  return KrausMap(std::move(ops), layout, layout, MapKind::TracePreserving);
}

KrausMap parse_channel_spec(std::string_view spec, const SystemLayout& layout) {
  std::string_view name = spec;
  double param = 0.0;
  bool has_param = false;
  if (auto pos = spec.find(':'); pos != std::string_view::npos) {
    name = spec.substr(0, pos);
    std::string value(spec.substr(pos + 1));
    try {
      std::size_t used = 0;
      param = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InputError("bad channel parameter in '" + std::string(spec) + "'");
    }
    has_param = true;
  }
  auto need = [&](bool required) {
    if (required && !has_param) throw InputError("channel '" + std::string(name) + "' needs a parameter");
    if (!required && has_param) throw InputError("channel '" + std::string(name) + "' takes no parameter");
  };
  if (name == "identity") {
    need(false);
    return standard_channel(StandardChannel::Identity, 0.0, layout);
  }
  if (name == "depolarizing") {
    need(true);
    return standard_channel(StandardChannel::Depolarizing, param, layout);
  }
  if (name == "dephasing") {
    need(true);
    return standard_channel(StandardChannel::Dephasing, param, layout);
  }
  if (name == "amplitude_damping") {
    need(true);
    return standard_channel(StandardChannel::AmplitudeDamping, param, layout);
  }
  throw InputError("unknown channel '" + std::string(name) + "'");
}

KrausMap random_channel(const SystemLayout& in, const SystemLayout& out, std::size_t env_dim,
                        std::uint64_t seed) {
  const std::size_t din = in.total_dim();
  const std::size_t dout = out.total_dim();
  if (env_dim < 1) throw InputError("random_channel: env_dim must be at least 1");
  if (dout * env_dim < din) {
    throw InputError("random_channel: out_dim * env_dim < in_dim, no isometry exists");
  }
  Rng rng(seed);
  Matrix v = random_isometry(dout * env_dim, din, rng);
  std::vector<Matrix> ops;
  ops.reserve(env_dim);
  for (std::size_t k = 0; k < env_dim; ++k) {
    Matrix e(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(din));
    for (std::size_t o = 0; o < dout; ++o) {
      e.row(static_cast<Eigen::Index>(o)) = v.row(static_cast<Eigen::Index>(o * env_dim + k));
    }
    ops.push_back(std::move(e));
  }
  return KrausMap(std::move(ops), in, out, MapKind::TracePreserving);
}

KrausMap random_channel(std::size_t in_dim, std::size_t out_dim, std::size_t env_dim,
                        std::uint64_t seed) {
  return random_channel(SystemLayout::single("in", in_dim), SystemLayout::single("out", out_dim),
                        env_dim, seed);
}

PartialIsometry::PartialIsometry(Matrix w, SystemLayout in_layout, SystemLayout out_layout)
    : w_(std::move(w)), in_(std::move(in_layout)), out_(std::move(out_layout)) {
  if (static_cast<std::size_t>(w_.rows()) != out_.total_dim() ||
      static_cast<std::size_t>(w_.cols()) != in_.total_dim()) {
    throw LayoutError("partial isometry shape does not match its layouts");
  }
  support_ = w_.adjoint() * w_;
  double err = idempotency_error();
  if (err > tol::iso) {
    throw InputError("W^dagger W is not a projector (error " + std::to_string(err) + ")");
  }
}

double PartialIsometry::idempotency_error() const {
  if (support_.size() == 0) return 0.0;
  return (support_ * support_ - support_).cwiseAbs().maxCoeff();
}

namespace {

// Operators sqrt(c_n s_m) |s_m><u_n| for the decompositions of the missing
// weight C = sum c_n |u_n><u_n| and the sink.
std::vector<Matrix> routing_ops(const Matrix& missing, const DensityOperator& sink) {
  std::vector<Matrix> ops;
  HermitianEigen c = hermitian_eigen_desc(missing);
  HermitianEigen s = hermitian_eigen_desc(sink.matrix());
  for (Eigen::Index n = 0; n < c.values.size(); ++n) {
    if (c.values(n) <= 1e-14) continue;
    for (Eigen::Index m = 0; m < s.values.size(); ++m) {
      if (s.values(m) <= 1e-14) continue;
      ops.push_back(std::sqrt(c.values(n) * s.values(m)) * s.vectors.col(m) *
                    c.vectors.col(n).adjoint());
    }
  }
  return ops;
}

void require_sink(const DensityOperator& sink, const SystemLayout& out) {
  if (!sink.layout().same_shape(out)) throw LayoutError("sink layout does not match map output");
  if (!sink.is_normalized()) throw InputError("sink must be a normalized state");
}

}  // namespace

KrausMap embed_isometry_tp(const PartialIsometry& w, const DensityOperator& sink) {
  require_sink(sink, w.out_layout());
  const auto din = static_cast<Eigen::Index>(w.in_layout().total_dim());
  std::vector<Matrix> ops{w.matrix()};
  auto extra = routing_ops(Matrix::Identity(din, din) - w.support_projector(), sink);
  ops.insert(ops.end(), extra.begin(), extra.end());
  return KrausMap(std::move(ops), w.in_layout(), w.out_layout(), MapKind::TracePreserving);
}

KrausMap tp_completion(const KrausMap& map, const DensityOperator& sink) {
  require_sink(sink, map.out_layout());
  const auto din = static_cast<Eigen::Index>(map.in_layout().total_dim());
  std::vector<Matrix> ops = map.ops();
  auto extra = routing_ops(Matrix::Identity(din, din) - completeness(map.ops(), din), sink);
  ops.insert(ops.end(), extra.begin(), extra.end());
  return KrausMap(std::move(ops), map.in_layout(), map.out_layout(), MapKind::TracePreserving);
}

}  // namespace mqc
