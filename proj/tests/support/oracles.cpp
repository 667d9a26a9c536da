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

#include "oracles.hpp"

#include <cmath>

namespace mqc::oracle {

Dense kron(const Dense& a, const Dense& b) {
  Dense out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index k = 0; k < b.rows(); ++k) {
        for (Eigen::Index l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

Dense kron_all(const std::vector<Dense>& factors) {
  Dense out = Dense::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Ops compose(const Ops& second, const Ops& first) {
  Ops out;
  for (const auto& b : second) {
    for (const auto& a : first) out.push_back(b * a);
  }
  return out;
}

Ops tensor(const std::vector<Ops>& maps) {
  Ops out{Dense::Identity(1, 1)};
  for (const auto& m : maps) {
    Ops next;
    for (const auto& a : out) {
      for (const auto& b : m) next.push_back(kron(a, b));
    }
    out = std::move(next);
  }
  return out;
}

double entanglement_fidelity(const Ops& ops, const Dense& rho) {
  double f = 0.0;
  for (const auto& k : ops) f += std::norm((k * rho).trace());
  return f;
}

double trace_out(const Ops& ops, const Dense& rho) {
  double t = 0.0;
  for (const auto& k : ops) t += (k * rho * k.adjoint()).trace().real();
  return t;
}

Dense trace_second(const Dense& rho, std::size_t da, std::size_t db) {
  const auto a = static_cast<Eigen::Index>(da);
  const auto b = static_cast<Eigen::Index>(db);
  Dense out = Dense::Zero(a, a);
  for (Eigen::Index i = 0; i < a; ++i) {
    for (Eigen::Index j = 0; j < a; ++j) {
      for (Eigen::Index k = 0; k < b; ++k) out(i, j) += rho(i * b + k, j * b + k);
    }
  }
  return out;
}

Dense trace_first(const Dense& rho, std::size_t da, std::size_t db) {
  const auto a = static_cast<Eigen::Index>(da);
  const auto b = static_cast<Eigen::Index>(db);
  Dense out = Dense::Zero(b, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    for (Eigen::Index j = 0; j < b; ++j) {
      for (Eigen::Index k = 0; k < a; ++k) out(i, j) += rho(k * b + i, k * b + j);
    }
  }
  return out;
}

double entropy_bits(const Dense& rho) {
  Eigen::SelfAdjointEigenSolver<Dense> es(0.5 * (rho + rho.adjoint()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-12) s -= l * std::log2(l);
  }
  return s;
}

double max_abs(const Dense& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Dense completeness(const Ops& ops) {
  Dense out = Dense::Zero(ops.front().cols(), ops.front().cols());
  for (const auto& k : ops) out += k.adjoint() * k;
  return out;
}

}  // namespace mqc::oracle
