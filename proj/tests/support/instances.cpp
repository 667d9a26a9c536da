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

#include "instances.hpp"

#include <cmath>

#include "mqc/linalg.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc::testing {

SystemLayout sender_leg(std::size_t i, std::size_t dim) {
  return SystemLayout({{"A" + std::to_string(i + 1), dim, Role::SenderLeg, static_cast<int>(i), 0}});
}

SystemLayout sender_legs(std::size_t k, std::size_t dim) {
  SystemLayout out;
  for (std::size_t i = 0; i < k; ++i) out = SystemLayout::concat(out, sender_leg(i, dim));
  return out;
}

KrausMap noisy_identity(const SystemLayout& layout, double q, std::size_t env, Rng& rng) {
  KrausMap noise = random_channel(layout, layout, env, rng.next());
  std::vector<Matrix> ops{std::sqrt(1.0 - q) *
                          Matrix::Identity(static_cast<Eigen::Index>(layout.total_dim()),
                                           static_cast<Eigen::Index>(layout.total_dim()))};
  for (const auto& k : noise.ops()) ops.push_back(std::sqrt(q) * k);
  return KrausMap(std::move(ops), layout, layout, MapKind::TracePreserving);
}

KrausMap noisy_isometry(const Matrix& w1, const Matrix& w2, double s, const SystemLayout& in,
                        const SystemLayout& out) {
  return KrausMap({std::sqrt(1.0 - s) * w1, std::sqrt(s) * w2}, in, out,
                  MapKind::TracePreserving);
}

std::vector<PureState> purified(const std::vector<DensityOperator>& sources) {
  std::vector<PureState> out;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    out.push_back(purify(sources[i], "R" + std::to_string(i + 1)));
  }
  return out;
}

std::vector<DensityOperator> random_sources(std::size_t k, std::size_t dim, Rng& rng,
                                            bool full_rank) {
  std::vector<DensityOperator> out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t rank = full_rank ? dim : 1 + rng.index(dim);
    out.push_back(random_density(sender_leg(i, dim), rank, rng));
  }
  return out;
}

Instance near_unitary_mac(std::size_t k, double s, double q, Rng& rng) {
  std::vector<KrausMap> enc;
  std::vector<Matrix> inverse;
  for (std::size_t i = 0; i < k; ++i) {
    Matrix u = random_unitary(2, rng);
    Matrix v = random_unitary(2, rng);
    enc.push_back(noisy_isometry(u, v, s, sender_leg(i, 2), sender_leg(i, 2)));
    inverse.push_back(u.adjoint());
  }
  SystemLayout all = sender_legs(k, 2);
  KrausMap channel = noisy_identity(all, q, 2, rng);
  KrausMap dec({kron_all(inverse)}, all, all, MapKind::TracePreserving);
  std::vector<DensityOperator> sources = random_sources(k, 2, rng, true);
  std::vector<PureState> inputs = purified(sources);
  return {Protocol::zero_way(std::move(enc), std::move(channel), {std::move(dec)}), sources,
          inputs};
}

Instance random_mac(std::size_t k, std::size_t max_kraus, Rng& rng) {
  std::vector<KrausMap> enc;
  for (std::size_t i = 0; i < k; ++i) {
    enc.push_back(random_channel(sender_leg(i, 2), sender_leg(i, 2), 1 + rng.index(max_kraus),
                                 rng.next()));
  }
  SystemLayout all = sender_legs(k, 2);
  KrausMap channel = random_channel(all, all, 1 + rng.index(max_kraus), rng.next());
  KrausMap dec = random_channel(all, all, 1 + rng.index(max_kraus), rng.next());
  std::vector<DensityOperator> sources = random_sources(k, 2, rng);
  std::vector<PureState> inputs = purified(sources);
  return {Protocol::zero_way(std::move(enc), std::move(channel), {std::move(dec)}), sources,
          inputs};
}

namespace {

// Splits one sender's instrument into per-outcome maps together with the
// unitary each outcome should be undone by (identity for random ones).
struct Instrument {
  std::vector<KrausMap> outcomes;
  std::vector<Matrix> inverse;
};

Instrument sender_instrument(std::size_t i, bool near_ideal, Rng& rng) {
  const SystemLayout leg = sender_leg(i, 2);
  const std::size_t outcomes = 1 + rng.index(3);
  Instrument ins;
  if (near_ideal) {
    std::vector<double> w(outcomes);
    double total = 0.0;
    for (auto& x : w) total += (x = rng.uniform(0.2, 1.0));
    const double s = rng.uniform(0.0, 0.004);
    for (std::size_t j = 0; j < outcomes; ++j) {
      Matrix u = random_unitary(2, rng);
      Matrix v = random_unitary(2, rng);
      const double p = w[j] / total;
      ins.outcomes.emplace_back(std::vector<Matrix>{std::sqrt(p * (1.0 - s)) * u,
                                                    std::sqrt(p * s) * v},
                                leg, leg, MapKind::TraceNonIncreasing);
      ins.inverse.push_back(u.adjoint());
    }
    return ins;
  }
  const std::size_t per = 1 + rng.index(2);
  KrausMap all = random_channel(leg, leg, outcomes * per, rng.next());
  for (std::size_t j = 0; j < outcomes; ++j) {
    std::vector<Matrix> ops(all.ops().begin() + static_cast<std::ptrdiff_t>(j * per),
                            all.ops().begin() + static_cast<std::ptrdiff_t>((j + 1) * per));
    ins.outcomes.emplace_back(std::move(ops), leg, leg, MapKind::TraceNonIncreasing);
    ins.inverse.push_back(Matrix::Identity(2, 2));
  }
  return ins;
}

}  // namespace

Instance random_one_way(std::size_t k, bool near_ideal, Rng& rng) {
  std::vector<Instrument> senders;
  for (std::size_t i = 0; i < k; ++i) senders.push_back(sender_instrument(i, near_ideal, rng));
  SystemLayout all = sender_legs(k, 2);
  KrausMap channel = near_ideal ? noisy_identity(all, rng.uniform(0.0, 0.002), 2, rng)
                                : random_channel(all, all, 1 + rng.index(4), rng.next());
  // Branches enumerate the product of the senders' outcomes.
  std::vector<Branch> branches;
  std::vector<std::size_t> index(k, 0);
  while (true) {
    Branch b;
    std::vector<Matrix> inverse;
    for (std::size_t i = 0; i < k; ++i) {
      b.encodings.push_back(senders[i].outcomes[index[i]]);
      inverse.push_back(senders[i].inverse[index[i]]);
    }
    if (near_ideal) {
      b.decodings.emplace_back(std::vector<Matrix>{kron_all(inverse)}, all, all,
                               MapKind::TracePreserving);
    } else {
      b.decodings.push_back(random_channel(all, all, 1 + rng.index(4), rng.next()));
    }
    branches.push_back(std::move(b));
    std::size_t i = 0;
    while (i < k && ++index[i] == senders[i].outcomes.size()) index[i++] = 0;
    if (i == k) break;
  }
  std::vector<DensityOperator> sources = random_sources(k, 2, rng);
  std::vector<PureState> inputs = purified(sources);
  return {Protocol::one_way(std::move(channel), std::move(branches)), sources, inputs};
}

}  // namespace mqc::testing
