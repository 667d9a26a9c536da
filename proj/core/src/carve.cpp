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

#include <cmath>
#include <limits>

#include "mqc/bounds.hpp"
#include "mqc/errors.hpp"
#include "mqc/tensor_ops.hpp"

namespace mqc {

namespace {

// <v| tr_others channel(|v><v| (x) other sources) |v> for leg l.
double eigenvector_fidelity(const KrausMap& channel, const std::vector<DensityOperator>& sources,
                            std::size_t l, const Vector& v) {
  std::vector<DensityOperator> parts;
  for (std::size_t m = 0; m < sources.size(); ++m) {
    if (m == l) {
      parts.push_back(DensityOperator::from_pure(PureState(v, sources[m].layout())));
    } else {
      parts.push_back(sources[m]);
    }
  }
  DensityOperator in = permute(tensor_all(parts), channel.in_layout().labels());
  DensityOperator out = apply(channel, in);
  DensityOperator reduced = reduced_state(out, sources[l].layout().labels());
  return v.dot(reduced.matrix() * v).real();
}

}  // namespace

CarveResult carve_subspace(const KrausMap& channel, const std::vector<DensityOperator>& sources,
                           const std::vector<double>& local_eta, const CarvePolicy& policy) {
  const std::size_t k = sources.size();
  if (k == 0 || local_eta.size() != k) throw InputError("need one eta per source");
  if (!channel.out_layout().same_shape(channel.in_layout())) {
    throw LayoutError("carving needs a channel whose output layout equals its input");
  }
  if (channel.in_layout().size() != k) {
    throw LayoutError("carving needs one single-factor source per channel input factor");
  }
  CarveResult res;
  std::vector<PureState> purified;
  for (std::size_t l = 0; l < k; ++l) {
    if (sources[l].layout().size() != 1) throw LayoutError("each source must be one leg factor");
    const auto& label = sources[l].layout()[0].label;
    if (channel.in_layout()[channel.in_layout().index_of(label)].dim != sources[l].dim()) {
      throw LayoutError("source dim differs from channel leg '" + label + "'");
    }
    res.legs.push_back(label);
    purified.push_back(purify(sources[l], "ref:" + label));
  }
  for (std::size_t l = 0; l < k; ++l) {
    double fe = local_entanglement_fidelity(purified, channel, l).value;
    res.measured_local_Fe.push_back(fe);
    if (fe < 1.0 - local_eta[l] - tol::bound) {
      throw InputError("carving precondition: local F_e " + std::to_string(fe) + " of leg '" +
                       res.legs[l] + "' is below 1 - eta");
    }
  }
  res.local_eta = local_eta;

  std::vector<Spectrum> spectra;
  std::vector<std::vector<std::size_t>> kept(k);
  std::vector<std::vector<double>> fid(k);
  for (std::size_t l = 0; l < k; ++l) {
    spectra.push_back(eig_desc(sources[l]));
    for (std::size_t i = 0; i < spectra[l].size(); ++i) {
      if (spectra[l].eigenvalues[i] > tol::eig) kept[l].push_back(i);
    }
    if (kept[l].empty()) throw InputError("source of leg '" + res.legs[l] + "' has no support");
    fid[l].assign(spectra[l].size(), 0.0);
    for (auto i : kept[l]) {
      fid[l][i] = eigenvector_fidelity(channel, sources, l,
                                       spectra[l].vectors.col(static_cast<Eigen::Index>(i)));
    }
    res.support_dim.push_back(kept[l].size());
  }
  res.removed_count.assign(k, 0);
  double eta_sum = 0.0;
  for (double e : local_eta) eta_sum += e;

  std::size_t removals = 0;
  while (true) {
    std::vector<Subspace> subspaces;
    res.kept_weight.assign(k, 0.0);
    double beta_prod = 1.0;
    for (std::size_t l = 0; l < k; ++l) {
      Matrix basis(static_cast<Eigen::Index>(sources[l].dim()), static_cast<Eigen::Index>(kept[l].size()));
      for (std::size_t j = 0; j < kept[l].size(); ++j) {
        basis.col(static_cast<Eigen::Index>(j)) = spectra[l].vectors.col(static_cast<Eigen::Index>(kept[l][j]));
        res.kept_weight[l] += spectra[l].eigenvalues[kept[l][j]];
      }
      beta_prod *= res.kept_weight[l];
      subspaces.emplace_back(basis, sources[l].layout()[0]);
    }
    res.certified_bound = 1.0 - eta_sum / beta_prod;
    res.measured_report = min_subspace_fidelity(subspaces, channel, policy.minimizer);
    res.measured_Fs = res.measured_report.value;

    bool stop = removals >= policy.max_removals;
    if (policy.stop_when_certified && res.measured_Fs >= res.certified_bound - 1e-9) stop = true;
    if (policy.fidelity_target && res.measured_Fs >= *policy.fidelity_target) stop = true;
    std::size_t best_leg = k, best_pos = 0;
    double best_fid = std::numeric_limits<double>::infinity();
    if (!stop) {
      for (std::size_t l = 0; l < k; ++l) {
        if (kept[l].size() < 2) continue;
        for (std::size_t j = 0; j < kept[l].size(); ++j) {
          const std::size_t i = kept[l][j];
          if (res.kept_weight[l] - spectra[l].eigenvalues[i] < policy.beta_min) continue;
          if (fid[l][i] < best_fid) {
            best_fid = fid[l][i];
            best_leg = l;
            best_pos = j;
          }
        }
      }
    }
    if (stop || best_leg == k) {
      res.kept_basis.clear();
      res.dims.clear();
      res.log2_dims.clear();
      for (std::size_t l = 0; l < k; ++l) {
        res.kept_basis.push_back(subspaces[l].basis());
        res.dims.push_back(static_cast<double>(kept[l].size()));
        res.log2_dims.push_back(std::log2(static_cast<double>(kept[l].size())));
      }
      break;
    }
    kept[best_leg].erase(kept[best_leg].begin() + static_cast<std::ptrdiff_t>(best_pos));
    ++res.removed_count[best_leg];
    ++removals;
  }
  res.certified_holds = res.measured_Fs >= res.certified_bound - 1e-6;
  return res;
}

}  // namespace mqc
