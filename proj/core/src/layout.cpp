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

#include "mqc/layout.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "mqc/errors.hpp"

namespace mqc {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::SenderLeg:
      return "sender-leg";
    case Role::ReceiverLeg:
      return "receiver-leg";
    case Role::Reference:
      return "reference";
    case Role::Environment:
      return "environment";
  }
  return "reference";
}

Role role_from_string(std::string_view text) {
  if (text == "sender-leg") return Role::SenderLeg;
  if (text == "receiver-leg") return Role::ReceiverLeg;
  if (text == "reference") return Role::Reference;
  if (text == "environment") return Role::Environment;
  throw InputError("unknown role '" + std::string(text) + "'");
}

SystemLayout::SystemLayout(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  std::set<std::string> seen;
  total_dim_ = 1;
  for (const auto& s : subsystems_) {
    if (s.label.empty()) throw LayoutError("empty subsystem label");
    if (s.dim == 0) throw LayoutError("subsystem '" + s.label + "' has dim 0");
    if (!seen.insert(s.label).second) {
      throw LayoutError("duplicate subsystem label '" + s.label + "'");
    }
    if (total_dim_ > std::numeric_limits<std::size_t>::max() / s.dim) {
      throw DimensionGuardError("total dimension overflows size_t");
    }
    total_dim_ *= s.dim;
  }
}

SystemLayout SystemLayout::single(std::string label, std::size_t dim, Role role) {
  return SystemLayout({Subsystem{std::move(label), dim, role}});
}

SystemLayout SystemLayout::concat(const SystemLayout& a, const SystemLayout& b) {
  std::vector<Subsystem> all = a.subsystems_;
  all.insert(all.end(), b.subsystems_.begin(), b.subsystems_.end());
  return SystemLayout(std::move(all));
}

std::optional<std::size_t> SystemLayout::find(std::string_view label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  return std::nullopt;
}

std::size_t SystemLayout::index_of(std::string_view label) const {
  auto idx = find(label);
  if (!idx) throw LayoutError("unknown label '" + std::string(label) + "'");
  return *idx;
}

std::vector<std::string> SystemLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.label);
  return out;
}

std::vector<std::size_t> SystemLayout::dims() const {
  std::vector<std::size_t> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.dim);
  return out;
}

SystemLayout SystemLayout::select(const std::vector<std::string>& labels) const {
  std::vector<Subsystem> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(subsystems_[index_of(l)]);
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::without(const std::vector<std::string>& labels) const {
  for (const auto& l : labels) index_of(l);
  std::vector<Subsystem> out;
  for (const auto& s : subsystems_) {
    if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) {
      out.push_back(s);
    }
  }
  return SystemLayout(std::move(out));
}

SystemLayout SystemLayout::relabeled(const std::vector<std::string>& labels) const {
  if (labels.size() != subsystems_.size()) {
    throw LayoutError("relabel: label count does not match factor count");
  }
  std::vector<Subsystem> out = subsystems_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].label = labels[i];
  return SystemLayout(std::move(out));
}

bool SystemLayout::same_shape(const SystemLayout& other) const {
  if (subsystems_.size() != other.subsystems_.size()) return false;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label != other.subsystems_[i].label) return false;
    if (subsystems_[i].dim != other.subsystems_[i].dim) return false;
  }
  return true;
}

namespace {

std::string check_role(const SystemLayout& layout, Role role) {
  // party -> list of (position, slot)
  std::map<int, std::vector<std::pair<std::size_t, int>>> parties;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& s = layout[i];
    if (s.role != role) continue;
    if (s.party < 0 || s.slot < 0) {
      return "leg '" + s.label + "' lacks party/slot indices";
    }
    parties[s.party].emplace_back(i, s.slot);
  }
  int expected_party = 0;
  for (const auto& [party, legs] : parties) {
    if (party != expected_party) {
      return std::string(to_string(role)) + " parties are not contiguous from 0";
    }
    ++expected_party;
    for (std::size_t k = 0; k < legs.size(); ++k) {
      if (legs[k].second != static_cast<int>(k)) {
        return "party " + std::to_string(party) + " slots are not 0..l-1 in order";
      }
      if (k > 0 && legs[k].first != legs[k - 1].first + 1) {
        return "party " + std::to_string(party) + " legs are not adjacent";
      }
    }
  }
  return {};
}

}  // namespace

std::string check_party_structure(const SystemLayout& layout) {
  auto msg = check_role(layout, Role::SenderLeg);
  if (!msg.empty()) return msg;
  return check_role(layout, Role::ReceiverLeg);
}

void require_dim_guard(std::size_t dim, std::size_t max_dim) {
  if (dim > max_dim) {
    throw DimensionGuardError("dimension " + std::to_string(dim) +
                              " exceeds guard " + std::to_string(max_dim));
  }
}

}  // namespace mqc
