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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mqc {

enum class Role { SenderLeg, ReceiverLeg, Reference, Environment };

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

/// One tensor factor. `party` and `slot` index (i, alpha) for sender legs
/// and (j, beta) for receiver legs; they are -1 for other roles.
struct Subsystem {
  std::string label;
  std::size_t dim = 1;
  Role role = Role::Reference;
  int party = -1;
  int slot = -1;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered tensor factorization. Index arithmetic is row-major: the first
/// factor is the most significant digit, so kron(a, b) matches layout {a, b}.
class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<Subsystem> subsystems);

  static SystemLayout single(std::string label, std::size_t dim,
                             Role role = Role::Reference);
  static SystemLayout concat(const SystemLayout& a, const SystemLayout& b);

  std::size_t size() const { return subsystems_.size(); }
  bool empty() const { return subsystems_.empty(); }
  std::size_t total_dim() const { return total_dim_; }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }

  std::optional<std::size_t> find(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }
  std::vector<std::string> labels() const;
  std::vector<std::size_t> dims() const;

  /// Factors named in `labels`, in that order.
  SystemLayout select(const std::vector<std::string>& labels) const;
  /// Factors not named in `labels`, in layout order.
  SystemLayout without(const std::vector<std::string>& labels) const;
  SystemLayout relabeled(const std::vector<std::string>& labels) const;

  /// Same labels and dims in the same order; roles are ignored.
  bool same_shape(const SystemLayout& other) const;
  bool operator==(const SystemLayout& other) const = default;

 private:
  std::vector<Subsystem> subsystems_;
  std::size_t total_dim_ = 1;
};

/// Checks that sender and receiver legs form contiguous (party, slot) ranges
/// with each party's legs adjacent. Returns an empty string on success.
std::string check_party_structure(const SystemLayout& layout);

void require_dim_guard(std::size_t dim, std::size_t max_dim);

}  // namespace mqc
