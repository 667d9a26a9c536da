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
#include <string>
#include <vector>

#include "mqc/layout.hpp"

namespace mqc::detail {

/// Maps (rest, selected) multi-index pairs to full row-major indices.
/// Selected factors are ordered as given; rest factors keep layout order.
class FactorSplit {
 public:
  FactorSplit(const SystemLayout& layout, const std::vector<std::string>& selected);

  std::size_t rest_dim() const { return rest_dim_; }
  std::size_t sel_dim() const { return sel_dim_; }
  std::size_t full(std::size_t rest, std::size_t sel) const {
    return table_[rest * sel_dim_ + sel];
  }
  const SystemLayout& rest_layout() const { return rest_layout_; }
  const SystemLayout& sel_layout() const { return sel_layout_; }

 private:
  SystemLayout rest_layout_;
  SystemLayout sel_layout_;
  std::size_t rest_dim_ = 1;
  std::size_t sel_dim_ = 1;
  std::vector<std::size_t> table_;
};

}  // namespace mqc::detail
