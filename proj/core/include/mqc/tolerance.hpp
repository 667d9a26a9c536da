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

namespace mqc::tol {

inline constexpr double herm = 1e-8;
inline constexpr double psd = 1e-8;
inline constexpr double trace = 1e-8;
inline constexpr double norm = 1e-8;
inline constexpr double rec = 1e-8;
inline constexpr double orth = 1e-8;
inline constexpr double match = 1e-8;
inline constexpr double tp = 1e-8;
inline constexpr double iso = 1e-8;
inline constexpr double eig = 1e-12;
inline constexpr double bound = 1e-9;
inline constexpr double prune = 1e-12;

/// Eigenvalues closer than this are treated as one degenerate block.
inline constexpr double degeneracy = 1e-10;
/// Singular values at or below this are outside an operator's support.
inline constexpr double support = 1e-10;

inline constexpr std::size_t max_total_dim = 4096;

}  // namespace mqc::tol
