// SPDX-License-Identifier: Apache-2.0
//
// dcsit - degrees of freedom of broadcast channels with delayed channel feedback
// Copyright (C) 2026 The dcsit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <span>
#include <vector>

#include "dcsit/rational.hpp"

namespace dcsit::region {

/// Per-receiver order-1 DoF tuple (d_1, ..., d_K), all coordinates >= 0.
class RegionPoint {
 public:
  explicit RegionPoint(std::vector<Rational> d);

  [[nodiscard]] int k() const noexcept { return static_cast<int>(d_.size()); }
  [[nodiscard]] const std::vector<Rational>& coords() const noexcept { return d_; }
  [[nodiscard]] const Rational& operator[](int i) const { return d_.at(static_cast<std::size_t>(i)); }

  friend bool operator==(const RegionPoint&, const RegionPoint&) = default;

 private:
  std::vector<Rational> d_;
};

enum class Mode {
  exhaustive,  ///< every permutation, k <= 8
  sorted,      ///< descending-sorted assignment only
};

/// Throws OutOfRegimeError unless m == k; the region is only known for M = K.
void require_square_system(int m, int k);

/// sum_i d_{pi(i)} / i with pi a 0-based permutation of 0..k-1.
Rational permutation_lhs(const RegionPoint& p, std::span<const int> pi);

bool in_region(const RegionPoint& p, Mode mode = Mode::sorted);

/// Permutations whose constraint holds with equality (k <= 8), in
/// lexicographic order.
std::vector<std::vector<int>> tight_permutations(const RegionPoint& p);

/// (1/H_k, ..., 1/H_k).
RegionPoint symmetric_corner(int k);

/// chi_S / H_|S| for every nonempty S (ascending bitmask), then the origin.
/// Requires 1 <= k <= 6.
std::vector<RegionPoint> corner_candidates(int k);

struct Decomposition {
  bool feasible = false;
  bool exact = true;                ///< weights solved in exact arithmetic
  std::vector<RegionPoint> corners; ///< candidates with positive weight
  std::vector<Rational> weights;    ///< same order as corners; sum <= 1
};

/// Convex weights over corner_candidates(k) whose combination dominates p
/// coordinate-wise, or feasible == false if none exists. Exact pivoting for
/// k <= 4, double precision with 1e-9 slack for k = 5, 6.
Decomposition decompose_time_sharing(const RegionPoint& p);

}  // namespace dcsit::region
