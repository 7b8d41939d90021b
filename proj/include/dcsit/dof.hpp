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

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dcsit/rational.hpp"

namespace dcsit {

/// Raised when a closed form is evaluated outside the antenna regime it was
/// derived for.
class OutOfRegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Receivers are numbered 0..K-1; a subset of them is a bitmask.
using ReceiverSet = std::uint32_t;

inline constexpr int kMaxReceivers = 30;

/// All size-j subsets of {0..k-1} in increasing numeric (colex) order.
std::vector<ReceiverSet> subsets_of_size(int k, int j);

int popcount(ReceiverSet s) noexcept;

namespace dof {

/// Transmit antennas m, receivers k, message order j. Validated on construction.
struct DofQuery {
  DofQuery(int m, int k, int j);

  int m;
  int k;
  int j;
};

/// Per-phase parameters of the reduced-antenna phase.
struct NonsquarePhaseParams {
  int q = 0;                   ///< useful overheard equations per slot
  int eta = 1;                 ///< gcd(q, k - j)
  int beta = 1;                ///< symbols per subset sub-phase
  int slots_per_subphase = 1;  ///< (k - j) / eta

  /// Order-j inputs consumed per size-j subset in one run of the phase.
  [[nodiscard]] int inputs_per_subset() const noexcept { return beta; }
  /// Purified combinations each outside receiver forms per subset.
  [[nodiscard]] int purified_per_receiver() const noexcept { return q / eta; }
};

/// Parameters for phase j. For j == k (plain broadcast of the last order) the
/// gcd is taken as 1 so that beta == slots_per_subphase == 1.
NonsquarePhaseParams nonsquare_params(int m, int k, int j);

Rational harmonic(int k);

/// Partial harmonic sum 1/from + ... + 1/to (0 when from > to).
Rational harmonic_range(int from, int to);

/// ((k-j+1)/j) / (1/j + ... + 1/k).
Rational dof_square(int k, int j);

/// Achievable order-j DoF for m >= k-j+1; throws OutOfRegimeError otherwise.
Rational dof_lower(const DofQuery& q);

/// C(k,j) / sum_{i=1}^{k-j+1} C(k-i, j-1) / min(i, m).
Rational dof_upper(const DofQuery& q);

/// Downward recursion from DoF_k = 1 with q_j = min(m-1, k-j).
Rational nonsquare_recursion(const DofQuery& q);

enum class RatioMode {
  printed,    ///< decay ratio m/(m+1), numerator m
  corrected,  ///< decay ratio (m-1)/m, numerator m/j; agrees with the recursion
};

/// Closed form of the reduced-antenna recursion for m < k-j+1.
Rational nonsquare_closed_form(const DofQuery& q, RatioMode mode);

/// Left side of the per-permutation outer-bound inequality.
/// `d` maps every size-j subset to its DoF; `pi` is a permutation of 0..k-1.
Rational outer_bound_lhs(int k, int j, const std::map<ReceiverSet, Rational>& d,
                         std::span<const int> pi);

struct IdentityValues {
  Rational lhs;
  Rational rhs;
  [[nodiscard]] bool holds() const { return lhs == rhs; }
};

/// (1/C(k,j-1)) sum_{i=1}^{k-j+1} C(k-i,j-1)/i  versus  sum_{i=j}^{k} 1/i.
IdentityValues identity_check(int k, int j);

/// sum_{l=p}^{q} C(l,p)  versus  C(q+1,p+1).
IdentityValues hockey_stick(int p, int q);

/// (2 TcWc - 2) / ((3/2) TcWc + 1/2) for a coherence block of TcWc > 1 resources.
Rational coherence_dof(const Rational& tc_wc);

}  // namespace dof
}  // namespace dcsit
