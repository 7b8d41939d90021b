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

#include "dcsit/dof.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace dcsit {

int popcount(ReceiverSet s) noexcept { return std::popcount(s); }

std::vector<ReceiverSet> subsets_of_size(int k, int j) {
  if (k < 0 || k > kMaxReceivers || j < 0 || j > k) {
    throw std::invalid_argument("subset size out of range");
  }
  std::vector<ReceiverSet> out;
  if (j == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack enumerates same-popcount masks in increasing order.
  ReceiverSet s = (ReceiverSet{1} << j) - 1;
  const ReceiverSet limit = ReceiverSet{1} << k;
  while (s < limit) {
    out.push_back(s);
    const ReceiverSet c = s & (~s + 1);
    const ReceiverSet r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

namespace dof {

namespace {

Rational frac(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

DofQuery::DofQuery(int m_, int k_, int j_) : m(m_), k(k_), j(j_) {
  if (m < 1 || k < 1 || j < 1 || j > k) {
    throw std::invalid_argument("DofQuery requires m >= 1, k >= 1 and 1 <= j <= k (got m=" +
                                std::to_string(m) + ", k=" + std::to_string(k) +
                                ", j=" + std::to_string(j) + ")");
  }
}

NonsquarePhaseParams nonsquare_params(int m, int k, int j) {
  DofQuery valid(m, k, j);
  NonsquarePhaseParams p;
  const int rest = k - j;
  p.q = std::min(m - 1, rest);
  if (rest == 0) {
    return p;
  }
  p.eta = std::gcd(p.q, rest);
  p.beta = (p.q + 1) * rest / p.eta;
  p.slots_per_subphase = rest / p.eta;
  return p;
}

Rational harmonic(int k) {
  if (k < 1) {
    throw std::invalid_argument("harmonic number needs k >= 1");
  }
  return harmonic_range(1, k);
}

Rational harmonic_range(int from, int to) {
  Rational acc = 0;
  for (int i = std::max(from, 1); i <= to; ++i) {
    acc += frac(1, i);
  }
  return acc;
}

Rational dof_square(int k, int j) {
  if (k < 1 || j < 1 || j > k) {
    throw std::invalid_argument("dof_square requires 1 <= j <= k");
  }
  Rational out = frac(k - j + 1, j) / harmonic_range(j, k);
  out.canonicalize();
  return out;
}

Rational dof_lower(const DofQuery& q) {
  if (q.m < q.k - q.j + 1) {
    throw OutOfRegimeError("m < k-j+1: the square-phase lower bound does not apply; "
                           "use nonsquare_recursion");
  }
  return dof_square(q.k, q.j);
}

Rational dof_upper(const DofQuery& q) {
  Rational denom = 0;
  for (int i = 1; i <= q.k - q.j + 1; ++i) {
    denom += frac(binomial(q.k - i, q.j - 1), std::min(i, q.m));
  }
  Rational out = Rational(binomial(q.k, q.j)) / denom;
  out.canonicalize();
  return out;
}

Rational nonsquare_recursion(const DofQuery& q) {
  // inv holds 1/DoF_{level} while walking down from level k.
  Rational inv = 1;
  for (int level = q.k - 1; level >= q.j; --level) {
    const int qj = std::min(q.m - 1, q.k - level);
    // ((qj+1)/level) * inv_level = 1/level + (qj/(level+1)) * inv_{level+1}
    Rational rhs = frac(1, level) + frac(qj, level + 1) * inv;
    inv = rhs * frac(level, qj + 1);
    inv.canonicalize();
  }
  Rational out = 1 / inv;
  out.canonicalize();
  return out;
}

Rational nonsquare_closed_form(const DofQuery& q, RatioMode mode) {
  const int m = q.m;
  const int k = q.k;
  const int j = q.j;
  if (m >= k - j + 1) {
    throw OutOfRegimeError("closed form only covers m < k-j+1");
  }
  const Rational ratio = mode == RatioMode::printed ? frac(m, m + 1) : frac(m - 1, m);
  Rational denom = 0;
  Rational power = 1;
  for (int i = j; i <= k - m + 1; ++i) {
    denom += power / i;
    power *= ratio;
  }
  // power == ratio^(k-m-j+2) now; the tail uses one factor less.
  Rational tail_weight = 1;
  for (int e = 0; e < k - m - j + 1; ++e) {
    tail_weight *= ratio;
  }
  denom += tail_weight * harmonic_range(k - m + 2, k);
  // A bare numerator m is exact only for j = 1; the recursion unrolls to m/j.
  const int scale = mode == RatioMode::printed ? 1 : j;
  Rational out = Rational(m) / (scale * denom);
  out.canonicalize();
  return out;
}

Rational outer_bound_lhs(int k, int j, const std::map<ReceiverSet, Rational>& d,
                         std::span<const int> pi) {
  if (k < 1 || k > kMaxReceivers || j < 1 || j > k) {
    throw std::invalid_argument("outer_bound_lhs: need 1 <= j <= k");
  }
  if (static_cast<int>(pi.size()) != k) {
    throw std::invalid_argument("permutation length must equal k");
  }
  std::vector<bool> seen(k, false);
  for (int v : pi) {
    if (v < 0 || v >= k || seen[v]) {
      throw std::invalid_argument("pi is not a permutation of 0..k-1");
    }
    seen[v] = true;
  }
  const auto subsets = subsets_of_size(k, j);
  for (ReceiverSet s : subsets) {
    if (!d.contains(s)) {
      throw std::invalid_argument("missing DoF entry for a size-j subset");
    }
  }
  Rational total = 0;
  ReceiverSet removed = 0;
  for (int i = 1; i <= k - j + 1; ++i) {
    const ReceiverSet head = ReceiverSet{1} << pi[i - 1];
    Rational inner = 0;
    for (ReceiverSet s : subsets) {
      if ((s & removed) == 0 && (s & head) != 0) {
        inner += d.at(s);
      }
    }
    total += inner / i;
    removed |= head;
  }
  total.canonicalize();
  return total;
}

IdentityValues identity_check(int k, int j) {
  if (k < 1 || j < 1 || j > k) {
    throw std::invalid_argument("identity_check requires 1 <= j <= k");
  }
  Rational sum = 0;
  for (int i = 1; i <= k - j + 1; ++i) {
    sum += frac(binomial(k - i, j - 1), i);
  }
  IdentityValues v{sum / Rational(binomial(k, j - 1)), harmonic_range(j, k)};
  v.lhs.canonicalize();
  return v;
}

IdentityValues hockey_stick(int p, int q) {
  if (p < 0 || p > q) {
    throw std::invalid_argument("hockey_stick requires 0 <= p <= q");
  }
  BigInt sum = 0;
  for (int l = p; l <= q; ++l) {
    sum += binomial(l, p);
  }
  return {Rational(sum), Rational(binomial(q + 1, p + 1))};
}

Rational coherence_dof(const Rational& tc_wc) {
  if (tc_wc <= 1) {
    throw std::invalid_argument("coherence block must hold more than one resource");
  }
  Rational out = (2 * tc_wc - 2) / (frac(3, 2) * tc_wc + frac(1, 2));
  out.canonicalize();
  return out;
}

}  // namespace dof
}  // namespace dcsit
