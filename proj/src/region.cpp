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

#include "dcsit/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dcsit/dof.hpp"

namespace dcsit::region {

RegionPoint::RegionPoint(std::vector<Rational> d) : d_(std::move(d)) {
  if (d_.empty() || d_.size() > static_cast<std::size_t>(kMaxReceivers)) {
    throw std::invalid_argument("region point needs between 1 and 30 coordinates");
  }
  for (auto& x : d_) {
    x.canonicalize();
    if (sgn(x) < 0) {
      throw std::invalid_argument("region coordinates must be nonnegative");
    }
  }
}

void require_square_system(int m, int k) {
  if (m != k) {
    throw OutOfRegimeError("the DoF region is characterized only for M = K (got M=" +
                           std::to_string(m) + ", K=" + std::to_string(k) + ")");
  }
}

Rational permutation_lhs(const RegionPoint& p, std::span<const int> pi) {
  const int k = p.k();
  if (static_cast<int>(pi.size()) != k) {
    throw std::invalid_argument("permutation length must equal the point dimension");
  }
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  Rational acc = 0;
  for (int i = 0; i < k; ++i) {
    const int r = pi[static_cast<std::size_t>(i)];
    if (r < 0 || r >= k || seen[static_cast<std::size_t>(r)]) {
      throw std::invalid_argument("not a permutation of 0..k-1");
    }
    seen[static_cast<std::size_t>(r)] = true;
    acc += p[r] / Rational(i + 1);
  }
  return acc;
}

namespace {

constexpr int kMaxExhaustive = 8;

void for_each_permutation(int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > kMaxExhaustive) {
    throw std::invalid_argument("exhaustive permutation checks need k <= 8");
  }
  std::vector<int> pi(static_cast<std::size_t>(k));
  std::iota(pi.begin(), pi.end(), 0);
  do {
    fn(pi);
  } while (std::next_permutation(pi.begin(), pi.end()));
}

}  // namespace

bool in_region(const RegionPoint& p, Mode mode) {
  if (mode == Mode::sorted) {
    // The weights 1/i decrease, so the descending order maximizes the sum.
    std::vector<int> pi(static_cast<std::size_t>(p.k()));
    std::iota(pi.begin(), pi.end(), 0);
    std::stable_sort(pi.begin(), pi.end(), [&](int a, int b) { return p[a] > p[b]; });
    return permutation_lhs(p, pi) <= 1;
  }
  bool ok = true;
  for_each_permutation(p.k(), [&](const std::vector<int>& pi) {
    ok = ok && permutation_lhs(p, pi) <= 1;
  });
  return ok;
}

std::vector<std::vector<int>> tight_permutations(const RegionPoint& p) {
  std::vector<std::vector<int>> out;
  for_each_permutation(p.k(), [&](const std::vector<int>& pi) {
    if (permutation_lhs(p, pi) == 1) {
      out.push_back(pi);
    }
  });
  return out;
}

RegionPoint symmetric_corner(int k) {
  if (k < 1 || k > kMaxReceivers) {
    throw std::invalid_argument("symmetric_corner needs 1 <= k <= 30");
  }
  const Rational c = 1 / dof::harmonic(k);
  return RegionPoint(std::vector<Rational>(static_cast<std::size_t>(k), c));
}

std::vector<RegionPoint> corner_candidates(int k) {
  if (k < 1 || k > 6) {
    throw std::invalid_argument("corner_candidates needs 1 <= k <= 6");
  }
  std::vector<RegionPoint> out;
  const ReceiverSet full = (ReceiverSet{1} << k) - 1;
  for (ReceiverSet s = 1; s <= full; ++s) {
    const Rational c = 1 / dof::harmonic(popcount(s));
    std::vector<Rational> d(static_cast<std::size_t>(k), 0);
    for (int r = 0; r < k; ++r) {
      if (s & (ReceiverSet{1} << r)) {
        d[static_cast<std::size_t>(r)] = c;
      }
    }
    out.emplace_back(std::move(d));
  }
  out.emplace_back(std::vector<Rational>(static_cast<std::size_t>(k), 0));
  return out;
}

namespace {

template <typename T>
struct Arith;

template <>
struct Arith<Rational> {
  static Rational from(const Rational& x) { return x; }
  static bool positive(const Rational& x) { return sgn(x) > 0; }
  static bool zero(const Rational& x) { return sgn(x) == 0; }
  static Rational to_rational(const Rational& x) { return x; }
};

template <>
struct Arith<double> {
  static constexpr double kSlack = 1e-9;
  static double from(const Rational& x) { return x.get_d(); }
  static bool positive(double x) { return x > kSlack; }
  static bool zero(double x) { return std::abs(x) <= kSlack; }
  static Rational to_rational(double x) { return Rational(x); }
};

/// Phase-I simplex on  A x = b, x >= 0, b >= 0  with one artificial per row
/// and Bland's rule. Returns the basic solution restricted to the first
/// n columns, or an empty vector when the artificial cost stays positive.
template <typename T>
std::vector<T> phase_one(std::vector<std::vector<T>> a, std::vector<T> b) {
  using A = Arith<T>;
  const std::size_t rows = a.size();
  const std::size_t n = rows == 0 ? 0 : a.front().size();
  const std::size_t cols = n + rows;
  for (std::size_t i = 0; i < rows; ++i) {
    a[i].resize(cols, T(0));
    a[i][n + i] = T(1);
  }
  std::vector<std::size_t> basis(rows);
  std::iota(basis.begin(), basis.end(), n);

  // Reduced costs of minimizing the sum of artificials.
  auto reduced_cost = [&](std::size_t col) {
    if (col >= n) {
      T c(1);
      for (std::size_t i = 0; i < rows; ++i) {
        if (basis[i] >= n) {
          c -= a[i][col];
        }
      }
      return c;
    }
    T c(0);
    for (std::size_t i = 0; i < rows; ++i) {
      if (basis[i] >= n) {
        c -= a[i][col];
      }
    }
    return c;
  };

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t col = 0; col < cols; ++col) {
      if (std::find(basis.begin(), basis.end(), col) != basis.end()) {
        continue;
      }
      if (A::positive(-reduced_cost(col))) {
        enter = col;
        break;
      }
    }
    if (enter == cols) {
      break;
    }
    std::size_t leave = rows;
    T best{};
    for (std::size_t i = 0; i < rows; ++i) {
      if (!A::positive(a[i][enter])) {
        continue;
      }
      const T ratio = b[i] / a[i][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows) {
      break;  // unbounded direction cannot occur for a Phase-I objective
    }
    const T piv = a[leave][enter];
    for (auto& v : a[leave]) {
      v /= piv;
    }
    b[leave] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || A::zero(a[i][enter])) {
        continue;
      }
      const T f = a[i][enter];
      for (std::size_t c = 0; c < cols; ++c) {
        a[i][c] -= f * a[leave][c];
      }
      b[i] -= f * b[leave];
    }
    basis[leave] = enter;
  }

  T artificial(0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= n) {
      artificial += b[i];
    }
  }
  if (A::positive(artificial)) {
    return {};
  }
  std::vector<T> x(n, T(0));
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < n) {
      x[basis[i]] = b[i];
    }
  }
  return x;
}

template <typename T>
Decomposition solve(const RegionPoint& p, const std::vector<RegionPoint>& cand) {
  using A = Arith<T>;
  const int k = p.k();
  const std::size_t nc = cand.size();
  // Columns: lambda_c (nc), surplus s_i (k). Rows: k dominance rows, 1 sum row.
  std::vector<std::vector<T>> a(static_cast<std::size_t>(k) + 1,
                                std::vector<T>(nc + static_cast<std::size_t>(k), T(0)));
  std::vector<T> b(static_cast<std::size_t>(k) + 1, T(0));
  for (int i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < nc; ++c) {
      a[static_cast<std::size_t>(i)][c] = A::from(cand[c][i]);
    }
    a[static_cast<std::size_t>(i)][nc + static_cast<std::size_t>(i)] = T(-1);
    b[static_cast<std::size_t>(i)] = A::from(p[i]);
  }
  for (std::size_t c = 0; c < nc; ++c) {
    a[static_cast<std::size_t>(k)][c] = T(1);
  }
  b[static_cast<std::size_t>(k)] = T(1);

  Decomposition out;
  out.exact = std::is_same_v<T, Rational>;
  const auto x = phase_one<T>(std::move(a), std::move(b));
  if (x.empty()) {
    return out;
  }
  out.feasible = true;
  for (std::size_t c = 0; c < nc; ++c) {
    if (A::positive(x[c])) {
      out.corners.push_back(cand[c]);
      out.weights.push_back(A::to_rational(x[c]));
    }
  }
  return out;
}

}  // namespace

Decomposition decompose_time_sharing(const RegionPoint& p) {
  const auto cand = corner_candidates(p.k());
  if (p.k() <= 4) {
    return solve<Rational>(p, cand);
  }
  return solve<double>(p, cand);
}

}  // namespace dcsit::region
