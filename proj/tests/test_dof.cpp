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

#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "dcsit/dof.hpp"
#include "oracle.hpp"

using namespace dcsit;
using namespace dcsit::dof;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

}  // namespace

TEST(RationalType, CanonicalAndPrinted) {
  EXPECT_EQ(to_string(make_rational(6, -4)), "-3/2");
  EXPECT_EQ(to_string(make_rational(5)), "5/1");
  EXPECT_EQ(parse_rational("12/8"), q(3, 2));
  EXPECT_EQ(parse_rational("0.9"), q(9, 10));
  EXPECT_EQ(parse_rational("-2"), q(-2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
  EXPECT_EQ(binomial(10, 3), 120);
  EXPECT_EQ(binomial(3, 5), 0);
}

TEST(Subsets, EnumeratesInIncreasingOrder) {
  const auto s = subsets_of_size(4, 2);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  for (auto x : s) {
    EXPECT_EQ(popcount(x), 2);
  }
  EXPECT_EQ(subsets_of_size(3, 3), std::vector<ReceiverSet>{7});
}

TEST(Harmonic, SmallValues) {
  EXPECT_EQ(harmonic(1), q(1));
  EXPECT_EQ(harmonic(2), q(3, 2));
  EXPECT_EQ(harmonic(3), q(11, 6));
  EXPECT_THROW(harmonic(0), std::invalid_argument);
  for (int k = 1; k <= 40; ++k) {
    EXPECT_TRUE(oracle::same(oracle::harmonic_range(1, k), harmonic(k))) << k;
  }
}

TEST(DofSquare, KnownValues) {
  EXPECT_EQ(dof_square(2, 1), q(4, 3));
  EXPECT_EQ(dof_square(3, 1), q(18, 11));
  EXPECT_EQ(dof_square(3, 2), q(6, 5));
  EXPECT_EQ(dof_square(5, 5), q(1));
  EXPECT_THROW(dof_square(3, 4), std::invalid_argument);
  EXPECT_THROW(dof_square(3, 0), std::invalid_argument);
}

TEST(DofSquare, MatchesOracle) {
  for (int k = 1; k <= 20; ++k) {
    for (int j = 1; j <= k; ++j) {
      EXPECT_TRUE(oracle::same(oracle::square_dof(k, j), dof_square(k, j))) << k << "," << j;
    }
  }
}

TEST(DofSquare, RangeBetweenOneAndK) {
  for (int k = 1; k <= 64; ++k) {
    const Rational d = dof_square(k, 1);
    EXPECT_GE(d, 1);
    EXPECT_LE(d, k);
  }
}

TEST(DofLower, RegimeAndValues) {
  EXPECT_EQ(dof_lower({3, 3, 1}), q(18, 11));
  EXPECT_EQ(dof_lower({2, 3, 2}), q(6, 5));
  EXPECT_EQ(dof_lower({7, 3, 1}), q(18, 11));
  EXPECT_THROW(dof_lower({2, 3, 1}), OutOfRegimeError);
  EXPECT_THROW(DofQuery(0, 3, 1), std::invalid_argument);
  EXPECT_THROW(DofQuery(2, 3, 4), std::invalid_argument);
}

TEST(DofUpper, KnownValues) {
  EXPECT_EQ(dof_upper({2, 3, 1}), q(3, 2));
  EXPECT_EQ(dof_upper({1, 5, 1}), q(1));
  EXPECT_EQ(dof_upper({4, 4, 1}), q(48, 25));
  for (int k = 1; k <= 15; ++k) {
    for (int j = 1; j <= k; ++j) {
      for (int m = 1; m <= k + 1; ++m) {
        EXPECT_TRUE(oracle::same(oracle::upper_bound(m, k, j), dof_upper({m, k, j})))
            << m << "," << k << "," << j;
      }
    }
  }
}

TEST(DofBounds, TightWhenEnoughAntennas) {
  for (int k = 1; k <= 20; ++k) {
    for (int j = 1; j <= k; ++j) {
      const DofQuery query(k - j + 1, k, j);
      EXPECT_EQ(dof_lower(query), dof_upper(query)) << k << "," << j;
    }
  }
}

TEST(NonsquareParams, Values) {
  const auto p231 = nonsquare_params(2, 3, 1);
  EXPECT_EQ(p231.q, 1);
  EXPECT_EQ(p231.eta, 1);
  EXPECT_EQ(p231.beta, 4);
  EXPECT_EQ(p231.slots_per_subphase, 2);
  const auto p241 = nonsquare_params(2, 4, 1);
  EXPECT_EQ(p241.q, 1);
  EXPECT_EQ(p241.eta, 1);
  EXPECT_EQ(p241.beta, 6);
  EXPECT_EQ(p241.slots_per_subphase, 3);
  const auto p331 = nonsquare_params(3, 3, 1);
  EXPECT_EQ(p331.q, 2);
  EXPECT_EQ(p331.eta, 2);
  EXPECT_EQ(p331.beta, 3);
  EXPECT_EQ(p331.slots_per_subphase, 1);
  const auto last = nonsquare_params(2, 3, 3);
  EXPECT_EQ(last.beta, 1);
  EXPECT_EQ(last.slots_per_subphase, 1);
}

TEST(NonsquareParams, AlgebraicInvariants) {
  for (int m = 1; m <= 8; ++m) {
    for (int k = 1; k <= 12; ++k) {
      for (int j = 1; j < k; ++j) {
        const auto p = nonsquare_params(m, k, j);
        EXPECT_EQ(p.q, std::min(m - 1, k - j));
        if (p.q == 0) {
          continue;
        }
        EXPECT_EQ(p.q % p.eta, 0);
        EXPECT_EQ((k - j) % p.eta, 0);
        EXPECT_EQ(p.beta * p.eta, (p.q + 1) * (k - j));
        EXPECT_EQ(p.slots_per_subphase * p.eta, k - j);
        if (m >= k - j + 1) {
          EXPECT_EQ(p.q, k - j);
          EXPECT_EQ(p.slots_per_subphase, 1);
          EXPECT_EQ(p.beta, k - j + 1);
        }
      }
    }
  }
}

TEST(NonsquareRecursion, KnownValues) {
  EXPECT_EQ(nonsquare_recursion({2, 3, 1}), q(24, 17));
  EXPECT_EQ(nonsquare_recursion({2, 4, 1}), q(96, 67));
  EXPECT_EQ(nonsquare_recursion({2, 4, 3}), q(8, 7));
  EXPECT_EQ(nonsquare_recursion({2, 4, 2}), q(24, 19));
  EXPECT_EQ(nonsquare_recursion({3, 3, 1}), q(18, 11));
  EXPECT_EQ(nonsquare_recursion({3, 5, 1}), q(405, 227));
}

TEST(NonsquareRecursion, MatchesForwardOracle) {
  for (int m = 1; m <= 8; ++m) {
    for (int k = 1; k <= 16; ++k) {
      for (int j = 1; j <= k; ++j) {
        EXPECT_TRUE(oracle::same(oracle::recursion(m, k, j), nonsquare_recursion({m, k, j})))
            << m << "," << k << "," << j;
      }
    }
  }
}

TEST(NonsquareRecursion, ReducesToSquareInRegime) {
  for (int k = 1; k <= 20; ++k) {
    for (int j = 1; j <= k; ++j) {
      for (int m = k - j + 1; m <= k + 2; ++m) {
        EXPECT_EQ(nonsquare_recursion({m, k, j}), dof_square(k, j));
      }
    }
  }
}

TEST(NonsquareRecursion, IncreasingInK) {
  for (int m = 2; m <= 6; ++m) {
    for (int k = 1; k < 20; ++k) {
      EXPECT_LT(nonsquare_recursion({m, k, 1}), nonsquare_recursion({m, k + 1, 1}));
    }
  }
}

TEST(NonsquareClosedForm, PrintedAndCorrectedRatios) {
  EXPECT_EQ(nonsquare_closed_form({2, 3, 1}, RatioMode::corrected), q(24, 17));
  EXPECT_EQ(nonsquare_closed_form({2, 3, 1}, RatioMode::printed), q(9, 7));
  EXPECT_EQ(nonsquare_closed_form({3, 5, 1}, RatioMode::corrected), q(405, 227));
  EXPECT_THROW(nonsquare_closed_form({3, 3, 1}, RatioMode::corrected), OutOfRegimeError);
}

TEST(NonsquareClosedForm, CorrectedEqualsRecursionEverywhere) {
  for (int m = 1; m <= 6; ++m) {
    for (int k = 1; k <= 12; ++k) {
      for (int j = 1; j <= k; ++j) {
        if (m >= k - j + 1) {
          continue;
        }
        EXPECT_EQ(nonsquare_closed_form({m, k, j}, RatioMode::corrected),
                  nonsquare_recursion({m, k, j}))
            << m << "," << k << "," << j;
      }
    }
  }
}

TEST(OuterBound, Examples) {
  const std::vector<int> id2{0, 1};
  EXPECT_EQ(outer_bound_lhs(2, 1, {{1, q(2, 3)}, {2, q(2, 3)}}, id2), q(1));
  EXPECT_EQ(outer_bound_lhs(2, 1, {{1, q(0)}, {2, q(0)}}, id2), q(0));
  const std::vector<int> id3{0, 1, 2};
  EXPECT_EQ(outer_bound_lhs(3, 1, {{1, q(1)}, {2, q(0)}, {4, q(0)}}, id3), q(1));
  EXPECT_THROW(outer_bound_lhs(2, 1, {{1, q(1)}}, id2), std::invalid_argument);
  const std::vector<int> bad{0, 0};
  EXPECT_THROW(outer_bound_lhs(2, 1, {{1, q(1)}, {2, q(1)}}, bad), std::invalid_argument);
}

TEST(OuterBound, SymmetricSquarePointSaturates) {
  // Splitting the square DoF evenly over all size-j subsets meets every
  // permutation's inequality with equality.
  for (int k = 1; k <= 6; ++k) {
    for (int j = 1; j <= k; ++j) {
      std::map<ReceiverSet, Rational> d;
      const auto subsets = subsets_of_size(k, j);
      const Rational each = dof_square(k, j) / Rational(static_cast<long>(subsets.size()));
      for (auto s : subsets) {
        d[s] = each;
      }
      std::vector<int> pi(static_cast<std::size_t>(k));
      std::iota(pi.begin(), pi.end(), 0);
      do {
        EXPECT_EQ(outer_bound_lhs(k, j, d, pi), q(1)) << k << "," << j;
      } while (std::next_permutation(pi.begin(), pi.end()));
    }
  }
}

TEST(Identities, HarmonicIdentity) {
  const auto v44 = identity_check(4, 4);
  EXPECT_EQ(v44.lhs, q(1, 4));
  EXPECT_EQ(v44.rhs, q(1, 4));
  const auto v31 = identity_check(3, 1);
  EXPECT_EQ(v31.lhs, q(11, 6));
  EXPECT_TRUE(v31.holds());
  EXPECT_TRUE(identity_check(5, 2).holds());
  for (int k = 1; k <= 30; ++k) {
    for (int j = 1; j <= k; ++j) {
      const auto v = identity_check(k, j);
      ASSERT_TRUE(v.holds()) << k << "," << j;
      EXPECT_TRUE(oracle::same(oracle::harmonic_range(j, k), v.rhs));
    }
  }
  EXPECT_THROW(identity_check(3, 4), std::invalid_argument);
}

TEST(Identities, HockeyStick) {
  EXPECT_EQ(hockey_stick(0, 3).lhs, q(4));
  EXPECT_EQ(hockey_stick(2, 4).lhs, q(10));
  EXPECT_EQ(hockey_stick(2, 4).rhs, q(10));
  EXPECT_EQ(hockey_stick(5, 5).lhs, q(1));
  for (int qq = 0; qq <= 40; ++qq) {
    for (int p = 0; p <= qq; ++p) {
      const auto v = hockey_stick(p, qq);
      ASSERT_TRUE(v.holds());
      EXPECT_TRUE(oracle::same(oracle::Frac(oracle::choose(qq + 1, p + 1)), v.rhs));
    }
  }
  EXPECT_THROW(hockey_stick(3, 2), std::invalid_argument);
}

TEST(CoherenceDof, Values) {
  EXPECT_THROW(coherence_dof(q(1)), std::invalid_argument);
  EXPECT_EQ(coherence_dof(q(3)), q(4, 5));
  const Rational big = coherence_dof(q(1000000));
  EXPECT_LT(abs(big - q(4, 3)), q(1, 100000));
  EXPECT_LT(big, q(4, 3));
}
