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

#include <vector>

#include <gtest/gtest.h>

#include "dcsit/ledger.hpp"
#include "dcsit/schemes.hpp"

using namespace dcsit;
using namespace dcsit::ledger;

namespace {

constexpr ReceiverSet kA = 1;
constexpr ReceiverSet kB = 2;

}  // namespace

TEST(SymbolTable, ValidatesOwners) {
  SymbolTable t(3);
  EXPECT_EQ(t.add(kA, "u_A"), 0u);
  EXPECT_EQ(t.add(kA | kB, "u_AB"), 1u);
  EXPECT_EQ(t.at(1).order, 2);
  EXPECT_THROW(t.add(0, "none"), std::invalid_argument);
  EXPECT_THROW(t.add(8, "outside"), std::invalid_argument);
  EXPECT_THROW((void)t.at(5), std::out_of_range);
  EXPECT_EQ(t.desired_by(1), std::vector<SymbolId>{1});
  EXPECT_THROW(SymbolTable(0), std::invalid_argument);
}

TEST(LinearForm, Algebra) {
  const LinearForm a = LinearForm::symbol(0, {2.0, 0.0});
  const LinearForm b = LinearForm::symbol(1, {0.0, 1.0});
  const LinearForm c = a + Complex{3.0, 0.0} * b - a;
  EXPECT_EQ(c.coefficient(0), Complex(0.0, 0.0));
  EXPECT_EQ(c.coefficient(1), Complex(0.0, 3.0));
  EXPECT_EQ(c.coefficient(7), Complex(0.0, 0.0));
  EXPECT_TRUE(c.noiseless());
  EXPECT_NEAR(normalized(a + b).coefficient_norm2(), 1.0, 1e-15);
  EXPECT_TRUE(normalized(LinearForm{}).empty());
  EXPECT_THROW(a.dense_row(0), std::out_of_range);
  const LinearForm kept = (a + b).restricted([](SymbolId id) { return id == 1; });
  EXPECT_EQ(kept.coefficients().size(), 1u);
}

TEST(TransmitSlot, LinearityAndNoise) {
  Ledger led(2, 2);
  const auto ua = led.symbols().add(kA, "u_A");
  const auto va = led.symbols().add(kA, "v_A");
  RngStream rng(1, 0);
  const ComplexMatrix h = sample_channel(2, 2, rng);
  led.transmit_slot({LinearForm::symbol(ua), LinearForm::symbol(va)}, h, "slot1");
  ASSERT_EQ(led.slot_count(), 1u);
  for (int r = 0; r < 2; ++r) {
    const auto& eq = led.equation_at(r, 0);
    EXPECT_NEAR(std::abs(eq.form.coefficient(ua) - h(r, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(eq.form.coefficient(va) - h(r, 1)), 0.0, 1e-12);
    EXPECT_GE(eq.noise_variance(), 1.0);
    EXPECT_TRUE(eq.form.noiseless());
  }
  EXPECT_NE(led.equation_at(0, 0).noise_id, led.equation_at(1, 0).noise_id);
  // Receiver A holds L1 and L2 only after both slots: two equations, two unknowns.
  const std::vector<SymbolId> targets{ua, va};
  EXPECT_FALSE(can_decode(led.state(0), targets, led.symbols().size()));
  led.transmit_slot({LinearForm::symbol(ua), LinearForm::symbol(va)}, sample_channel(2, 2, rng));
  EXPECT_TRUE(can_decode(led.state(0), targets, led.symbols().size()));
}

TEST(TransmitSlot, ShapeErrorsAndSilence) {
  Ledger led(2, 2);
  const auto s = led.symbols().add(kA | kB, "s");
  RngStream rng(2, 0);
  EXPECT_THROW(led.transmit_slot({LinearForm::symbol(s), LinearForm::symbol(s), LinearForm::symbol(s)},
                                 sample_channel(2, 2, rng)),
               std::invalid_argument);
  EXPECT_THROW(led.transmit_slot({LinearForm::symbol(s)}, sample_channel(3, 2, rng)),
               std::invalid_argument);
  led.transmit_slot({}, sample_channel(2, 2, rng));
  EXPECT_EQ(led.slot_count(), 1u);
  EXPECT_TRUE(led.state(0).equations.empty());
  // A single symbol on one antenna reaches everyone as a scalar multiple.
  led.transmit_slot({LinearForm::symbol(s)}, sample_channel(2, 2, rng));
  for (int r = 0; r < 2; ++r) {
    const auto& eq = led.equation_at(r, 1);
    EXPECT_EQ(eq.form.coefficients().size(), 1u);
    EXPECT_GT(std::abs(eq.form.coefficient(s)), 0.0);
  }
}

TEST(CanDecode, RejectsEmptyTargets) {
  Ledger led(1, 1);
  led.symbols().add(kA, "s");
  EXPECT_THROW(can_decode(led.state(0), std::vector<SymbolId>{}, 1), std::invalid_argument);
}

TEST(CanDecode, MonotoneUnderAddedEquations) {
  for (int t = 0; t < 50; ++t) {
    Ledger led(1, 3);
    std::vector<SymbolId> ids;
    for (int i = 0; i < 3; ++i) {
      ids.push_back(led.symbols().add(kA, "s"));
    }
    RngStream rng(3, static_cast<std::uint64_t>(t));
    bool was = false;
    for (int slot = 0; slot < 5; ++slot) {
      led.transmit_slot({LinearForm::symbol(0), LinearForm::symbol(1), LinearForm::symbol(2)},
                        sample_channel(1, 3, rng));
      const bool now = can_decode(led.state(0), ids, 3);
      EXPECT_FALSE(was && !now);
      was = now;
    }
    EXPECT_TRUE(was);
  }
}

TEST(CanDecode, SoundnessRecoversInjectedValues) {
  RngStream rng(4, 0);
  for (int t = 0; t < 20; ++t) {
    RngStream trial(4, static_cast<std::uint64_t>(t));
    auto trace = schemes::run_square_scheme(3, trial);
    const std::size_t n = trace.total_symbols();
    arma::cx_vec x(n);
    for (auto& v : x) {
      v = rng.complex_gaussian();
    }
    for (int r = 0; r < 3; ++r) {
      const auto& st = trace.ledger.state(r);
      const auto want = trace.ledger.symbols().desired_by(r);
      ASSERT_TRUE(can_decode(st, want, n));
      const ComplexMatrix a = coefficient_matrix(st, n);
      const arma::cx_vec y = a * x;
      // Minimum-norm solution; desired coordinates are pinned by the row space.
      const arma::cx_vec xh = arma::pinv(a, 1e-10) * y;
      for (SymbolId s : want) {
        EXPECT_LE(std::abs(xh(s) - x(s)), 1e-6 * std::max(1.0, std::abs(x(s))));
      }
    }
  }
}

TEST(RandomCombination, RanksAndLog) {
  int ok2 = 0;
  int ok3 = 0;
  for (int t = 0; t < 1000; ++t) {
    Ledger led(1, 1);
    for (int i = 0; i < 3; ++i) {
      led.symbols().add(kA, "s");
    }
    const std::vector<LinearForm> base{LinearForm::symbol(0), LinearForm::symbol(1),
                                       LinearForm::symbol(2)};
    RngStream rng(5, static_cast<std::uint64_t>(t));
    const auto two = led.random_combination(base, 2, rng, "two");
    const auto three = led.random_combination(base, 3, rng, "three");
    ComplexMatrix m2(2, 3);
    for (int i = 0; i < 2; ++i) m2.row(i) = two[static_cast<std::size_t>(i)].dense_row(3);
    ComplexMatrix m3(3, 3);
    for (int i = 0; i < 3; ++i) m3.row(i) = three[static_cast<std::size_t>(i)].dense_row(3);
    ok2 += numerical_rank(m2) == 2 ? 1 : 0;
    ok3 += numerical_rank(m3) == 3 ? 1 : 0;
    ASSERT_EQ(led.combinations().size(), 2u);
    EXPECT_EQ(led.combinations()[0].coefficients.size(), 6u);
    EXPECT_EQ(led.combinations()[1].purpose, "three");
  }
  EXPECT_GE(ok2, 999);
  EXPECT_GE(ok3, 999);
  Ledger led(1, 1);
  led.symbols().add(kA, "s");
  RngStream rng(6, 0);
  const auto single = led.random_combination(std::vector<LinearForm>{LinearForm::symbol(0)}, 1, rng);
  EXPECT_GT(std::abs(single[0].coefficient(0)), 0.0);
  EXPECT_THROW(led.random_combination(std::vector<LinearForm>{}, 1, rng), std::invalid_argument);
}

TEST(NoiseCovariance, HandBuiltTwoSlotSystem) {
  // Receiver combines y1 = L1 + z1 and y2 = L2 + z2 with weights (a, b) and
  // (c, d); the covariance of the two combinations is [[|a|^2+|b|^2, a c* + b d*], ...].
  Equation e1;
  e1.noise_id = 10;
  e1.form = LinearForm::symbol(0);
  Equation e2;
  e2.noise_id = 11;
  e2.form = LinearForm::symbol(1);
  const Complex a{0.3, -1.2};
  const Complex b{2.0, 0.5};
  const Complex c{-0.7, 0.1};
  const Complex d{0.4, 0.9};
  const std::vector<Equation> eqs{e1, e2};
  const std::vector<LinearForm> combos{combine_equations(eqs, std::vector<Complex>{a, b}),
                                       combine_equations(eqs, std::vector<Complex>{c, d})};
  const ComplexMatrix cov = noise_covariance(combos);
  EXPECT_NEAR(std::abs(cov(0, 0) - (std::norm(a) + std::norm(b))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(cov(1, 1) - (std::norm(c) + std::norm(d))), 0.0, 1e-12);
  const Complex off = a * std::conj(c) + b * std::conj(d);
  EXPECT_NEAR(std::abs(cov(0, 1) - off), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(cov(1, 0) - std::conj(off)), 0.0, 1e-12);
  EXPECT_NEAR(combos[0].noise_norm2(), std::norm(a) + std::norm(b), 1e-12);
  EXPECT_THROW(combine_equations(eqs, std::vector<Complex>{a}), std::invalid_argument);
}

TEST(AlignmentRanks, TwoUserScheme) {
  int good = 0;
  for (int t = 0; t < 1000; ++t) {
    RngStream rng(8, static_cast<std::uint64_t>(t));
    const auto trace = schemes::run_square_scheme(2, rng);
    const auto ranks = alignment_ranks(trace.ledger, 0);
    good += (ranks.desired == 2 && ranks.interference == 1) ? 1 : 0;
  }
  EXPECT_GE(good, 999);
}

TEST(AlignmentRanks, DegenerateChannelIsReportedAsIs) {
  // With receiver A's gain on antenna 0 zeroed in the order-2 slot, A's third
  // equation vanishes: the desired block loses a dimension while the
  // overheard row keeps the interference block at rank one.
  RngStream rng(9, 0);
  ComplexMatrix h3 = sample_channel(2, 2, rng);
  h3(0, 0) = 0.0;
  RngStream run(9, 1);
  const auto trace = schemes::run_square_scheme(2, run, {{2, h3}});
  EXPECT_EQ(trace.ledger.equation_at(0, 2).form.coefficient_norm2(), 0.0);
  const auto ranks = alignment_ranks(trace.ledger, 0);
  EXPECT_EQ(ranks.desired, 1u);
  EXPECT_EQ(ranks.interference, 1u);
}

TEST(AlignmentRanks, WrongShapeRejected) {
  RngStream rng(10, 0);
  const auto trace = schemes::run_square_scheme(3, rng);
  EXPECT_THROW(alignment_ranks(trace.ledger, 0), std::invalid_argument);
}

TEST(Labels, ReceiverNames) {
  EXPECT_EQ(receiver_label(0), "A");
  EXPECT_EQ(receiver_label(2), "C");
  EXPECT_EQ(receiver_label(27), "R28");
  EXPECT_EQ(subset_label(0b101), "AC");
}
