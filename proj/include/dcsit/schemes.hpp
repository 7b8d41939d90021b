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
#include <string>
#include <vector>

#include "dcsit/dof.hpp"
#include "dcsit/ledger.hpp"
#include "dcsit/numerics.hpp"
#include "dcsit/rational.hpp"

namespace dcsit::schemes {

/// Forms awaiting delivery, grouped by the receiver subset that wants them.
using SymbolPool = std::map<ReceiverSet, std::vector<ledger::LinearForm>>;

/// Prescribed channel matrices keyed by slot index; other slots are sampled.
using ChannelOverrides = std::map<std::size_t, ComplexMatrix>;

/// Supplies H[n] for consecutive slots, either prescribed or i.i.d. CN(0,1).
class ChannelSource {
 public:
  ChannelSource(int receivers, int antennas, RngStream& rng, ChannelOverrides overrides = {});

  ComplexMatrix next();

 private:
  int receivers_;
  int antennas_;
  RngStream* rng_;
  ChannelOverrides overrides_;
  std::size_t slot_ = 0;
};

struct PhaseRecord {
  std::string name;
  int order = 0;  ///< order of the symbols the phase consumes
  int runs = 0;   ///< replication factor
  std::size_t inputs_consumed = 0;
  std::size_t slots = 0;
  std::size_t outputs_generated = 0;
};

/// A higher-order symbol created by the transmitter during the run.
struct GeneratedSymbol {
  int order = 0;
  ReceiverSet subset = 0;
  ledger::LinearForm form;
};

struct SchemeTrace {
  SchemeTrace(std::string name, int m, int k, int order);

  std::string scheme;
  int m;
  int k;
  int order;  ///< order of the delivered base symbols
  std::vector<PhaseRecord> phases;
  std::vector<GeneratedSymbol> generated;
  ledger::Ledger ledger;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] std::size_t total_slots() const { return ledger.slot_count(); }
  [[nodiscard]] std::size_t total_symbols() const { return ledger.symbols().size(); }
  [[nodiscard]] std::vector<std::size_t> symbols_per_receiver() const;
  /// Sum of per-phase slot counts; equals total_slots() for a consistent trace.
  [[nodiscard]] std::size_t phase_slot_sum() const;
  /// Delivered base symbols per slot, exact.
  [[nodiscard]] Rational empirical_dof() const;
  /// Largest per-phase replication factor.
  [[nodiscard]] int replication() const;
};

struct PhaseResult {
  std::size_t slots = 0;
  SymbolPool outputs;
};

/// One run of the full-antenna phase j: one slot per size-j subset S carrying
/// S's k-j+1 inputs directly, one per antenna, on k-j+1 antennas. Each size-(j+1)
/// subset T receives j random combinations of the overheard forms
/// {L_{T\{r}, r} : r in T}.
PhaseResult build_square_phase(ledger::Ledger& ledger, int k, int j, const SymbolPool& inputs,
                               ChannelSource& channels, RngStream& rng);

/// One run of the reduced-antenna phase j. Each subset S gets
/// params.slots_per_subphase slots of combinations of params.beta inputs on
/// q+1 antennas; every outside receiver purifies its overheard equations into
/// q/eta combinations, and each T receives j*q/eta combinations of those.
PhaseResult build_nonsquare_phase(ledger::Ledger& ledger, int m, int k, int j,
                                  const dof::NonsquarePhaseParams& params,
                                  const SymbolPool& inputs, ChannelSource& channels,
                                  RngStream& rng);

enum class PhaseKind { square, nonsquare };

/// Minimal integral run counts for phases j0..k so that every phase consumes
/// exactly what the previous one produced, given `first_runs` runs of phase
/// j0 (which may be a fraction). Entry i is the count for phase j0+i.
std::vector<int> plan_replication(int m, int k, int j0, PhaseKind kind,
                                  const Rational& first_runs = 1);

/// Order-1 scheme for M = K antennas; K/H_K symbols per slot.
SchemeTrace run_square_scheme(int k, RngStream& rng, const ChannelOverrides& overrides = {});

/// Order-j common symbols with m >= k-j+1 antennas, starting at phase j.
SchemeTrace run_order_j_delivery(int m, int k, int j, RngStream& rng,
                                 const ChannelOverrides& overrides = {});

/// Reduced-antenna chain for any (m, k, j); reaches nonsquare_recursion(m, k, j).
SchemeTrace run_nonsquare_scheme(int m, int k, int j, RngStream& rng,
                                 const ChannelOverrides& overrides = {});

/// M = 2, K = 3 chain through purified overheard equations: 24/17.
SchemeTrace run_mat23_suboptimal(RngStream& rng, const ChannelOverrides& overrides = {});

/// M = K = 2 with one mixed slot and two order-2 slots: 4/3.
SchemeTrace run_alt22(RngStream& rng, const ChannelOverrides& overrides = {});

/// M = 2, K = 3 with three mixed pair slots and 6/5 order-2 delivery: 3/2.
SchemeTrace run_opt23(RngStream& rng, const ChannelOverrides& overrides = {});

/// Round-robin, one symbol per slot from a single antenna; DoF 1.
SchemeTrace run_tdma(int k, RngStream& rng, const ChannelOverrides& overrides = {});

/// Continues delivery of `pool` (order j0 forms) through phases j0..k.
/// The pool must hold the same number of forms for every size-j0 subset and
/// that count must lead to integral run counts; otherwise std::logic_error.
void deliver_pool(SchemeTrace& trace, int j0, SymbolPool pool, PhaseKind kind,
                  ChannelSource& channels, RngStream& rng);

/// Per-receiver decode verdicts for every symbol the receiver wants.
std::vector<bool> decode_report(const SchemeTrace& trace, RankTolerance tol = {});
bool all_decoded(const SchemeTrace& trace, RankTolerance tol = {});

/// Largest condition number among receivers' stacked equation matrices.
double worst_condition_number(const SchemeTrace& trace, RankTolerance tol = {});

/// Names accepted by make_scheme.
struct SchemeSpec {
  std::string name;  ///< square | order-j | nonsquare | mat23 | alt22 | opt23 | tdma
  int m = 0;
  int k = 0;
  int j = 1;
};

/// Largest base-symbol count run_scheme accepts.
inline constexpr std::size_t kMaxSchemeSymbols = 2000;

/// Validates a spec (throws std::invalid_argument / OutOfRegimeError).
void validate(const SchemeSpec& spec);
SchemeTrace run_scheme(const SchemeSpec& spec, RngStream& rng);
/// Exact DoF the scheme is designed to reach.
Rational expected_dof(const SchemeSpec& spec);

}  // namespace dcsit::schemes
