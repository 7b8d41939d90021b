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

#include "dcsit/schemes.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dcsit::schemes {

using ledger::Ledger;
using ledger::LinearForm;

ChannelSource::ChannelSource(int receivers, int antennas, RngStream& rng,
                             ChannelOverrides overrides)
    : receivers_(receivers), antennas_(antennas), rng_(&rng), overrides_(std::move(overrides)) {}

ComplexMatrix ChannelSource::next() {
  // Always draw so that overriding one slot leaves every other draw unchanged.
  ComplexMatrix h = sample_channel(receivers_, antennas_, *rng_);
  if (auto it = overrides_.find(slot_); it != overrides_.end()) {
    if (it->second.n_rows != h.n_rows || it->second.n_cols != h.n_cols) {
      throw std::invalid_argument("override channel has the wrong shape");
    }
    h = it->second;
  }
  ++slot_;
  return h;
}

SchemeTrace::SchemeTrace(std::string name, int m_, int k_, int order_)
    : scheme(std::move(name)), m(m_), k(k_), order(order_), ledger(k_, m_) {}

std::vector<std::size_t> SchemeTrace::symbols_per_receiver() const {
  std::vector<std::size_t> out;
  for (int r = 0; r < k; ++r) {
    out.push_back(ledger.symbols().desired_by(r).size());
  }
  return out;
}

std::size_t SchemeTrace::phase_slot_sum() const {
  std::size_t acc = 0;
  for (const auto& p : phases) {
    acc += p.slots;
  }
  return acc;
}

Rational SchemeTrace::empirical_dof() const {
  if (total_slots() == 0) {
    throw std::logic_error("empty trace has no DoF");
  }
  Rational r(static_cast<unsigned long>(total_symbols()), static_cast<unsigned long>(total_slots()));
  r.canonicalize();
  return r;
}

int SchemeTrace::replication() const {
  int best = 0;
  for (const auto& p : phases) {
    best = std::max(best, p.runs);
  }
  return best;
}

namespace {

std::string phase_tag(int j, ReceiverSet s) {
  return "phase" + std::to_string(j) + ":" + ledger::subset_label(s);
}

void require_exact_inputs(const SymbolPool& inputs, int k, int j, std::size_t per_subset) {
  const auto subsets = subsets_of_size(k, j);
  if (inputs.size() != subsets.size()) {
    throw std::invalid_argument("phase inputs must cover exactly the size-j subsets");
  }
  for (ReceiverSet s : subsets) {
    auto it = inputs.find(s);
    if (it == inputs.end() || it->second.size() != per_subset) {
      throw std::invalid_argument("phase " + std::to_string(j) + " needs " +
                                  std::to_string(per_subset) + " inputs for subset " +
                                  ledger::subset_label(s));
    }
  }
}

std::vector<LinearForm> normalized_plan(std::vector<LinearForm> forms) {
  for (auto& f : forms) {
    f = ledger::normalized(f);
  }
  return forms;
}

}  // namespace

PhaseResult build_square_phase(Ledger& ledger, int k, int j, const SymbolPool& inputs,
                               ChannelSource& channels, RngStream& rng) {
  if (ledger.receivers() != k || j < 1 || j > k) {
    throw std::invalid_argument("square phase: need 1 <= j <= k and a k-receiver ledger");
  }
  const int width = k - j + 1;
  if (ledger.antennas() < width) {
    throw std::invalid_argument("square phase " + std::to_string(j) + " needs " +
                                std::to_string(width) + " antennas");
  }
  require_exact_inputs(inputs, k, j, static_cast<std::size_t>(width));

  std::map<ReceiverSet, std::size_t> slot_of;
  for (ReceiverSet s : subsets_of_size(k, j)) {
    auto plan = normalized_plan(inputs.at(s));
    slot_of[s] = ledger.slot_count();
    ledger.transmit_slot(std::move(plan), channels.next(), phase_tag(j, s));
  }

  PhaseResult result;
  result.slots = slot_of.size();
  if (j == k) {
    return result;
  }
  for (ReceiverSet t : subsets_of_size(k, j + 1)) {
    std::vector<LinearForm> overheard;
    for (int r = 0; r < k; ++r) {
      const ReceiverSet bit = ReceiverSet{1} << r;
      if (t & bit) {
        overheard.push_back(ledger.equation_at(r, slot_of.at(t & ~bit)).form);
      }
    }
    result.outputs[t] = ledger.random_combination(overheard, j, rng,
                                                  phase_tag(j, t) + ":merge");
  }
  return result;
}

PhaseResult build_nonsquare_phase(Ledger& ledger, int m, int k, int j,
                                  const dof::NonsquarePhaseParams& params,
                                  const SymbolPool& inputs, ChannelSource& channels,
                                  RngStream& rng) {
  if (ledger.receivers() != k || j < 1 || j > k) {
    throw std::invalid_argument("nonsquare phase: need 1 <= j <= k and a k-receiver ledger");
  }
  const dof::NonsquarePhaseParams expect = dof::nonsquare_params(m, k, j);
  if (params.q != expect.q || params.eta != expect.eta || params.beta != expect.beta ||
      params.slots_per_subphase != expect.slots_per_subphase) {
    throw std::invalid_argument("phase parameters do not match (m, k, j)");
  }
  const int width = params.q + 1;
  if (m < width || ledger.antennas() < width) {
    throw std::invalid_argument("nonsquare phase needs q+1 antennas");
  }
  require_exact_inputs(inputs, k, j, static_cast<std::size_t>(params.beta));

  std::map<ReceiverSet, std::vector<std::size_t>> slots_of;
  for (ReceiverSet s : subsets_of_size(k, j)) {
    for (int t = 0; t < params.slots_per_subphase; ++t) {
      auto plan = normalized_plan(ledger.random_combination(
          inputs.at(s), width, rng, phase_tag(j, s) + ":precode" + std::to_string(t)));
      slots_of[s].push_back(ledger.slot_count());
      ledger.transmit_slot(std::move(plan), channels.next(), phase_tag(j, s));
    }
  }

  PhaseResult result;
  result.slots = slots_of.size() * static_cast<std::size_t>(params.slots_per_subphase);
  const int purified = params.purified_per_receiver();
  if (j == k || purified == 0) {
    return result;
  }

  // purified[(S, r')] = combinations of r''s overheard equations from S's sub-phase.
  std::map<std::pair<ReceiverSet, int>, std::vector<LinearForm>> purified_forms;
  for (ReceiverSet s : subsets_of_size(k, j)) {
    for (int r = 0; r < k; ++r) {
      if (s & (ReceiverSet{1} << r)) {
        continue;
      }
      std::vector<LinearForm> overheard;
      for (std::size_t slot : slots_of.at(s)) {
        overheard.push_back(ledger.equation_at(r, slot).form);
      }
      purified_forms[{s, r}] = ledger.random_combination(
          overheard, purified, rng, phase_tag(j, s) + ":purify@" + ledger::receiver_label(r));
    }
  }
  for (ReceiverSet t : subsets_of_size(k, j + 1)) {
    std::vector<LinearForm> pieces;
    for (int r = 0; r < k; ++r) {
      const ReceiverSet bit = ReceiverSet{1} << r;
      if (t & bit) {
        const auto& p = purified_forms.at({t & ~bit, r});
        pieces.insert(pieces.end(), p.begin(), p.end());
      }
    }
    result.outputs[t] = ledger.random_combination(pieces, static_cast<std::size_t>(j * purified),
                                                  rng, phase_tag(j, t) + ":merge");
  }
  return result;
}

namespace {

struct PhaseIo {
  int inputs_per_subset = 0;
  int outputs_per_superset = 0;
};

PhaseIo phase_io(int m, int k, int j, PhaseKind kind) {
  if (kind == PhaseKind::square) {
    if (m < k - j + 1) {
      throw OutOfRegimeError("square phase " + std::to_string(j) + " needs m >= k-j+1");
    }
    return {k - j + 1, j < k ? j : 0};
  }
  const auto p = dof::nonsquare_params(m, k, j);
  return {p.beta, j < k ? j * p.purified_per_receiver() : 0};
}

std::vector<Rational> rational_chain(int m, int k, int j0, PhaseKind kind, Rational first) {
  first.canonicalize();
  std::vector<Rational> runs{first};
  for (int j = j0; j < k; ++j) {
    const PhaseIo cur = phase_io(m, k, j, kind);
    const PhaseIo next = phase_io(m, k, j + 1, kind);
    Rational r = runs.back() * cur.outputs_per_superset / next.inputs_per_subset;
    r.canonicalize();
    runs.push_back(r);
  }
  return runs;
}

}  // namespace

std::vector<int> plan_replication(int m, int k, int j0, PhaseKind kind, const Rational& first_runs) {
  if (first_runs <= 0) {
    throw std::invalid_argument("first phase must run a positive number of times");
  }
  const auto runs = rational_chain(m, k, j0, kind, first_runs);
  BigInt scale = 1;
  for (const auto& r : runs) {
    BigInt den = r.get_den();
    scale = scale / gcd(scale, den) * den;
  }
  std::vector<int> out;
  for (const auto& r : runs) {
    Rational scaled = r * scale;
    out.push_back(static_cast<int>(scaled.get_num().get_si()));
  }
  return out;
}

void deliver_pool(SchemeTrace& trace, int j0, SymbolPool pool, PhaseKind kind,
                  ChannelSource& channels, RngStream& rng) {
  const int k = trace.k;
  const int m = trace.m;
  const auto first_subsets = subsets_of_size(k, j0);
  const std::size_t count = pool.empty() ? 0 : pool.begin()->second.size();
  for (ReceiverSet s : first_subsets) {
    if (!pool.contains(s) || pool.at(s).size() != count) {
      throw std::logic_error("pool must hold the same count for every size-j subset");
    }
  }
  if (pool.size() != first_subsets.size() || count == 0) {
    throw std::logic_error("pool does not match the size-j subsets");
  }
  const PhaseIo first_io = phase_io(m, k, j0, kind);
  const auto runs = rational_chain(m, k, j0, kind,
                                   Rational(static_cast<unsigned long>(count),
                                            static_cast<unsigned long>(first_io.inputs_per_subset)));
  for (const auto& r : runs) {
    if (r.get_den() != 1) {
      throw std::logic_error("pool size leads to a fractional phase replication");
    }
  }

  for (int j = j0; j <= k; ++j) {
    const int run_count = static_cast<int>(runs[j - j0].get_num().get_si());
    if (run_count == 0) {
      break;
    }
    const PhaseIo io = phase_io(m, k, j, kind);
    PhaseRecord rec;
    rec.name = (kind == PhaseKind::square ? "square-phase-" : "nonsquare-phase-") + std::to_string(j);
    rec.order = j;
    rec.runs = run_count;
    SymbolPool next;
    std::map<ReceiverSet, std::size_t> cursor;
    for (int run = 0; run < run_count; ++run) {
      SymbolPool inputs;
      for (auto& [s, forms] : pool) {
        auto& at = cursor[s];
        inputs[s].assign(forms.begin() + static_cast<std::ptrdiff_t>(at),
                         forms.begin() + static_cast<std::ptrdiff_t>(at + io.inputs_per_subset));
        at += io.inputs_per_subset;
        rec.inputs_consumed += io.inputs_per_subset;
      }
      PhaseResult res = kind == PhaseKind::square
                            ? build_square_phase(trace.ledger, k, j, inputs, channels, rng)
                            : build_nonsquare_phase(trace.ledger, m, k, j,
                                                    dof::nonsquare_params(m, k, j), inputs,
                                                    channels, rng);
      rec.slots += res.slots;
      for (auto& [t, forms] : res.outputs) {
        rec.outputs_generated += forms.size();
        for (const auto& f : forms) {
          trace.generated.push_back({j + 1, t, f});
        }
        auto& dst = next[t];
        dst.insert(dst.end(), forms.begin(), forms.end());
      }
    }
    for (const auto& [s, forms] : pool) {
      if (cursor[s] != forms.size()) {
        throw std::logic_error("phase left undelivered inputs");
      }
    }
    trace.phases.push_back(std::move(rec));
    pool = std::move(next);
  }
  if (!pool.empty()) {
    throw std::logic_error("chain ended with undelivered symbols");
  }
}

namespace {

SymbolPool make_base_pool(SchemeTrace& trace, int j, std::size_t per_subset) {
  SymbolPool pool;
  for (ReceiverSet s : subsets_of_size(trace.k, j)) {
    for (std::size_t i = 0; i < per_subset; ++i) {
      const auto id = trace.ledger.symbols().add(s, ledger::subset_label(s) + "." + std::to_string(i));
      pool[s].push_back(LinearForm::symbol(id));
    }
  }
  return pool;
}

void stamp(SchemeTrace& trace, const RngStream& rng) {
  trace.seed = rng.master_seed();
  trace.stream = rng.stream_index();
}

std::size_t planned_symbols(int m, int k, int j, PhaseKind kind) {
  const auto runs = plan_replication(m, k, j, kind);
  return static_cast<std::size_t>(runs.front()) *
         static_cast<std::size_t>(phase_io(m, k, j, kind).inputs_per_subset) *
         subsets_of_size(k, j).size();
}

SchemeTrace run_chain(std::string name, int m, int k, int j, PhaseKind kind, RngStream& rng,
                      const ChannelOverrides& overrides) {
  SchemeTrace trace(std::move(name), m, k, j);
  stamp(trace, rng);
  const auto runs = plan_replication(m, k, j, kind);
  const PhaseIo io = phase_io(m, k, j, kind);
  SymbolPool pool = make_base_pool(trace, j, static_cast<std::size_t>(runs.front()) *
                                                 static_cast<std::size_t>(io.inputs_per_subset));
  ChannelSource channels(k, m, rng, overrides);
  deliver_pool(trace, j, std::move(pool), kind, channels, rng);
  return trace;
}

std::vector<ledger::SymbolId> symbols_of(const ledger::SymbolTable& table, ReceiverSet owners) {
  std::vector<ledger::SymbolId> out;
  for (const auto& s : table.symbols()) {
    if (s.owners == owners) {
      out.push_back(s.id);
    }
  }
  return out;
}

LinearForm part_owned_by(const LinearForm& form, const ledger::SymbolTable& table,
                         ReceiverSet owners) {
  return form.restricted([&](ledger::SymbolId id) { return table.at(id).owners == owners; });
}

}  // namespace

SchemeTrace run_square_scheme(int k, RngStream& rng, const ChannelOverrides& overrides) {
  if (k < 1 || k > kMaxReceivers) {
    throw std::invalid_argument("square scheme needs k >= 1");
  }
  return run_chain("square", k, k, 1, PhaseKind::square, rng, overrides);
}

SchemeTrace run_order_j_delivery(int m, int k, int j, RngStream& rng,
                                 const ChannelOverrides& overrides) {
  dof::DofQuery q(m, k, j);
  if (m < k - j + 1) {
    throw OutOfRegimeError("order-j delivery needs m >= k-j+1");
  }
  return run_chain("order-j", m, k, j, PhaseKind::square, rng, overrides);
}

SchemeTrace run_nonsquare_scheme(int m, int k, int j, RngStream& rng,
                                 const ChannelOverrides& overrides) {
  dof::DofQuery q(m, k, j);
  return run_chain("nonsquare", m, k, j, PhaseKind::nonsquare, rng, overrides);
}

SchemeTrace run_mat23_suboptimal(RngStream& rng, const ChannelOverrides& overrides) {
  SchemeTrace trace = run_nonsquare_scheme(2, 3, 1, rng, overrides);
  trace.scheme = "mat23";
  return trace;
}

SchemeTrace run_alt22(RngStream& rng, const ChannelOverrides& overrides) {
  SchemeTrace trace("alt22", 2, 2, 1);
  stamp(trace, rng);
  auto& table = trace.ledger.symbols();
  std::vector<LinearForm> all;
  for (int r = 0; r < 2; ++r) {
    for (int i = 0; i < 2; ++i) {
      const auto id = table.add(ReceiverSet{1} << r, ledger::receiver_label(r) + "." + std::to_string(i));
      all.push_back(LinearForm::symbol(id));
    }
  }
  ChannelSource channels(2, 2, rng, overrides);
  auto plan = normalized_plan(trace.ledger.random_combination(all, 2, rng, "mixed:AB:precode"));
  trace.ledger.transmit_slot(std::move(plan), channels.next(), "mixed:AB");

  const auto& eq_a = trace.ledger.equation_at(0, 0);
  const auto& eq_b = trace.ledger.equation_at(1, 0);
  SymbolPool pool;
  // Both receivers want the A-part heard at B and the B-part heard at A.
  pool[0b11] = {part_owned_by(eq_b.form, table, 0b01), part_owned_by(eq_a.form, table, 0b10)};
  for (const auto& f : pool[0b11]) {
    trace.generated.push_back({2, 0b11, f});
  }
  trace.phases.push_back({"mixed-slot", 1, 1, 4, 1, 2});
  deliver_pool(trace, 2, std::move(pool), PhaseKind::square, channels, rng);
  return trace;
}

SchemeTrace run_opt23(RngStream& rng, const ChannelOverrides& overrides) {
  SchemeTrace trace("opt23", 2, 3, 1);
  stamp(trace, rng);
  auto& table = trace.ledger.symbols();
  for (int r = 0; r < 3; ++r) {
    for (int i = 0; i < 4; ++i) {
      table.add(ReceiverSet{1} << r, ledger::receiver_label(r) + "." + std::to_string(i));
    }
  }
  ChannelSource channels(3, 2, rng, overrides);
  std::vector<int> chunk_used(3, 0);
  SymbolPool pool;
  for (ReceiverSet pair : subsets_of_size(3, 2)) {
    const int x = std::countr_zero(pair);
    const int y = std::countr_zero(pair & ~(ReceiverSet{1} << x));
    std::vector<LinearForm> symbols;
    for (int r : {x, y}) {
      const auto mine = symbols_of(table, ReceiverSet{1} << r);
      const int c = chunk_used[r]++;
      symbols.push_back(LinearForm::symbol(mine[2 * c]));
      symbols.push_back(LinearForm::symbol(mine[2 * c + 1]));
    }
    const std::string tag = "mixed:" + ledger::subset_label(pair);
    auto plan = normalized_plan(trace.ledger.random_combination(symbols, 2, rng, tag + ":precode"));
    const std::size_t slot = trace.ledger.slot_count();
    trace.ledger.transmit_slot(std::move(plan), channels.next(), tag);
    const auto& eq_x = trace.ledger.equation_at(x, slot);
    const auto& eq_y = trace.ledger.equation_at(y, slot);
    pool[pair] = {part_owned_by(eq_y.form, table, ReceiverSet{1} << x),
                  part_owned_by(eq_x.form, table, ReceiverSet{1} << y)};
    for (const auto& f : pool[pair]) {
      trace.generated.push_back({2, pair, f});
    }
  }
  trace.phases.push_back({"mixed-pair-slots", 1, 1, 12, 3, 6});
  deliver_pool(trace, 2, std::move(pool), PhaseKind::square, channels, rng);
  return trace;
}

SchemeTrace run_tdma(int k, RngStream& rng, const ChannelOverrides& overrides) {
  if (k < 1 || k > kMaxReceivers) {
    throw std::invalid_argument("tdma needs k >= 1");
  }
  SchemeTrace trace("tdma", 1, k, 1);
  stamp(trace, rng);
  ChannelSource channels(k, 1, rng, overrides);
  for (int r = 0; r < k; ++r) {
    const auto id = trace.ledger.symbols().add(ReceiverSet{1} << r, ledger::receiver_label(r) + ".0");
    trace.ledger.transmit_slot({LinearForm::symbol(id)}, channels.next(),
                               "tdma:" + ledger::receiver_label(r));
  }
  trace.phases.push_back({"round-robin", 1, 1, static_cast<std::size_t>(k),
                          static_cast<std::size_t>(k), 0});
  return trace;
}

std::vector<bool> decode_report(const SchemeTrace& trace, RankTolerance tol) {
  std::vector<bool> out;
  const auto& table = trace.ledger.symbols();
  for (int r = 0; r < trace.k; ++r) {
    const auto targets = table.desired_by(r);
    out.push_back(targets.empty() ||
                  ledger::can_decode(trace.ledger.state(r), targets, table.size(), tol));
  }
  return out;
}

bool all_decoded(const SchemeTrace& trace, RankTolerance tol) {
  const auto report = decode_report(trace, tol);
  return std::all_of(report.begin(), report.end(), [](bool b) { return b; });
}

double worst_condition_number(const SchemeTrace& trace, RankTolerance tol) {
  double worst = 0.0;
  for (const auto& state : trace.ledger.states()) {
    if (state.equations.empty()) {
      continue;
    }
    worst = std::max(worst, condition_number(
                                ledger::coefficient_matrix(state, trace.ledger.symbols().size()), tol));
  }
  return worst;
}

void validate(const SchemeSpec& spec) {
  const auto& n = spec.name;
  if (n == "square" || n == "tdma") {
    if (spec.k < 1 || spec.k > 8) {
      throw std::invalid_argument(n + " needs 1 <= k <= 8");
    }
    if (spec.m != (n == "square" ? spec.k : 1)) {
      throw std::invalid_argument(n == "square" ? "square needs m == k" : "tdma uses m == 1");
    }
    if (n == "square" && planned_symbols(spec.k, spec.k, 1, PhaseKind::square) > kMaxSchemeSymbols) {
      throw std::invalid_argument("square instance needs more than " +
                                  std::to_string(kMaxSchemeSymbols) + " base symbols");
    }
  } else if (n == "order-j" || n == "nonsquare") {
    dof::DofQuery q(spec.m, spec.k, spec.j);
    if (spec.k > 8) {
      throw std::invalid_argument(n + " needs k <= 8");
    }
    if (n == "order-j" && spec.m < spec.k - spec.j + 1) {
      throw OutOfRegimeError("order-j delivery needs m >= k-j+1");
    }
    const auto kind = n == "order-j" ? PhaseKind::square : PhaseKind::nonsquare;
    if (planned_symbols(spec.m, spec.k, spec.j, kind) > kMaxSchemeSymbols) {
      throw std::invalid_argument(n + " instance needs more than " +
                                  std::to_string(kMaxSchemeSymbols) + " base symbols");
    }
  } else if (n == "mat23" || n == "opt23" || n == "alt22") {
    const int k = n == "alt22" ? 2 : 3;
    if (spec.m != 2 || spec.k != k) {
      throw std::invalid_argument(n + " is defined for m = 2, k = " + std::to_string(k) + " only");
    }
  } else {
    throw std::invalid_argument("unknown scheme '" + n + "'");
  }
}

SchemeTrace run_scheme(const SchemeSpec& spec, RngStream& rng) {
  validate(spec);
  const auto& n = spec.name;
  if (n == "square") {
    return run_square_scheme(spec.k, rng);
  }
  if (n == "tdma") {
    return run_tdma(spec.k, rng);
  }
  if (n == "order-j") {
    return run_order_j_delivery(spec.m, spec.k, spec.j, rng);
  }
  if (n == "nonsquare") {
    return run_nonsquare_scheme(spec.m, spec.k, spec.j, rng);
  }
  if (n == "mat23") {
    return run_mat23_suboptimal(rng);
  }
  if (n == "alt22") {
    return run_alt22(rng);
  }
  return run_opt23(rng);
}

Rational expected_dof(const SchemeSpec& spec) {
  validate(spec);
  const auto& n = spec.name;
  if (n == "square") {
    return dof::dof_square(spec.k, 1);
  }
  if (n == "tdma") {
    return 1;
  }
  if (n == "order-j") {
    return dof::dof_square(spec.k, spec.j);
  }
  if (n == "nonsquare") {
    return dof::nonsquare_recursion(dof::DofQuery(spec.m, spec.k, spec.j));
  }
  if (n == "mat23") {
    return make_rational(24, 17);
  }
  if (n == "alt22") {
    return make_rational(4, 3);
  }
  return make_rational(3, 2);
}

}  // namespace dcsit::schemes
