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
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcsit/dof.hpp"
#include "dcsit/numerics.hpp"

namespace dcsit::ledger {

using SymbolId = std::uint32_t;
using NoiseId = std::uint64_t;

struct BaseSymbol {
  SymbolId id;
  ReceiverSet owners;  ///< receivers that want this symbol
  int order;           ///< |owners| at creation
  std::string label;
};

/// Registry of the data symbols a scheme delivers. Everything transmitted is a
/// linear form over these ids.
class SymbolTable {
 public:
  explicit SymbolTable(int receivers);

  SymbolId add(ReceiverSet owners, std::string label);

  [[nodiscard]] const BaseSymbol& at(SymbolId id) const;
  [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
  [[nodiscard]] int receivers() const noexcept { return receivers_; }
  [[nodiscard]] std::span<const BaseSymbol> symbols() const noexcept { return symbols_; }

  /// Ids of every symbol whose owner set contains `receiver`, ascending.
  [[nodiscard]] std::vector<SymbolId> desired_by(int receiver) const;

 private:
  int receivers_;
  std::vector<BaseSymbol> symbols_;
};

/// Sparse complex combination of base symbols plus weights on past noise
/// samples. Forms built by the transmitter never carry noise weights.
class LinearForm {
 public:
  LinearForm() = default;

  static LinearForm symbol(SymbolId id, Complex coeff = {1.0, 0.0});

  [[nodiscard]] Complex coefficient(SymbolId id) const;
  [[nodiscard]] const std::map<SymbolId, Complex>& coefficients() const noexcept { return coeffs_; }
  [[nodiscard]] const std::map<NoiseId, Complex>& noise_weights() const noexcept { return noise_; }

  [[nodiscard]] bool empty() const noexcept { return coeffs_.empty() && noise_.empty(); }
  [[nodiscard]] bool noiseless() const noexcept { return noise_.empty(); }

  /// Squared Euclidean norm of the symbol coefficients.
  [[nodiscard]] double coefficient_norm2() const;
  /// Squared Euclidean norm of the noise weights (unit-variance samples).
  [[nodiscard]] double noise_norm2() const;

  void add_noise(NoiseId id, Complex weight);

  /// Dense coefficient row over symbol ids 0..n_symbols-1.
  [[nodiscard]] ComplexRow dense_row(std::size_t n_symbols) const;

  /// Copy keeping only the symbols for which `keep(id)` holds; noise dropped.
  [[nodiscard]] LinearForm restricted(const std::function<bool(SymbolId)>& keep) const;

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator-=(const LinearForm& other);
  LinearForm& operator*=(Complex scale);

  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(Complex s, LinearForm a) { return a *= s; }
  friend LinearForm operator*(LinearForm a, Complex s) { return a *= s; }

 private:
  std::map<SymbolId, Complex> coeffs_;
  std::map<NoiseId, Complex> noise_;
};

/// Scales a nonzero form to unit coefficient norm; empty forms pass through.
LinearForm normalized(const LinearForm& form);

/// One reception y_r[n] = form + z, where z is the fresh sample `noise_id`.
struct Equation {
  int receiver = 0;
  std::size_t slot = 0;
  LinearForm form;
  NoiseId noise_id = 0;
  bool over_the_air = true;

  /// |noise weights|^2 + 1 for receptions, |noise weights|^2 otherwise.
  [[nodiscard]] double noise_variance() const;
  /// The form including its own reception noise as a noise weight.
  [[nodiscard]] LinearForm noisy_form() const;
};

struct ReceiverState {
  int receiver = 0;
  std::vector<Equation> equations;
};

struct SlotRecord {
  std::size_t index = 0;
  ComplexMatrix channel;          ///< K x M
  std::vector<LinearForm> plan;   ///< one entry per transmit antenna (empty = silent)
  std::string tag;

  [[nodiscard]] std::size_t active_antennas() const;
};

/// Coefficients of one random_combination call, row-major (count x inputs).
struct CombinationRecord {
  std::string purpose;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> coefficients;
};

/// State of one scheme instance: the symbol table, every receiver's equations,
/// the slot history with channels and plans, and the log of public random
/// combination coefficients. Single-threaded; one per trial.
class Ledger {
 public:
  Ledger(int receivers, int antennas);

  [[nodiscard]] int receivers() const noexcept { return symbols_.receivers(); }
  [[nodiscard]] int antennas() const noexcept { return antennas_; }

  SymbolTable& symbols() noexcept { return symbols_; }
  [[nodiscard]] const SymbolTable& symbols() const noexcept { return symbols_; }

  [[nodiscard]] const std::vector<ReceiverState>& states() const noexcept { return states_; }
  [[nodiscard]] const ReceiverState& state(int receiver) const;
  [[nodiscard]] const std::vector<SlotRecord>& slots() const noexcept { return slots_; }
  [[nodiscard]] std::size_t slot_count() const noexcept { return slots_.size(); }
  [[nodiscard]] const std::vector<CombinationRecord>& combinations() const noexcept {
    return combinations_;
  }

  /// Sends plan[m] on antenna m through the K x M channel h. Every receiver r
  /// gains sum_m h(r, m) * plan[m] plus a fresh unit-variance noise sample.
  /// An empty plan consumes the slot without producing equations.
  void transmit_slot(std::vector<LinearForm> plan, const ComplexMatrix& h, std::string tag = {});

  /// Equation receiver r obtained in `slot`; throws if none.
  [[nodiscard]] const Equation& equation_at(int receiver, std::size_t slot) const;

  /// `count` combinations of `forms` with i.i.d. CN(0,1) coefficients, logged.
  std::vector<LinearForm> random_combination(std::span<const LinearForm> forms, std::size_t count,
                                             RngStream& rng, std::string purpose = {});

  NoiseId fresh_noise() noexcept { return next_noise_++; }

 private:
  int antennas_;
  SymbolTable symbols_;
  std::vector<ReceiverState> states_;
  std::vector<SlotRecord> slots_;
  std::vector<CombinationRecord> combinations_;
  NoiseId next_noise_ = 0;
};

/// Rows = equations of `state`, columns = symbol ids 0..n_symbols-1.
ComplexMatrix coefficient_matrix(const ReceiverState& state, std::size_t n_symbols);

/// True iff every unit row e_s, s in targets, lies in the row space of the
/// receiver's stacked equations. The row space is the span of the right
/// singular vectors counted by the rank tolerance; e_s belongs to it when its
/// squared projection is within sqrt(tol) of one.
bool can_decode(const ReceiverState& state, std::span<const SymbolId> targets,
                std::size_t n_symbols, RankTolerance tol = {});

/// Noise covariance of a list of forms: entry (a, b) = <w_a, w_b> over the
/// shared unit-variance noise samples.
ComplexMatrix noise_covariance(std::span<const LinearForm> forms);

/// Receiver-side combination sum_i weights[i] * noisy_form(eq_i); the noise
/// weights of the result track every reception sample it mixes.
LinearForm combine_equations(std::span<const Equation> equations, std::span<const Complex> weights);

struct AlignmentRanks {
  std::size_t desired = 0;
  std::size_t interference = 0;
};

/// Ranks of the desired and interference blocks of `receiver`'s equations in
/// a completed two-receiver, two-antenna, three-slot execution.
AlignmentRanks alignment_ranks(const Ledger& ledger, int receiver = 0, RankTolerance tol = {});

/// Receiver labels "A", "B", ... (numeric beyond Z).
std::string receiver_label(int receiver);
std::string subset_label(ReceiverSet set);

}  // namespace dcsit::ledger
