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

#include "dcsit/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dcsit::ledger {

SymbolTable::SymbolTable(int receivers) : receivers_(receivers) {
  if (receivers < 1 || receivers > kMaxReceivers) {
    throw std::invalid_argument("receiver count out of range");
  }
}

SymbolId SymbolTable::add(ReceiverSet owners, std::string label) {
  const ReceiverSet universe = (ReceiverSet{1} << receivers_) - 1;
  if (owners == 0 || (owners & ~universe) != 0) {
    throw std::invalid_argument("symbol owners must be a nonempty subset of the receivers");
  }
  const auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back({id, owners, popcount(owners), std::move(label)});
  return id;
}

const BaseSymbol& SymbolTable::at(SymbolId id) const {
  if (id >= symbols_.size()) {
    throw std::out_of_range("unknown symbol id");
  }
  return symbols_[id];
}

std::vector<SymbolId> SymbolTable::desired_by(int receiver) const {
  std::vector<SymbolId> out;
  const ReceiverSet bit = ReceiverSet{1} << receiver;
  for (const auto& s : symbols_) {
    if (s.owners & bit) {
      out.push_back(s.id);
    }
  }
  return out;
}

LinearForm LinearForm::symbol(SymbolId id, Complex coeff) {
  LinearForm f;
  f.coeffs_[id] = coeff;
  return f;
}

Complex LinearForm::coefficient(SymbolId id) const {
  auto it = coeffs_.find(id);
  return it == coeffs_.end() ? Complex{} : it->second;
}

double LinearForm::coefficient_norm2() const {
  double acc = 0.0;
  for (const auto& [id, c] : coeffs_) {
    acc += std::norm(c);
  }
  return acc;
}

double LinearForm::noise_norm2() const {
  double acc = 0.0;
  for (const auto& [id, w] : noise_) {
    acc += std::norm(w);
  }
  return acc;
}

void LinearForm::add_noise(NoiseId id, Complex weight) { noise_[id] += weight; }

ComplexRow LinearForm::dense_row(std::size_t n_symbols) const {
  ComplexRow row(n_symbols, arma::fill::zeros);
  for (const auto& [id, c] : coeffs_) {
    if (id >= n_symbols) {
      throw std::out_of_range("form references a symbol outside the table");
    }
    row(id) = c;
  }
  return row;
}

LinearForm LinearForm::restricted(const std::function<bool(SymbolId)>& keep) const {
  LinearForm out;
  for (const auto& [id, c] : coeffs_) {
    if (keep(id)) {
      out.coeffs_[id] = c;
    }
  }
  return out;
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  for (const auto& [id, c] : other.coeffs_) {
    coeffs_[id] += c;
  }
  for (const auto& [id, w] : other.noise_) {
    noise_[id] += w;
  }
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) {
  for (const auto& [id, c] : other.coeffs_) {
    coeffs_[id] -= c;
  }
  for (const auto& [id, w] : other.noise_) {
    noise_[id] -= w;
  }
  return *this;
}

LinearForm& LinearForm::operator*=(Complex scale) {
  for (auto& [id, c] : coeffs_) {
    c *= scale;
  }
  for (auto& [id, w] : noise_) {
    w *= scale;
  }
  return *this;
}

LinearForm normalized(const LinearForm& form) {
  const double n2 = form.coefficient_norm2();
  if (n2 == 0.0) {
    return form;
  }
  return form * Complex{1.0 / std::sqrt(n2), 0.0};
}

double Equation::noise_variance() const {
  return form.noise_norm2() + (over_the_air ? 1.0 : 0.0);
}

LinearForm Equation::noisy_form() const {
  LinearForm out = form;
  if (over_the_air) {
    out.add_noise(noise_id, {1.0, 0.0});
  }
  return out;
}

std::size_t SlotRecord::active_antennas() const {
  std::size_t n = 0;
  for (const auto& f : plan) {
    if (!f.empty()) {
      ++n;
    }
  }
  return n;
}

Ledger::Ledger(int receivers, int antennas) : antennas_(antennas), symbols_(receivers) {
  if (antennas < 1) {
    throw std::invalid_argument("need at least one transmit antenna");
  }
  states_.reserve(receivers);
  for (int r = 0; r < receivers; ++r) {
    states_.push_back(ReceiverState{r, {}});
  }
}

const ReceiverState& Ledger::state(int receiver) const {
  if (receiver < 0 || receiver >= receivers()) {
    throw std::out_of_range("receiver index out of range");
  }
  return states_[receiver];
}

void Ledger::transmit_slot(std::vector<LinearForm> plan, const ComplexMatrix& h, std::string tag) {
  if (plan.size() > static_cast<std::size_t>(antennas_)) {
    throw std::invalid_argument("plan uses more antennas than available");
  }
  if (h.n_rows != static_cast<arma::uword>(receivers()) ||
      h.n_cols != static_cast<arma::uword>(antennas_)) {
    throw std::invalid_argument("channel matrix must be K x M");
  }
  require_finite(h);
  plan.resize(antennas_);
  const std::size_t index = slots_.size();
  bool silent = true;
  for (const auto& f : plan) {
    silent = silent && f.empty();
  }
  if (!silent) {
    for (int r = 0; r < receivers(); ++r) {
      Equation eq;
      eq.receiver = r;
      eq.slot = index;
      for (int m = 0; m < antennas_; ++m) {
        if (!plan[m].empty()) {
          eq.form += h(r, m) * plan[m];
        }
      }
      eq.noise_id = fresh_noise();
      states_[r].equations.push_back(std::move(eq));
    }
  }
  slots_.push_back(SlotRecord{index, h, std::move(plan), std::move(tag)});
}

const Equation& Ledger::equation_at(int receiver, std::size_t slot) const {
  for (const auto& eq : state(receiver).equations) {
    if (eq.slot == slot) {
      return eq;
    }
  }
  throw std::out_of_range("receiver has no equation from that slot");
}

std::vector<LinearForm> Ledger::random_combination(std::span<const LinearForm> forms,
                                                   std::size_t count, RngStream& rng,
                                                   std::string purpose) {
  if (forms.empty() || count == 0) {
    throw std::invalid_argument("random_combination needs inputs and a positive count");
  }
  CombinationRecord rec{std::move(purpose), count, forms.size(), {}};
  rec.coefficients.reserve(count * forms.size());
  std::vector<LinearForm> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (const auto& f : forms) {
      const Complex c = rng.complex_gaussian();
      rec.coefficients.push_back(c);
      out[i] += c * f;
    }
  }
  combinations_.push_back(std::move(rec));
  return out;
}

ComplexMatrix coefficient_matrix(const ReceiverState& state, std::size_t n_symbols) {
  ComplexMatrix a(state.equations.size(), n_symbols, arma::fill::zeros);
  for (std::size_t i = 0; i < state.equations.size(); ++i) {
    a.row(i) = state.equations[i].form.dense_row(n_symbols);
  }
  return a;
}

bool can_decode(const ReceiverState& state, std::span<const SymbolId> targets,
                std::size_t n_symbols, RankTolerance tol) {
  if (targets.empty()) {
    throw std::invalid_argument("can_decode needs at least one target");
  }
  for (SymbolId s : targets) {
    if (s >= n_symbols) {
      throw std::out_of_range("target symbol outside the table");
    }
  }
  const ComplexMatrix a = coefficient_matrix(state, n_symbols);
  if (a.n_rows < targets.size()) {
    return false;
  }
  ComplexMatrix u;
  ComplexMatrix v;
  arma::vec sv;
  if (!arma::svd_econ(u, sv, v, a, "right")) {
    throw NumericalDomainError("SVD failed to converge");
  }
  const std::size_t rank = numerical_rank_of(sv, tol);
  if (rank == 0) {
    return false;
  }
  // e_s lies in the row space iff its projection onto the leading right
  // singular vectors keeps (numerically) unit norm.
  const ComplexMatrix basis = v.cols(0, rank - 1);
  const double slack = std::sqrt(tol.relative());
  for (SymbolId s : targets) {
    const double kept = arma::accu(arma::square(arma::abs(basis.row(s))));
    if (1.0 - kept > slack) {
      return false;
    }
  }
  return true;
}

ComplexMatrix noise_covariance(std::span<const LinearForm> forms) {
  const std::size_t n = forms.size();
  ComplexMatrix cov(n, n, arma::fill::zeros);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      Complex acc{};
      const auto& wa = forms[a].noise_weights();
      const auto& wb = forms[b].noise_weights();
      for (const auto& [id, w] : wa) {
        if (auto it = wb.find(id); it != wb.end()) {
          acc += w * std::conj(it->second);
        }
      }
      cov(a, b) = acc;
      cov(b, a) = std::conj(acc);
    }
  }
  return cov;
}

LinearForm combine_equations(std::span<const Equation> equations, std::span<const Complex> weights) {
  if (equations.size() != weights.size()) {
    throw std::invalid_argument("one weight per equation required");
  }
  LinearForm out;
  for (std::size_t i = 0; i < equations.size(); ++i) {
    out += weights[i] * equations[i].noisy_form();
  }
  return out;
}

AlignmentRanks alignment_ranks(const Ledger& ledger, int receiver, RankTolerance tol) {
  if (ledger.receivers() != 2 || ledger.antennas() != 2 || ledger.slot_count() != 3) {
    throw std::invalid_argument("alignment_ranks expects a two-user, two-antenna, three-slot trace");
  }
  const auto& table = ledger.symbols();
  const auto& state = ledger.state(receiver);
  if (state.equations.size() != 3 || table.size() != 4) {
    throw std::invalid_argument("alignment_ranks expects 3 equations over 4 symbols");
  }
  const ComplexMatrix a = coefficient_matrix(state, table.size());
  const auto desired_ids = table.desired_by(receiver);
  std::vector<arma::uword> desired;
  std::vector<arma::uword> interference;
  for (const auto& s : table.symbols()) {
    const bool mine = std::find(desired_ids.begin(), desired_ids.end(), s.id) != desired_ids.end();
    (mine ? desired : interference).push_back(s.id);
  }
  const ComplexMatrix d = a.cols(arma::uvec(desired));
  const ComplexMatrix i = a.cols(arma::uvec(interference));
  return {numerical_rank(d, tol), numerical_rank(i, tol)};
}

std::string receiver_label(int receiver) {
  if (receiver >= 0 && receiver < 26) {
    return std::string(1, static_cast<char>('A' + receiver));
  }
  return "R" + std::to_string(receiver + 1);
}

std::string subset_label(ReceiverSet set) {
  std::string out;
  for (int r = 0; r < kMaxReceivers; ++r) {
    if (set & (ReceiverSet{1} << r)) {
      out += receiver_label(r);
    }
  }
  return out;
}

}  // namespace dcsit::ledger
