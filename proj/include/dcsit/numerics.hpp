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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include <armadillo>

namespace dcsit {

using Complex = std::complex<double>;

/// Dense complex matrix. Channel matrices are stored as K x M with entry
/// (r, m) being the gain from transmit antenna m to receiver r, so the noiseless
/// reception of receiver r is the row product H.row(r) * x.
using ComplexMatrix = arma::cx_mat;
using ComplexRow = arma::cx_rowvec;

/// Raised when a matrix argument violates a numerical precondition, e.g. a
/// noise covariance that is not positive definite.
class NumericalDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a);

/// Relative singular-value threshold used for every rank decision.
class RankTolerance {
 public:
  static constexpr double kDefault = 1e-9;

  RankTolerance() = default;
  explicit RankTolerance(double relative);

  [[nodiscard]] double relative() const noexcept { return relative_; }

 private:
  double relative_ = kDefault;
};

/// Reproducible, splittable random stream.
///
/// The engine state is derived from (master seed, stream index) through a
/// SplitMix64 mix, so two streams with the same pair produce the same samples
/// and streams with different indices are decorrelated. Parallel consumers
/// each own a stream; nothing is shared.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  [[nodiscard]] std::uint64_t master_seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_index() const noexcept { return index_; }

  /// Child stream keyed by (this stream's seed/index, child). Deterministic.
  [[nodiscard]] RngStream split(std::uint64_t child) const;

  /// Circularly-symmetric complex Gaussian, zero mean, unit variance.
  Complex complex_gaussian();
  double uniform();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// K x M matrix of i.i.d. CN(0,1) entries.
ComplexMatrix sample_channel(std::size_t k_rx, std::size_t m_tx, RngStream& rng);

/// Number of singular values above tol.relative() times the largest one.
std::size_t numerical_rank(const ComplexMatrix& a, RankTolerance tol = {});

/// Rank decision on singular values sorted in descending order.
std::size_t numerical_rank_of(const arma::vec& singular_values, RankTolerance tol = {});

/// True iff stacking v under a does not increase the numerical rank.
bool in_rowspace(const ComplexMatrix& a, const ComplexRow& v, RankTolerance tol = {});

/// Ratio of largest to smallest singular value among those counted by
/// numerical_rank; 1 for rank-one input, infinity for the zero matrix.
double condition_number(const ComplexMatrix& a, RankTolerance tol = {});

/// log2 det(I + p * N^{-1} G G^H) in bits. N must be Hermitian positive
/// definite. p == 0 yields exactly 0.
double logdet_capacity(const ComplexMatrix& g, const ComplexMatrix& noise_cov,
                       double power_per_symbol);

/// log2 det of a Hermitian positive definite matrix via Cholesky.
double log2det_hpd(const ComplexMatrix& a);

}  // namespace dcsit
