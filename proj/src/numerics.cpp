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

#include "dcsit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcsit {

void require_finite(const ComplexMatrix& a) {
  if (!a.is_finite()) {
    throw std::invalid_argument("matrix contains non-finite entries");
  }
}

RankTolerance::RankTolerance(double relative) : relative_(relative) {
  if (!(relative >= 0.0) || !(relative < 1.0)) {
    throw std::invalid_argument("rank tolerance must lie in [0, 1)");
  }
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed), index_(stream_index), engine_(make_engine(master_seed, stream_index)) {}

RngStream RngStream::split(std::uint64_t child) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(index_)), child);
}

Complex RngStream::complex_gaussian() {
  constexpr double kScale = 0.70710678118654752440;  // 1/sqrt(2) per component
  double re = normal_(engine_);
  double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

double RngStream::uniform() { return uniform_(engine_); }

ComplexMatrix sample_channel(std::size_t k_rx, std::size_t m_tx, RngStream& rng) {
  if (k_rx == 0 || m_tx == 0) {
    throw std::invalid_argument("channel dimensions must be positive");
  }
  ComplexMatrix h(k_rx, m_tx);
  // Row-major fill so the draw order matches the K x M reading order.
  for (std::size_t r = 0; r < k_rx; ++r) {
    for (std::size_t m = 0; m < m_tx; ++m) {
      h(r, m) = rng.complex_gaussian();
    }
  }
  return h;
}

namespace {

arma::vec singular_values(const ComplexMatrix& a) {
  if (a.n_elem == 0) {
    return {};
  }
  arma::vec s;
  if (!arma::svd(s, a)) {
    throw NumericalDomainError("SVD failed to converge");
  }
  return s;
}

}  // namespace

std::size_t numerical_rank_of(const arma::vec& s, RankTolerance tol) {
  if (s.n_elem == 0 || s(0) == 0.0) {
    return 0;
  }
  const double threshold = tol.relative() * s(0);
  std::size_t rank = 0;
  for (double v : s) {
    if (v > threshold) {
      ++rank;
    }
  }
  return rank;
}

std::size_t numerical_rank(const ComplexMatrix& a, RankTolerance tol) {
  return numerical_rank_of(singular_values(a), tol);
}

bool in_rowspace(const ComplexMatrix& a, const ComplexRow& v, RankTolerance tol) {
  if (v.n_elem != a.n_cols) {
    throw std::invalid_argument("row vector length does not match matrix columns");
  }
  const ComplexMatrix stacked = arma::join_cols(a, ComplexMatrix(v));
  return numerical_rank(stacked, tol) == numerical_rank(a, tol);
}

double condition_number(const ComplexMatrix& a, RankTolerance tol) {
  const arma::vec s = singular_values(a);
  const std::size_t rank = numerical_rank_of(s, tol);
  if (rank == 0) {
    return std::numeric_limits<double>::infinity();
  }
  return s(0) / s(rank - 1);
}

double log2det_hpd(const ComplexMatrix& a) {
  ComplexMatrix l;
  // Symmetrize to absorb round-off before factorizing.
  const ComplexMatrix herm = 0.5 * (a + a.t());
  if (!arma::chol(l, herm, "lower")) {
    throw NumericalDomainError("matrix is not Hermitian positive definite");
  }
  double acc = 0.0;
  for (arma::uword i = 0; i < l.n_rows; ++i) {
    acc += std::log2(std::real(l(i, i)));
  }
  return 2.0 * acc;
}

double logdet_capacity(const ComplexMatrix& g, const ComplexMatrix& noise_cov,
                       double power_per_symbol) {
  if (!(power_per_symbol >= 0.0)) {
    throw std::invalid_argument("power per symbol must be nonnegative");
  }
  if (noise_cov.n_rows != noise_cov.n_cols || noise_cov.n_rows != g.n_rows) {
    throw std::invalid_argument("noise covariance must be square and match the rows of g");
  }
  const double noise_logdet = log2det_hpd(noise_cov);
  if (power_per_symbol == 0.0 || g.n_elem == 0) {
    return 0.0;
  }
  const ComplexMatrix total = noise_cov + power_per_symbol * (g * g.t());
  return std::max(0.0, log2det_hpd(total) - noise_logdet);
}

}  // namespace dcsit
