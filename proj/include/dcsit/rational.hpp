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
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dcsit {

/// Exact arbitrary-precision fraction, always canonical (lowest terms,
/// positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(long num, long den = 1);

/// Renders as "p/q" (integers too, e.g. "1/1").
std::string to_string(const Rational& r);

/// Parses "p/q", "n", or a finite decimal such as "0.9" exactly.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

BigInt binomial(std::int64_t n, std::int64_t k);

double to_double(const Rational& r);

}  // namespace dcsit
