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

#include "dcsit/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dcsit {

Rational make_rational(long num, long den) {
  if (den == 0) {
    throw std::invalid_argument("zero denominator");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed integer");
  }
  BigInt v(std::string(s), 10);
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    throw std::invalid_argument("empty rational");
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) {
      throw std::invalid_argument("zero denominator");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      whole.remove_prefix(1);
    }
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed decimal");
    }
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) {
      scale *= 10;
    }
    BigInt w = whole.empty() ? BigInt(0) : BigInt(std::string(whole), 10);
    BigInt f = frac.empty() ? BigInt(0) : BigInt(std::string(frac), 10);
    Rational r(w * scale + f, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text));
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  BigInt acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc *= n - k + i;
    acc /= i;  // exact: acc holds C(n-k+i, i) after this step
  }
  return acc;
}

double to_double(const Rational& r) { return r.get_d(); }

}  // namespace dcsit
