// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ftclust/rational.h"

#include <cctype>

#include "ftclust/errors.h"

namespace ftclust {
namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!AllDigits(num) || !AllDigits(den)) {
      throw SchemaError("malformed rational '" + std::string(text) + "'");
    }
    mpz_class d{std::string(den)};
    if (d == 0) {
      throw SchemaError("zero denominator in '" + std::string(text) + "'");
    }
    value = Rational(mpz_class(std::string(num)), d);
    value.canonicalize();
  } else {
    std::string_view whole = s;
    std::string_view frac;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      whole = s.substr(0, dot);
      frac = s.substr(dot + 1);
    }
    if ((whole.empty() && frac.empty()) ||
        (!whole.empty() && !AllDigits(whole)) ||
        (!frac.empty() && !AllDigits(frac))) {
      throw SchemaError("malformed rational '" + std::string(text) + "'");
    }
    mpz_class num(whole.empty() ? std::string("0") : std::string(whole));
    mpz_class den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    value = Rational(num, den);
    value.canonicalize();
  }
  return negative ? Rational(-value) : value;
}

std::string FormatRational(const Rational& value) { return value.get_str(); }

Rational CeilSqrt(const Rational& value, unsigned long denominator) {
  // Smallest integer m with m^2 >= value * denominator^2, i.e. m >= D*sqrt(v).
  mpz_class den2 = mpz_class(denominator) * denominator;
  mpz_class scaled_num = value.get_num() * den2;
  // ceil(scaled_num / value_den)
  mpz_class target;
  mpz_cdiv_q(target.get_mpz_t(), scaled_num.get_mpz_t(),
             value.get_den().get_mpz_t());
  mpz_class m = sqrt(target);
  if (m * m < target) ++m;
  Rational out(m, mpz_class(denominator));
  out.canonicalize();
  return out;
}

}  // namespace ftclust
