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

#ifndef FTCLUST_RATIONAL_H_
#define FTCLUST_RATIONAL_H_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ftclust {

// Exact rational arithmetic for every distance, cost and LP coefficient.
using Rational = mpq_class;

// Accepts "p/q", "-p/q", integers and finite decimals such as "12.375".
// Throws SchemaError on anything else.
Rational ParseRational(std::string_view text);

// Canonical form: "p" for integers, "p/q" otherwise.
std::string FormatRational(const Rational& value);

// Rounds sqrt(value) up to the nearest multiple of 1/denominator.
Rational CeilSqrt(const Rational& value, unsigned long denominator);

inline bool IsIntegral(const Rational& value) {
  return value.get_den() == 1;
}

inline double ToDouble(const Rational& value) { return value.get_d(); }

}  // namespace ftclust

#endif  // FTCLUST_RATIONAL_H_
