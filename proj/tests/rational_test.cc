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

#include <gtest/gtest.h>

#include "ftclust/errors.h"

namespace ftclust {
namespace {

TEST(RationalTest, ParsesFractionsAndDecimals) {
  EXPECT_EQ(ParseRational("3/6"), Rational(1, 2));
  EXPECT_EQ(ParseRational("-7/2"), Rational(-7, 2));
  EXPECT_EQ(ParseRational("12.375"), Rational(99, 8));
  EXPECT_EQ(ParseRational(".5"), Rational(1, 2));
  EXPECT_EQ(ParseRational("42"), Rational(42));
}

TEST(RationalTest, RejectsMalformed) {
  EXPECT_THROW(ParseRational(""), SchemaError);
  EXPECT_THROW(ParseRational("1/0"), SchemaError);
  EXPECT_THROW(ParseRational("1e5"), SchemaError);
  EXPECT_THROW(ParseRational("abc"), SchemaError);
}

TEST(RationalTest, FormatRoundTrips) {
  for (const char* s : {"0", "5", "-3/4", "1/1000000"}) {
    EXPECT_EQ(FormatRational(ParseRational(s)), s);
  }
}

TEST(RationalTest, CeilSqrt) {
  EXPECT_EQ(CeilSqrt(Rational(25), 1000000), Rational(5));
  // sqrt(2) = 1.41421356...
  EXPECT_EQ(CeilSqrt(Rational(2), 1000000), ParseRational("1414214/1000000"));
  EXPECT_EQ(CeilSqrt(Rational(0), 1000000), Rational(0));
}

}  // namespace
}  // namespace ftclust
