// Copyright 2026 The fdwpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

#include "fdwpc/errors.h"
#include "fdwpc/specfun.h"

namespace fdwpc {
namespace {

using mp = boost::multiprecision::cpp_dec_float_50;

// W by bisection on w e^w in 50 digits.
double reference_w(double x) {
  mp lo = -1;
  mp hi = std::max(1.0, std::log1p(std::max(x, 0.0)) + 1.0);
  const mp target = x;
  for (int i = 0; i < 200; ++i) {
    const mp mid = (lo + hi) / 2;
    (mid * exp(mid) < target ? lo : hi) = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

// E1 by its continued fraction, evaluated backwards in 50 digits (x >= 1).
double reference_e1_cf(double x) {
  const mp X = x;
  mp tail = X;
  for (int k = 400; k >= 1; --k) tail = X + k / (1 + k / tail);
  return static_cast<double>(exp(-X) / tail);
}

TEST(LambertW, Anchors) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w0(1.0), 0.5671432904097838, 1e-15);
  EXPECT_EQ(lambert_w0(-std::exp(-1.0)), -1.0);
}

TEST(LambertW, MatchesBisectionOracle) {
  for (double x : {-0.367879, -0.3, -0.1, -1e-8, 1e-10, 0.2, 2.5, 3.5, 50.0, 1e5, 1e9, 1e200}) {
    const double ref = reference_w(x);
    EXPECT_NEAR(lambert_w0(x), ref, 1e-13 * std::max(1.0, std::abs(ref))) << x;
  }
}

TEST(LambertW, DefiningIdentity) {
  for (int i = 0; i < 2000; ++i) {
    const double x = -std::exp(-1.0) + std::pow(10.0, -14.0 + 23.0 * i / 1999.0);
    const mp w = lambert_w0(x);
    EXPECT_LE(std::abs(static_cast<double>(w * exp(w)) - x), 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST(LambertW, IncreasingAndBranch) {
  double last = -1.0;
  for (double x = -0.36; x < 10.0; x += 0.01) {
    const double w = lambert_w0(x);
    EXPECT_GT(w, last);
    EXPECT_GE(w, -1.0);
    last = w;
  }
}

TEST(LambertW, Domain) {
  EXPECT_THROW(lambert_w0(-0.37), DomainError);
  EXPECT_EQ(lambert_w0(-std::exp(-1.0) - 1e-13), -1.0);
  EXPECT_TRUE(std::isnan(lambert_w0(std::nan(""))));
}

TEST(LambertW, LongDouble) {
  const long double w = lambert_w0(1.0L);
  EXPECT_NEAR(static_cast<double>(w * std::exp(w) - 1.0L), 0.0, 1e-18);
}

TEST(ExpE1, Anchors) {
  EXPECT_NEAR(exp_e1(1.0), 0.21938393439552029, 4e-16);
  EXPECT_NEAR(exp_e1(10.0) / 4.156968929685324e-6, 1.0, 1e-13);
}

TEST(ExpE1, MatchesContinuedFractionOracle) {
  for (double x = 1.0; x <= 50.0; x += 0.7) {
    const double ref = reference_e1_cf(x);
    EXPECT_NEAR(exp_e1(x) / ref, 1.0, 1e-13) << x;
  }
}

TEST(ExpE1, Bracket) {
  for (double x = 1e-6; x < 60.0; x *= 1.7) {
    const double e1 = exp_e1(x);
    EXPECT_LT(std::exp(-x) / (x + 1.0), e1);
    EXPECT_LE(e1, std::exp(-x) / x);
  }
}

TEST(ExpE1, Derivative) {
  for (double x : {0.01, 0.3, 1.0, 1.5, 4.0, 20.0}) {
    const double h = 1e-5 * x;
    const double fd = (exp_e1(x + h) - exp_e1(x - h)) / (2.0 * h);
    const double exact = -std::exp(-x) / x;
    EXPECT_NEAR(fd / exact, 1.0, 1e-6) << x;
  }
}

TEST(ExpE1, DecreasingAndDomain) {
  double last = INFINITY;
  for (double x = 1e-3; x < 40.0; x *= 1.1) {
    const double v = exp_e1(x);
    EXPECT_LT(v, last);
    last = v;
  }
  EXPECT_THROW(exp_e1(0.0), DomainError);
  EXPECT_THROW(exp_e1(-1.0), DomainError);
}

}  // namespace
}  // namespace fdwpc
