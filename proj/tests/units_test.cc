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

#include <gtest/gtest.h>

#include "fdwpc/errors.h"
#include "fdwpc/units.h"

namespace fdwpc {
namespace {

TEST(Units, DbmToWatt) {
  EXPECT_DOUBLE_EQ(dbm_to_watt(30.0), 1.0);
  EXPECT_DOUBLE_EQ(dbm_to_watt(0.0), 1e-3);
  EXPECT_DOUBLE_EQ(dbm_to_watt(-10.0), 1e-4);
}

TEST(Units, DbmRoundTrip) {
  for (double dbm = -200.0; dbm <= 60.0; dbm += 0.37) {
    EXPECT_NEAR(watt_to_dbm(dbm_to_watt(dbm)), dbm, 1e-12 * std::max(1.0, std::abs(dbm)));
    const double w = dbm_to_watt(dbm);
    EXPECT_NEAR(dbm_to_watt(watt_to_dbm(w)) / w, 1.0, 1e-12);
  }
}

TEST(Units, DbToLinear) {
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  EXPECT_DOUBLE_EQ(db_to_linear(10.0), 10.0);
  EXPECT_NEAR(db_to_linear(-100.0), 1e-10, 1e-24);
  EXPECT_NEAR(linear_to_db(db_to_linear(37.5)), 37.5, 1e-12);
}

TEST(Units, NoisePower) {
  EXPECT_NEAR(noise_power(-160.0, 1e5) / 1e-14, 1.0, 1e-12);
  EXPECT_NEAR(noise_power(-160.0, 1.0) / 1e-19, 1.0, 1e-12);
  EXPECT_NEAR(noise_power(0.0, 1.0), 1e-3, 1e-15);
  EXPECT_THROW(noise_power(-160.0, 0.0), InvalidParameter);
}

TEST(Units, PathLoss) {
  PathLossParams p;
  const double ref = std::pow(299792458.0 / (4.0 * std::numbers::pi * 2.4e9), 2) * 1e-3;
  EXPECT_NEAR(omega_from_path_loss(p) / ref, 1.0, 1e-14);
  EXPECT_NEAR(omega_from_path_loss(p), 9.88e-8, 0.01e-8);
  p.distance_m = 20.0;
  EXPECT_NEAR(omega_from_path_loss(p) * 8.0 / ref, 1.0, 1e-14);
  p.distance_m = 1.0;
  EXPECT_NEAR(omega_from_path_loss(p) / (ref * 1e3), 1.0, 1e-14);
}

TEST(Units, PathLossDecreasing) {
  PathLossParams p;
  double last = INFINITY;
  for (double d = 1.5; d < 100.0; d *= 1.3) {
    p.distance_m = d;
    const double w = omega_from_path_loss(p);
    EXPECT_LT(w, last);
    last = w;
  }
  p.distance_m = 10.0;
  last = INFINITY;
  for (double g = 2.0; g < 6.0; g += 0.5) {
    p.exponent = g;
    const double w = omega_from_path_loss(p);
    EXPECT_LT(w, last);
    last = w;
  }
}

TEST(Units, PathLossRejectsInvalid) {
  EXPECT_THROW(omega_from_path_loss({0.0, 10.0, 3.0}), InvalidParameter);
  EXPECT_THROW(omega_from_path_loss({2.4e9, 0.0, 3.0}), InvalidParameter);
  EXPECT_THROW(omega_from_path_loss({2.4e9, 10.0, 1.9}), InvalidParameter);
}

TEST(LinkParams, RecycleCached) {
  LinkConfig c;
  c.eta = 0.5;
  c.g1_mean = 0.6;
  c.alpha1 = 0.4;
  const LinkParams p(c);
  EXPECT_DOUBLE_EQ(p.recycle(), 0.5 * (0.36 + 0.4));
}

TEST(LinkParams, RejectsRecycleAtOne) {
  LinkConfig c;
  c.eta = 0.5;
  c.alpha1 = 2.0;
  EXPECT_THROW(LinkParams{c}, RecycleOutOfRange);
  c.alpha1 = 1.9;
  EXPECT_NO_THROW(LinkParams{c});
}

TEST(LinkParams, RejectsInvalidFields) {
  const auto bad = [](auto mutate) {
    LinkConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(LinkParams(bad([](LinkConfig& c) { c.eta = 0.0; })), InvalidParameter);
  EXPECT_THROW(LinkParams(bad([](LinkConfig& c) { c.eta = 1.0; })), InvalidParameter);
  EXPECT_THROW(LinkParams(bad([](LinkConfig& c) { c.p_et = -1.0; })), InvalidParameter);
  EXPECT_THROW(LinkParams(bad([](LinkConfig& c) { c.p_proc = -1.0; })), InvalidParameter);
  EXPECT_THROW(LinkParams(bad([](LinkConfig& c) { c.sigma2_sq = 0.0; })), InvalidParameter);
  EXPECT_THROW(LinkParams(bad([](LinkConfig& c) { c.alpha2 = -1e-3; })), InvalidParameter);
  EXPECT_THROW(LinkParams(bad([](LinkConfig& c) { c.alpha1 = NAN; })), InvalidParameter);
}

TEST(LinkParams, EtNoise) {
  LinkConfig c;
  c.sigma2_sq = 0.1;
  c.alpha2 = 0.2;
  EXPECT_DOUBLE_EQ(LinkParams(c).et_noise(3.0), 0.1 + 0.6);
}

}  // namespace
}  // namespace fdwpc
