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
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fdwpc/errors.h"
#include "fdwpc/simulator.h"
#include "instances.h"

namespace fdwpc {
namespace {

TEST(Battery, StepExamples) {
  auto [b1, out1] = battery_step({5.0}, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(b1.level, 4.0);
  EXPECT_DOUBLE_EQ(out1, 3.0);
  auto [b2, out2] = battery_step({1.0}, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(b2.level, 0.0);
  EXPECT_DOUBLE_EQ(out2, 1.0);
  auto [b3, out3] = battery_step({0.0}, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(b3.level, 0.5);
  EXPECT_DOUBLE_EQ(out3, 0.0);
}

TEST(Harvest, Examples) {
  LinkConfig c;
  c.eta = 0.5;
  c.g1_mean = 0.1;
  const LinkParams params(c);
  EXPECT_DOUBLE_EQ(harvest_per_use(2.0, 3.0, 0.0, 0.0, params), 0.5 * 36.0);
  EXPECT_DOUBLE_EQ(harvest_per_use(0.0, 0.0, 10.0, 0.2, params), 0.5 * 9.0);
  EXPECT_DOUBLE_EQ(harvest_per_use(1.0, 1.0, 10.0, -0.1, params), 0.5);
}

TEST(Harvest, MeanMatchesSecondMoment) {
  LinkConfig c;
  c.eta = 0.7;
  c.g1_mean = 0.3;
  c.alpha1 = 0.2;
  const LinkParams params(c);
  const double h = 0.8, x2 = 1.5, p = 2.0;
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n(0.0, 1.0);
  double sum = 0.0;
  const int uses = 1000000;
  for (int i = 0; i < uses; ++i) {
    sum += harvest_per_use(h, x2, std::sqrt(p) * n(rng), std::sqrt(c.alpha1) * n(rng), params);
  }
  const double expected = c.eta * (h * h * x2 * x2 + (c.g1_mean * c.g1_mean + c.alpha1) * p);
  EXPECT_NEAR(sum / uses / expected, 1.0, 0.01);
}

struct Fixture {
  LinkParams params;
  FadingDistribution fading;
  CapacityResult result;
};

Fixture reference(int states = 200) {
  Scenario s = testing::reference_scenario();
  s.fading_states = states;
  Fixture f{s.link_params(), s.fading(), {}};
  f.result = solve(f.params, f.fading);
  return f;
}

TEST(Simulate, ConservesEnergy) {
  const auto f = reference();
  SimConfig cfg;
  cfg.n_slots = 5000;
  const auto t = simulate(f.params, f.fading, f.result.allocation, cfg);
  EXPECT_LE(t.conservation_error(), 1e-12);
  EXPECT_GE(t.min_level, 0.0);
  ASSERT_EQ(t.slots.size(), 5000u);
  for (const auto& r : t.slots) EXPECT_GE(r.battery_j, 0.0);
  EXPECT_EQ(t.initial_level, 0.0);
  EXPECT_GT(t.transmit_slots, 0);
}

TEST(Simulate, ColdStartGatesFirstSlot) {
  LinkConfig c;
  c.p_et = 1.0;
  c.sigma2_sq = 0.1;
  const LinkParams params(c);
  const auto fading = deterministic(1.0);
  const auto alloc = solve(params, fading).allocation;
  SimConfig cfg;
  cfg.n_slots = 1;
  const auto t = simulate(params, fading, alloc, cfg);
  EXPECT_EQ(t.outage_fraction, 1.0);
  EXPECT_EQ(t.empirical_rate, 0.0);
  EXPECT_FALSE(t.slots[0].transmitted);
  cfg.n_slots = 1000;
  const auto warm = simulate(params, fading, alloc, cfg);
  EXPECT_LT(warm.outage_fraction, 0.01);
  EXPECT_NEAR(warm.empirical_rate, solve(params, fading).capacity, 0.02);
}

TEST(Simulate, ZeroAllocationIdles) {
  const auto f = reference(50);
  SimConfig cfg;
  cfg.n_slots = 100;
  const auto t = simulate(f.params, f.fading, PowerAllocation::zero(f.fading.size()), cfg);
  EXPECT_EQ(t.empirical_rate, 0.0);
  EXPECT_EQ(t.outage_fraction, 0.0);
  EXPECT_EQ(t.transmit_slots, 0);
}

TEST(Simulate, Reproducible) {
  const auto f = reference(100);
  SimConfig cfg;
  cfg.n_slots = 2000;
  cfg.seed = 99;
  const auto a = simulate(f.params, f.fading, f.result.allocation, cfg);
  const auto b = simulate(f.params, f.fading, f.result.allocation, cfg);
  std::ostringstream sa, sb;
  write_trace_csv(sa, a);
  write_trace_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.empirical_rate, b.empirical_rate);
  EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')), "slot,h,transmitted,slot_rate_bits,battery_j");
}

TEST(Simulate, DeterministicLinkSeedsAgree) {
  // A single state harvests steadily, so the long-run rate is seed independent.
  LinkConfig c;
  c.p_et = 1.0;
  c.sigma2_sq = 0.1;
  c.alpha1 = 0.2;
  const LinkParams params(c);
  const auto fading = deterministic(1.0);
  const auto alloc = solve(params, fading).allocation;
  SimConfig cfg;
  cfg.n_slots = 4000;
  cfg.seed = 1;
  const double r1 = simulate(params, fading, alloc, cfg).empirical_rate;
  cfg.seed = 2;
  const double r2 = simulate(params, fading, alloc, cfg).empirical_rate;
  EXPECT_NEAR(r1 / r2, 1.0, 0.03);
}

TEST(Simulate, RejectsBadConfig) {
  const auto f = reference(20);
  SimConfig cfg;
  cfg.k = 0;
  EXPECT_THROW(simulate(f.params, f.fading, f.result.allocation, cfg), InvalidParameter);
  EXPECT_THROW(simulate(f.params, f.fading, PowerAllocation::zero(3), SimConfig{}), InvalidParameter);
}

}  // namespace
}  // namespace fdwpc
