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

#include <gtest/gtest.h>

#include "fdwpc/hd_benchmark.h"
#include "instances.h"

namespace fdwpc {
namespace {

TEST(HdBenchmark, NoEtPowerNoRate) {
  LinkConfig c;
  c.p_et = 0.0;
  const auto r = solve_hd(LinkParams(c), rayleigh(1e-6, 50));
  EXPECT_EQ(r.rate, 0.0);
  EXPECT_EQ(r.p_ehu_of_h.maxCoeff(), 0.0);
}

TEST(HdBenchmark, DeterministicClosedForm) {
  // One state, Pp = 0: P = t eta P_ET h^2 / (1 - t), rate (1 - t) log2(1 + t a / (1 - t)).
  LinkConfig c;
  c.p_et = 1.0;
  c.sigma2_sq = 0.1;
  const LinkParams params(c);
  const auto f = deterministic(1.0);
  for (double t : {0.1, 0.5, 0.9}) {
    const double a = 0.8 / 0.1;
    EXPECT_NEAR(hd_rate(params, f, t), (1.0 - t) * std::log2(1.0 + t * a / (1.0 - t)), 1e-12);
  }
  EXPECT_EQ(hd_rate(params, f, 0.0), 0.0);
  EXPECT_EQ(hd_rate(params, f, 1.0), 0.0);
}

TEST(HdBenchmark, IgnoresSelfInterference) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto in = testing::random_instance(rng);
    const FadingDistribution f(in.gains, in.probs);
    LinkConfig bare = in.config;
    bare.alpha1 = bare.alpha2 = bare.g1_mean = 0.0;
    EXPECT_EQ(solve_hd(LinkParams(in.config), f).rate, solve_hd(LinkParams(bare), f).rate);
  }
}

TEST(HdBenchmark, OptimumBeatsGrid) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const auto in = testing::random_instance(rng);
    const LinkParams params(in.config);
    const FadingDistribution f(in.gains, in.probs);
    const auto r = solve_hd(params, f);
    EXPECT_GE(r.t_star, 0.0);
    EXPECT_LE(r.t_star, 1.0);
    double grid_best = 0.0;
    for (int k = 0; k <= 1000; ++k) grid_best = std::max(grid_best, hd_rate(params, f, k * 1e-3));
    EXPECT_GE(r.rate, grid_best * (1.0 - 1e-12));
    if (r.rate > 0.0) EXPECT_LE(std::abs(r.balance_residual), 1e-8);
  }
}

TEST(HdBenchmark, BalanceAtOptimum) {
  const Scenario s = testing::reference_scenario();
  const LinkParams params = s.link_params();
  const auto f = s.fading();
  const auto r = solve_hd(params, f);
  ASSERT_GT(r.rate, 0.0);
  const double t = r.t_star;
  const double supply = t * params.eta() * params.p_et() * f.second_moment();
  const double spent = (1.0 - t) * ((f.probs() * r.p_ehu_of_h).sum() + params.p_proc());
  EXPECT_NEAR(spent / supply, 1.0, 1e-8);
}

}  // namespace
}  // namespace fdwpc
