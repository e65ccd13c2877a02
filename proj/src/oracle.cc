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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fdwpc/capacity.h"
#include "fdwpc/errors.h"

namespace fdwpc {
namespace {

constexpr Eigen::Index kMaxOracleStates = 8;

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class Objective {
 public:
  Objective(const LinkParams& params, const FadingDistribution& fading)
      : params_(params), h_(fading.gains()), p_(fading.probs()) {}

  // Rate of ET power fractions w (last entry is the unused bucket).
  double operator()(const std::vector<double>& w, Eigen::ArrayXd* power = nullptr) {
    ++evaluations;
    const std::size_t n = static_cast<std::size_t>(h_.size());
    std::vector<double> u(n);
    double harvest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = w[i] * params_.p_et() / p_(static_cast<Eigen::Index>(i));
      harvest += w[i] * params_.p_et() * h_(static_cast<Eigen::Index>(i)) *
                 h_(static_cast<Eigen::Index>(i));
    }
    const double budget = (params_.eta() * harvest - params_.p_proc()) / (1.0 - params_.recycle());
    if (power) *power = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(n));
    if (!(budget > 0.0)) return 0.0;

    std::vector<std::pair<double, std::size_t>> floors;
    for (std::size_t i = 0; i < n; ++i) {
      const double h = h_(static_cast<Eigen::Index>(i));
      if (h > 0.0) {
        floors.emplace_back((params_.sigma2_sq() + u[i] * params_.alpha2()) / (h * h), i);
      }
    }
    if (floors.empty()) return 0.0;
    std::sort(floors.begin(), floors.end());

    double mass = 0.0;
    double weighted = 0.0;
    double level = 0.0;
    std::size_t active = 0;
    for (std::size_t k = 0; k < floors.size(); ++k) {
      mass += p_(static_cast<Eigen::Index>(floors[k].second));
      weighted += p_(static_cast<Eigen::Index>(floors[k].second)) * floors[k].first;
      level = (budget + weighted) / mass;
      active = k + 1;
      if (k + 1 == floors.size() || level <= floors[k + 1].first) break;
    }
    double rate = 0.0;
    for (std::size_t k = 0; k < active; ++k) {
      const auto j = static_cast<Eigen::Index>(floors[k].second);
      rate += p_(j) * 0.5 * std::log2(level / floors[k].first);
      if (power) (*power)(j) = level - floors[k].first;
    }
    return rate;
  }

  long evaluations = 0;

 private:
  const LinkParams& params_;
  Eigen::ArrayXd h_;
  Eigen::ArrayXd p_;
};

// Visits every composition of m into `buckets` parts.
template <typename Fn>
void for_each_composition(int m, std::size_t buckets, std::vector<int>& parts, std::size_t at,
                          Fn&& fn) {
  if (at + 1 == buckets) {
    parts[at] = m;
    fn(parts);
    return;
  }
  for (int k = 0; k <= m; ++k) {
    parts[at] = k;
    for_each_composition(m - k, buckets, parts, at + 1, fn);
  }
}

}  // namespace

OracleResult brute_force_oracle(const LinkParams& params, const FadingDistribution& fading,
                                const OracleGrid& grid) {
  const Eigen::Index n = fading.size();
  if (n > kMaxOracleStates) throw InvalidParameter("brute_force_oracle: at most 8 states");
  OracleResult out;
  out.allocation = PowerAllocation::zero(n);
  if (!sustainable(params, fading)) return out;

  Objective objective(params, fading);
  const std::size_t buckets = static_cast<std::size_t>(n) + 1;
  int m = 1;
  while (m < 200 && binomial(m + 1 + n, n) <= grid.max_grid_points) ++m;

  std::vector<double> best(buckets, 0.0);
  double best_value = -1.0;
  std::vector<int> parts(buckets);
  std::vector<double> w(buckets);
  for_each_composition(m, buckets, parts, 0, [&](const std::vector<int>& k) {
    for (std::size_t i = 0; i < buckets; ++i) w[i] = static_cast<double>(k[i]) / m;
    const double v = objective(w);
    if (v > best_value) {
      best_value = v;
      best = w;
    }
  });

  double step = 1.0 / m;
  for (int level = 0; level <= grid.refinements; ++level) {
    bool moved = true;
    while (moved) {
      moved = false;
      std::vector<double> cand_best = best;
      for (std::size_t a = 0; a < buckets; ++a) {
        for (std::size_t b = 0; b < buckets; ++b) {
          if (a == b) continue;
          for (int s = 1; s <= grid.steps_per_level; ++s) {
            const double amount = std::min(step * s, best[a]);
            if (amount <= 0.0) break;
            std::vector<double> trial = best;
            trial[a] -= amount;
            trial[b] += amount;
            const double v = objective(trial);
            if (v > best_value * (1.0 + 1e-14)) {
              best_value = v;
              cand_best = trial;
              moved = true;
            }
          }
        }
      }
      best = cand_best;
    }
    step /= grid.steps_per_level;
  }

  Eigen::ArrayXd power;
  out.capacity = objective(best, &power);
  out.evaluations = objective.evaluations;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.allocation.x2(i) =
        std::sqrt(best[static_cast<std::size_t>(i)] * params.p_et() / fading.probs()(i));
  }
  out.allocation.p_ehu = power;
  return out;
}

}  // namespace fdwpc
