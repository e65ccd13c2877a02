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

#include "fdwpc/hd_benchmark.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdwpc/capacity.h"

namespace fdwpc {
namespace {

constexpr int kScanPoints = 1000;
constexpr double kTolerance = 1e-6;

}  // namespace

double hd_rate(const LinkParams& params, const FadingDistribution& fading, double t,
               HdResult* detail) {
  const Eigen::Index n = fading.size();
  if (detail) {
    *detail = HdResult{};
    detail->t_star = t;
    detail->p_ehu_of_h = Eigen::ArrayXd::Zero(n);
  }
  if (!(t > 0.0 && t < 1.0)) return 0.0;
  const double harvest = t * params.eta() * params.p_et() * fading.second_moment();
  const double budget = harvest / (1.0 - t) - params.p_proc();
  if (!(budget > 0.0)) return 0.0;

  const auto& h = fading.gains();
  Eigen::ArrayXd floors(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    floors(j) = h(j) > 0.0 ? params.sigma2_sq() / (h(j) * h(j))
                           : std::numeric_limits<double>::infinity();
  }
  const Waterfill wf = waterfill(floors, fading.probs(), budget, 1.0);
  const double rate =
      (1.0 - t) *
      (fading.probs() * (h.square() * wf.power / params.sigma2_sq()).log1p()).sum() /
      std::log(2.0);
  if (detail) {
    detail->lambda = wf.lambda2;
    detail->rate = rate;
    detail->p_ehu_of_h = wf.power;
    const double spent = (1.0 - t) * (params.p_proc() + (fading.probs() * wf.power).sum());
    detail->balance_residual = std::abs(spent - harvest) / harvest;
  }
  return rate;
}

HdResult solve_hd(const LinkParams& params, const FadingDistribution& fading) {
  HdResult out;
  out.p_ehu_of_h = Eigen::ArrayXd::Zero(fading.size());
  if (!(params.p_et() > 0.0)) return out;

  int best_i = 0;
  double best = 0.0;
  for (int i = 1; i < kScanPoints; ++i) {
    const double r = hd_rate(params, fading, static_cast<double>(i) / kScanPoints);
    if (r > best) {
      best = r;
      best_i = i;
    }
  }
  if (best_i == 0) return out;

  double a = static_cast<double>(best_i - 1) / kScanPoints;
  double b = static_cast<double>(best_i + 1) / kScanPoints;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = hd_rate(params, fading, x1);
  double f2 = hd_rate(params, fading, x2);
  while (b - a > kTolerance) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = hd_rate(params, fading, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = hd_rate(params, fading, x1);
    }
  }
  double t = 0.5 * (a + b);
  if (hd_rate(params, fading, t) < best) t = static_cast<double>(best_i) / kScanPoints;
  hd_rate(params, fading, t, &out);
  return out;
}

}  // namespace fdwpc
