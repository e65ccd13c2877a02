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

// Half-duplex time-switching benchmark. The EHU harvests for a fraction
// t of each block and transmits for the remaining 1 - t, with no
// self-interference at either node.

#pragma once

#include <Eigen/Core>

#include "fdwpc/fading.h"
#include "fdwpc/units.h"

namespace fdwpc {

struct HdResult {
  double t_star = 0.0;  // harvesting fraction in [0, 1]
  double lambda = 0.0;  // inner water-filling multiplier, P = [1/lambda - sigma2^2/h^2]^+
  double rate = 0.0;    // bits per channel use
  Eigen::ArrayXd p_ehu_of_h;
  double balance_residual = 0.0;  // relative, at t_star
};

// rate(t) = (1 - t) sum_h p log2(1 + h^2 P(h) / sigma2^2), where P water-fills
// (1 - t)(Pp + sum_h p P) = t eta P_ET sum_h p h^2.
double hd_rate(const LinkParams& params, const FadingDistribution& fading, double t,
               HdResult* detail = nullptr);

// Maximizes hd_rate over t: scan on a 1e-3 grid, then golden section around
// the best grid point to |dt| <= 1e-6. alpha1, alpha2 and g1_mean are ignored.
HdResult solve_hd(const LinkParams& params, const FadingDistribution& fading);

}  // namespace fdwpc
