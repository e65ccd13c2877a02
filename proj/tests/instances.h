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

// Parameter sets shared by the unit tests and the acceptance run.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fdwpc/fading.h"
#include "fdwpc/reports.h"
#include "fdwpc/units.h"

namespace fdwpc::testing {

struct Instance {
  LinkConfig config;
  Eigen::ArrayXd gains;
  Eigen::ArrayXd probs;
};

// Small random link: 1 to 8 states around a 5 to 20 m path loss, 40 to 150 dB
// suppression, mixed recycling and processing costs up to just past the
// sustainability threshold.
inline Instance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  Instance in;
  const int n = 1 + static_cast<int>(unit(rng) * 8.0) % 8;
  PathLossParams path;
  path.distance_m = 5.0 + 15.0 * unit(rng);
  const double omega = omega_from_path_loss(path);
  in.gains.resize(n);
  in.probs.resize(n);
  for (int i = 0; i < n; ++i) {
    in.gains(i) = std::sqrt(omega * expo(rng));
    in.probs(i) = 0.05 + unit(rng);
  }
  in.probs /= in.probs.sum();

  LinkConfig& c = in.config;
  c.eta = 0.3 + 0.6 * unit(rng);
  c.p_et = dbm_to_watt(35.0 * unit(rng));
  c.sigma1_sq = c.sigma2_sq = 1e-14;
  c.alpha2 = db_to_linear(-(40.0 + 110.0 * unit(rng)));
  const double recycle = 0.9 * unit(rng) * unit(rng);
  c.g1_mean = std::sqrt(0.5 * recycle / c.eta);
  c.alpha1 = 0.5 * recycle / c.eta;
  const double supply = c.eta * c.p_et * (in.gains.square() * in.probs).sum();
  c.p_proc = unit(rng) < 0.3 ? 0.0 : 1.2 * unit(rng) * supply;
  return in;
}

// Defaults of the command-line scenario with the processing cost removed.
inline Scenario reference_scenario() {
  Scenario s;
  s.pp_dbm.reset();
  s.pet_dbm = 30.0;
  s.suppression_db = 100.0;
  return s;
}

}  // namespace fdwpc::testing
