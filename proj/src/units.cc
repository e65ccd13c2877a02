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

#include "fdwpc/units.h"

#include <numbers>
#include <string>

#include "fdwpc/errors.h"

namespace fdwpc {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

double noise_power(double psd_dbm_per_hz, double bandwidth_hz) {
  require(bandwidth_hz > 0.0, "noise_power: bandwidth must be positive");
  return dbm_to_watt(psd_dbm_per_hz) * bandwidth_hz;
}

LinkParams::LinkParams(const LinkConfig& config) : config_(config) {
  require(config.eta > 0.0 && config.eta < 1.0, "eta must lie in (0, 1)");
  require(finite_nonneg(config.p_proc), "p_proc must be finite and >= 0");
  require(finite_nonneg(config.p_et), "p_et must be finite and >= 0");
  require(std::isfinite(config.sigma2_sq) && config.sigma2_sq > 0.0,
          "sigma2_sq must be finite and > 0");
  require(finite_nonneg(config.sigma1_sq), "sigma1_sq must be finite and >= 0");
  require(std::isfinite(config.g1_mean), "g1_mean must be finite");
  require(finite_nonneg(config.alpha1), "alpha1 must be finite and >= 0");
  require(finite_nonneg(config.alpha2), "alpha2 must be finite and >= 0");
  recycle_ = config.eta * (config.g1_mean * config.g1_mean + config.alpha1);
  if (!(recycle_ < 1.0)) {
    throw RecycleOutOfRange("eta*(g1_mean^2 + alpha1) = " + std::to_string(recycle_) +
                            " must be < 1");
  }
}

double omega_from_path_loss(const PathLossParams& p) {
  require(p.carrier_hz > 0.0, "carrier frequency must be positive");
  require(p.distance_m > 0.0, "distance must be positive");
  require(p.exponent >= 2.0, "path-loss exponent must be >= 2");
  const double ratio = kSpeedOfLight / (p.carrier_hz * 4.0 * std::numbers::pi);
  return ratio * ratio * std::pow(p.distance_m, -p.exponent);
}

}  // namespace fdwpc
