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

// Link parameters and unit conversions. Everything past this header is SI:
// watts, hertz, metres. dB and dBm only appear at the CLI boundary.

#pragma once

#include <cmath>

namespace fdwpc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

// Total noise power over `bandwidth_hz` for a flat density in dBm/Hz.
double noise_power(double psd_dbm_per_hz, double bandwidth_hz);

// Plain field bundle; validated when turned into LinkParams.
struct LinkConfig {
  double eta = 0.8;          // harvesting efficiency, (0, 1)
  double p_proc = 0.0;       // EHU processing power Pp [W]
  double p_et = 1.0;         // ET average power budget [W]
  double sigma2_sq = 1e-14;  // ET receiver noise [W], > 0
  double sigma1_sq = 1e-14;  // EHU receiver noise [W]; carried, never used
  double g1_mean = 0.0;      // EHU self-interference mean amplitude gain
  double alpha1 = 0.0;       // EHU self-interference gain variance
  double alpha2 = 0.0;       // ET residual self-interference gain variance
};

// Immutable, validated physical parameters of the link.
class LinkParams {
 public:
  // Throws InvalidParameter, or RecycleOutOfRange when eta*(g1^2+alpha1) >= 1.
  explicit LinkParams(const LinkConfig& config);

  const LinkConfig& config() const { return config_; }

  double eta() const { return config_.eta; }
  double p_proc() const { return config_.p_proc; }
  double p_et() const { return config_.p_et; }
  double sigma2_sq() const { return config_.sigma2_sq; }
  double sigma1_sq() const { return config_.sigma1_sq; }
  double g1_mean() const { return config_.g1_mean; }
  double alpha1() const { return config_.alpha1; }
  double alpha2() const { return config_.alpha2; }

  // rho = eta * (g1_mean^2 + alpha1), the fraction of EHU transmit energy
  // harvested back through its own self-interference channel. In [0, 1).
  double recycle() const { return recycle_; }

  // Interference-plus-noise at the ET for an ET symbol of power x2_sq.
  double et_noise(double x2_sq) const { return config_.sigma2_sq + x2_sq * config_.alpha2; }

 private:
  LinkConfig config_;
  double recycle_;
};

struct PathLossParams {
  double carrier_hz = 2.4e9;
  double distance_m = 10.0;
  double exponent = 3.0;
};

// Average fading power E[H^2] = (c / (4 pi f_c))^2 d^-gamma.
double omega_from_path_loss(const PathLossParams& p);

}  // namespace fdwpc
