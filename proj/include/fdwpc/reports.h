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

// Parameter sweeps and simulation runs rendered as CSV.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdwpc/capacity.h"
#include "fdwpc/fading.h"
#include "fdwpc/simulator.h"
#include "fdwpc/units.h"

namespace fdwpc {

enum class SweepVariable { kPetDbm, kSuppressionDb, kRecycle, kPpDbm };

std::string_view to_string(SweepVariable v);
// Throws InvalidParameter for unknown names.
SweepVariable parse_sweep_variable(std::string_view name);

struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  // start, start + step, ... up to stop (inclusive within 1e-9 step).
  // Throws InvalidParameter when step <= 0 or stop < start.
  std::vector<double> points() const;
};

// Physical scenario in CLI units.
struct Scenario {
  double eta = 0.8;
  double pet_dbm = 30.0;
  std::optional<double> pp_dbm = -10.0;  // nullopt: no processing cost
  double g1_mean = 0.0;
  double alpha1 = 0.0;
  double suppression_db = 100.0;  // alpha2 = 10^(-S/10)
  double noise_w = 1e-14;         // sigma1^2 = sigma2^2
  PathLossParams path;
  int fading_states = 2000;
  std::string fading_file;  // overrides the Rayleigh model when set

  LinkParams link_params() const;
  FadingDistribution fading() const;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::kPetDbm;
  Range range;
  Scenario scenario;
};

// Scenario with the swept variable set to `value`. For kRecycle the value is
// g1_mean^2 + alpha1 and alpha1 absorbs the change.
Scenario at_point(const SweepSpec& spec, double value);

struct SweepRow {
  double value = 0.0;
  double capacity_fd = 0.0;
  double rate_hd = 0.0;
  CapacityCase regime = CapacityCase::kZero;
};

// Solves every grid point, in parallel, returning rows in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

// variable,capacity_fd_bits,rate_hd_bits,case_tag
std::string capacity_sweep_csv(const SweepSpec& spec);
// suppression_db,ratio_fd_hd
std::string ratio_sweep_csv(const SweepSpec& spec);
// recycle,capacity_fd_bits,rate_hd_bits,case_tag
std::string recycle_sweep_csv(const SweepSpec& spec);
// pet_dbm,pp_dbm,pp_w,capacity_fd_bits,case_tag; pp_dbm is "off" for nullopt
std::string pcost_compare_csv(const Range& pet_dbm, const std::vector<std::optional<double>>& pp_dbm,
                              const Scenario& scenario);

struct SimulationReport {
  double empirical_rate = 0.0;
  double analytic_capacity = 0.0;
  double outage_fraction = 0.0;
  SimTrace trace;
};

SimulationReport run_simulation(const Scenario& scenario, const SimConfig& cfg);
// empirical_rate,analytic_capacity,outage_fraction
std::string simulation_summary_csv(const SimulationReport& report);

// "%.15g"
std::string format_number(double v);

}  // namespace fdwpc
