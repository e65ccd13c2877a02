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

// Slot-level simulation of the harvest-then-transmit scheme with a finite
// battery state carried across blocks.

#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "fdwpc/capacity.h"
#include "fdwpc/fading.h"
#include "fdwpc/units.h"

namespace fdwpc {

struct SimConfig {
  int k = 200;             // channel uses per slot
  long n_slots = 20000;
  std::uint64_t seed = 1;
  bool record_trace = true;
};

struct BatteryState {
  double level = 0.0;  // J (per-use normalized)
};

struct SlotRecord {
  long slot = 0;
  double h = 0.0;
  bool transmitted = false;
  double slot_rate_bits = 0.0;
  double battery_j = 0.0;  // level at slot end
};

struct SimTrace {
  std::vector<SlotRecord> slots;  // empty unless record_trace
  double empirical_rate = 0.0;    // sum of transmitted R(h) / n_slots
  double outage_fraction = 0.0;   // slots with p_ehu > 0 that were gated off
  long transmit_slots = 0;
  long outage_slots = 0;
  double min_level = 0.0;
  double initial_level = 0.0;
  double final_level = 0.0;
  double total_in = 0.0;
  double total_out = 0.0;
  double mean_harvest = 0.0;  // per channel use
  double mean_consumed = 0.0;

  // |initial + in - out - final| relative to the energy throughput.
  double conservation_error() const;
};

// eta (h x2 + g1_mean x1 + g1 x1)^2 with g1 the sampled zero-mean SI gain.
double harvest_per_use(double h, double x2, double x1, double g1, const LinkParams& params);

// Draws min(level, demand) from the battery, then stores e_in.
std::pair<BatteryState, double> battery_step(BatteryState b, double e_in, double demand);

SimTrace simulate(const LinkParams& params, const FadingDistribution& fading,
                  const PowerAllocation& alloc, const SimConfig& cfg);

// Columns slot,h,transmitted,slot_rate_bits,battery_j.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

}  // namespace fdwpc
