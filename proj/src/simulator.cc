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

#include "fdwpc/simulator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "fdwpc/errors.h"

namespace fdwpc {

double SimTrace::conservation_error() const {
  const double scale = std::max({std::abs(initial_level) + total_in, total_out, 1e-300});
  return std::abs(initial_level + total_in - total_out - final_level) / scale;
}

double harvest_per_use(double h, double x2, double x1, double g1, const LinkParams& params) {
  const double a = h * x2 + params.g1_mean() * x1 + g1 * x1;
  return params.eta() * a * a;
}

std::pair<BatteryState, double> battery_step(BatteryState b, double e_in, double demand) {
  const double e_out = std::min(b.level, demand);
  b.level = b.level + e_in - e_out;
  return {b, e_out};
}

SimTrace simulate(const LinkParams& params, const FadingDistribution& fading,
                  const PowerAllocation& alloc, const SimConfig& cfg) {
  if (cfg.k < 1 || cfg.n_slots < 1) throw InvalidParameter("simulate: k and n_slots must be >= 1");
  if (alloc.x2.size() != fading.size() || alloc.p_ehu.size() != fading.size()) {
    throw InvalidParameter("simulate: allocation does not match the fading states");
  }
  const auto& h = fading.gains();
  std::vector<double> cdf(static_cast<std::size_t>(fading.size()));
  std::partial_sum(fading.probs().begin(), fading.probs().end(), cdf.begin());
  const auto last = static_cast<Eigen::Index>(cdf.size()) - 1;

  // Slot rate R(h) per state.
  Eigen::ArrayXd rate(fading.size());
  for (Eigen::Index j = 0; j < fading.size(); ++j) {
    const double noise = params.et_noise(alloc.x2(j) * alloc.x2(j));
    rate(j) = 0.5 * std::log2(1.0 + h(j) * h(j) * alloc.p_ehu(j) / noise);
  }

  std::mt19937_64 engine(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd_g1 = std::sqrt(params.alpha1());

  SimTrace trace;
  if (cfg.record_trace) trace.slots.reserve(static_cast<std::size_t>(cfg.n_slots));
  BatteryState battery;
  trace.initial_level = battery.level;
  trace.min_level = battery.level;
  long double total_in = 0.0L;
  long double total_out = 0.0L;
  long double rate_sum = 0.0L;

  for (long s = 0; s < cfg.n_slots; ++s) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const Eigen::Index j =
        std::min(static_cast<Eigen::Index>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()),
                 last);
    const double p = alloc.p_ehu(j);
    const double x2 = alloc.x2(j);
    const bool wants = p > 0.0;
    const bool transmit = wants && battery.level >= cfg.k * (params.p_proc() + p);
    const double sd_x1 = transmit ? std::sqrt(p) : 0.0;

    for (int use = 0; use < cfg.k; ++use) {
      double x1 = 0.0;
      double g1 = 0.0;
      if (transmit) {
        x1 = sd_x1 * normal(engine);
        g1 = sd_g1 * normal(engine);
      }
      const double e_in = harvest_per_use(h(j), x2, x1, g1, params);
      const auto [next, e_out] = battery_step(battery, e_in, x1 * x1 + params.p_proc());
      battery = next;
      total_in += e_in;
      total_out += e_out;
      trace.min_level = std::min(trace.min_level, battery.level);
    }

    if (transmit) {
      ++trace.transmit_slots;
      rate_sum += rate(j);
    } else if (wants) {
      ++trace.outage_slots;
    }
    if (cfg.record_trace) {
      trace.slots.push_back({s, h(j), transmit, transmit ? rate(j) : 0.0, battery.level});
    }
  }

  const double n = static_cast<double>(cfg.n_slots);
  trace.final_level = battery.level;
  trace.total_in = static_cast<double>(total_in);
  trace.total_out = static_cast<double>(total_out);
  trace.empirical_rate = static_cast<double>(rate_sum / n);
  trace.outage_fraction = static_cast<double>(trace.outage_slots) / n;
  trace.mean_harvest = trace.total_in / (n * cfg.k);
  trace.mean_consumed = trace.total_out / (n * cfg.k);
  return trace;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "slot,h,transmitted,slot_rate_bits,battery_j\n";
  char buf[160];
  for (const auto& r : trace.slots) {
    std::snprintf(buf, sizeof(buf), "%ld,%.15g,%d,%.15g,%.15g\n", r.slot, r.h,
                  r.transmitted ? 1 : 0, r.slot_rate_bits, r.battery_j);
    out << buf;
  }
}

}  // namespace fdwpc
