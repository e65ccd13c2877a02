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

#include "fdwpc/reports.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include "fdwpc/errors.h"
#include "fdwpc/hd_benchmark.h"

namespace fdwpc {
namespace {

// Runs fn(i) for i in [0, n) on a small pool; rethrows the lowest-index failure.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string header_and_rows(const std::string& header,
                            const std::vector<std::vector<std::string>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kPetDbm:
      return "pet_dbm";
    case SweepVariable::kSuppressionDb:
      return "suppression_db";
    case SweepVariable::kRecycle:
      return "recycle";
    case SweepVariable::kPpDbm:
      return "pp_dbm";
  }
  return "unknown";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  for (auto v : {SweepVariable::kPetDbm, SweepVariable::kSuppressionDb, SweepVariable::kRecycle,
                 SweepVariable::kPpDbm}) {
    if (to_string(v) == name) return v;
  }
  throw InvalidParameter("unknown sweep variable '" + std::string(name) + "'");
}

std::vector<double> Range::points() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("range step must be > 0");
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw InvalidParameter("range is empty");
  }
  std::vector<double> out;
  const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 1000000) throw InvalidParameter("range has too many points");
  for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

LinkParams Scenario::link_params() const {
  LinkConfig c;
  c.eta = eta;
  c.p_et = dbm_to_watt(pet_dbm);
  c.p_proc = pp_dbm ? dbm_to_watt(*pp_dbm) : 0.0;
  c.sigma1_sq = noise_w;
  c.sigma2_sq = noise_w;
  c.g1_mean = g1_mean;
  c.alpha1 = alpha1;
  c.alpha2 = db_to_linear(-suppression_db);
  return LinkParams(c);
}

FadingDistribution Scenario::fading() const {
  if (!fading_file.empty()) return load_fading(fading_file);
  return rayleigh(omega_from_path_loss(path), fading_states);
}

Scenario at_point(const SweepSpec& spec, double value) {
  Scenario s = spec.scenario;
  switch (spec.variable) {
    case SweepVariable::kPetDbm:
      s.pet_dbm = value;
      break;
    case SweepVariable::kSuppressionDb:
      s.suppression_db = value;
      break;
    case SweepVariable::kRecycle:
      s.alpha1 = value - s.g1_mean * s.g1_mean;
      if (s.alpha1 < 0.0) throw InvalidParameter("recycle value below g1_mean^2");
      break;
    case SweepVariable::kPpDbm:
      s.pp_dbm = value;
      break;
  }
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  const std::vector<double> grid = spec.range.points();
  // Validate every point before spending time on any solve.
  for (double v : grid) (void)at_point(spec, v).link_params();
  const FadingDistribution fading = spec.scenario.fading();

  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const LinkParams params = at_point(spec, grid[i]).link_params();
    const CapacityResult fd = solve(params, fading);
    rows[i] = {grid[i], fd.capacity, solve_hd(params, fading).rate, fd.regime};
  });
  return rows;
}

std::string capacity_sweep_csv(const SweepSpec& spec) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : run_sweep(spec)) {
    out.push_back({format_number(r.value), format_number(r.capacity_fd), format_number(r.rate_hd),
                   std::string(to_string(r.regime))});
  }
  return header_and_rows(std::string(to_string(spec.variable)) +
                             ",capacity_fd_bits,rate_hd_bits,case_tag",
                         out);
}

std::string ratio_sweep_csv(const SweepSpec& spec) {
  if (spec.variable != SweepVariable::kSuppressionDb) {
    throw InvalidParameter("ratio sweep runs over suppression_db");
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& r : run_sweep(spec)) {
    const double ratio = r.rate_hd > 0.0 ? r.capacity_fd / r.rate_hd : std::nan("");
    out.push_back({format_number(r.value), format_number(ratio)});
  }
  return header_and_rows("suppression_db,ratio_fd_hd", out);
}

std::string recycle_sweep_csv(const SweepSpec& spec) {
  if (spec.variable != SweepVariable::kRecycle) {
    throw InvalidParameter("recycle sweep runs over recycle");
  }
  return capacity_sweep_csv(spec);
}

std::string pcost_compare_csv(const Range& pet_dbm, const std::vector<std::optional<double>>& pp_dbm,
                              const Scenario& scenario) {
  if (pp_dbm.empty()) throw InvalidParameter("need at least one processing cost");
  const std::vector<double> grid = pet_dbm.points();
  std::vector<Scenario> points;
  for (double pet : grid) {
    for (const auto& pp : pp_dbm) {
      Scenario s = scenario;
      s.pet_dbm = pet;
      s.pp_dbm = pp;
      (void)s.link_params();
      points.push_back(s);
    }
  }
  const FadingDistribution fading = scenario.fading();
  std::vector<CapacityResult> results(points.size());
  parallel_for(points.size(), 0, [&](std::size_t i) {
    results[i] = solve(points[i].link_params(), fading);
  });

  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& s = points[i];
    out.push_back({format_number(s.pet_dbm), s.pp_dbm ? format_number(*s.pp_dbm) : "off",
                   format_number(s.link_params().p_proc()), format_number(results[i].capacity),
                   std::string(to_string(results[i].regime))});
  }
  return header_and_rows("pet_dbm,pp_dbm,pp_w,capacity_fd_bits,case_tag", out);
}

SimulationReport run_simulation(const Scenario& scenario, const SimConfig& cfg) {
  const LinkParams params = scenario.link_params();
  const FadingDistribution fading = scenario.fading();
  const CapacityResult fd = solve(params, fading);
  SimulationReport report;
  report.trace = simulate(params, fading, fd.allocation, cfg);
  report.empirical_rate = report.trace.empirical_rate;
  report.analytic_capacity = fd.capacity;
  report.outage_fraction = report.trace.outage_fraction;
  return report;
}

std::string simulation_summary_csv(const SimulationReport& report) {
  return header_and_rows("empirical_rate,analytic_capacity,outage_fraction",
                         {{format_number(report.empirical_rate),
                           format_number(report.analytic_capacity),
                           format_number(report.outage_fraction)}});
}

}  // namespace fdwpc
