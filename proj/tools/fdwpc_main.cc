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

// fdwpc: capacity sweeps and link simulation for the full-duplex wirelessly
// powered link. Every subcommand writes CSV to stdout or --out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdwpc/capacity.h"
#include "fdwpc/errors.h"
#include "fdwpc/reports.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  fdwpc::Scenario scenario;
  std::string pp = "-10";
  std::string out;
};

std::optional<double> parse_pp(const std::string& text) {
  if (text == "off") return std::nullopt;
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw fdwpc::InvalidParameter("bad processing cost '" + text + "'");
  return v;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  auto& s = o.scenario;
  cmd->add_option("--distance-m", s.path.distance_m, "ET-EHU distance [m]")->capture_default_str();
  cmd->add_option("--pet-dbm", s.pet_dbm, "ET average power [dBm]")->capture_default_str();
  cmd->add_option("--pp-dbm", o.pp, "EHU processing cost [dBm] or 'off'")->capture_default_str();
  cmd->add_option("--eta", s.eta, "harvesting efficiency")->capture_default_str();
  cmd->add_option("--alpha1", s.alpha1, "EHU self-interference variance")->capture_default_str();
  cmd->add_option("--g1-mean", s.g1_mean, "EHU self-interference mean")->capture_default_str();
  cmd->add_option("--suppression-db", s.suppression_db, "ET self-interference suppression [dB]")
      ->capture_default_str();
  cmd->add_option("--fading-states", s.fading_states, "Rayleigh quantization states")
      ->capture_default_str();
  cmd->add_option("--fading-file", s.fading_file, "two-column 'h p' pmf file");
  cmd->add_option("--noise-w", s.noise_w, "receiver noise power [W]")->capture_default_str();
  cmd->add_option("--carrier-hz", s.path.carrier_hz, "carrier frequency [Hz]")
      ->capture_default_str();
  cmd->add_option("--path-loss-exponent", s.path.exponent, "path-loss exponent")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "output CSV path (default stdout)");
}

void add_range(CLI::App* cmd, fdwpc::Range& r, double start, double stop, double step) {
  r = {start, stop, step};
  cmd->add_option("--start", r.start, "first grid value")->capture_default_str();
  cmd->add_option("--stop", r.stop, "last grid value")->capture_default_str();
  cmd->add_option("--step", r.step, "grid step")->capture_default_str();
}

void emit(const std::string& csv, const std::string& path) {
  if (path.empty()) {
    std::cout << csv;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw fdwpc::InvalidParameter("cannot write " + path);
  f << csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ergodic capacity sweeps and link simulation for a full-duplex wirelessly powered link"};
  app.require_subcommand(1);

  CommonOptions common;
  fdwpc::SweepSpec sweep;
  std::string variable = "pet_dbm";
  std::vector<std::string> pp_levels = {"off", "-10", "10"};
  fdwpc::Range cap_range, ratio_range, recycle_range, pcost_range;
  fdwpc::SimConfig sim;
  std::string trace_out;

  auto* cap = app.add_subcommand("capacity-sweep", "FD capacity and HD rate over a grid");
  add_common(cap, common);
  add_range(cap, cap_range, 0.0, 35.0, 5.0);
  cap->add_option("--variable", variable, "pet_dbm | suppression_db | recycle | pp_dbm")
      ->capture_default_str();

  auto* ratio = app.add_subcommand("ratio-sweep", "C_FD / R_HD over ET suppression [dB]");
  add_common(ratio, common);
  add_range(ratio, ratio_range, 30.0, 130.0, 10.0);

  auto* recycle = app.add_subcommand("recycle-sweep", "capacity over g1_mean^2 + alpha1");
  add_common(recycle, common);
  add_range(recycle, recycle_range, 0.0, 1.0, 0.1);

  auto* pcost = app.add_subcommand("pcost-compare", "capacity over P_ET for several processing costs");
  add_common(pcost, common);
  add_range(pcost, pcost_range, 0.0, 35.0, 5.0);
  pcost->add_option("--pp-levels", pp_levels, "processing costs [dBm] or 'off'")
      ->delimiter(',')
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "slot-level simulation of the solved allocation");
  add_common(simulate, common);
  simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--k", sim.k, "channel uses per slot")->capture_default_str();
  simulate->add_option("--slots", sim.n_slots, "number of slots")->capture_default_str();
  simulate->add_option("--trace-out", trace_out, "per-slot trace CSV path");

  // Accepted everywhere for uniform command lines; sweeps are deterministic.
  std::uint64_t unused_seed = 0;
  for (auto* c : {cap, ratio, recycle, pcost}) {
    c->add_option("--seed", unused_seed, "ignored by deterministic sweeps");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    common.scenario.pp_dbm = parse_pp(common.pp);
    sweep.scenario = common.scenario;
    std::string csv;
    if (cap->parsed()) {
      sweep.variable = fdwpc::parse_sweep_variable(variable);
      sweep.range = cap_range;
      csv = fdwpc::capacity_sweep_csv(sweep);
    } else if (ratio->parsed()) {
      sweep.variable = fdwpc::SweepVariable::kSuppressionDb;
      sweep.range = ratio_range;
      csv = fdwpc::ratio_sweep_csv(sweep);
    } else if (recycle->parsed()) {
      sweep.variable = fdwpc::SweepVariable::kRecycle;
      sweep.range = recycle_range;
      csv = fdwpc::recycle_sweep_csv(sweep);
    } else if (pcost->parsed()) {
      std::vector<std::optional<double>> levels;
      for (const auto& p : pp_levels) levels.push_back(parse_pp(p));
      csv = fdwpc::pcost_compare_csv(pcost_range, levels, common.scenario);
    } else {
      sim.record_trace = !trace_out.empty();
      const auto report = fdwpc::run_simulation(common.scenario, sim);
      if (!trace_out.empty()) {
        std::ofstream f(trace_out, std::ios::binary);
        if (!f) throw fdwpc::InvalidParameter("cannot write " + trace_out);
        fdwpc::write_trace_csv(f, report.trace);
      }
      csv = fdwpc::simulation_summary_csv(report);
    }
    emit(csv, common.out);
  } catch (const fdwpc::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fdwpc::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
