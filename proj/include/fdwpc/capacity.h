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

// Ergodic capacity of the full-duplex wirelessly powered link.
//
// Per fading state h the ET sends a constant symbol x2(h) and the EHU a
// Gaussian codeword of power P(h). The capacity is
//
//   max  sum_h p(h) 1/2 log2(1 + h^2 P(h) / (sigma2^2 + x2(h)^2 alpha2))
//   s.t. sum_h p(h) x2(h)^2 <= P_ET                                    (C1)
//        (1 - rho) sum_h p(h) P(h) + Pp <= eta sum_h p(h) h^2 x2(h)^2   (C2)
//
// Case 1 fixes x2 = sqrt(P_ET) and water-fills P. Case 2 adapts x2 per state.
//
// Multiplier normalization (MultiplierSet):
//   lambda2  EHU power is P(h) = [1 / (lambda2 (1 - rho)) - n(h) / h^2]^+ with
//            n(h) = sigma2^2 + x2(h)^2 alpha2, i.e. lambda2 = 1 / ((1-rho) L)
//            for water level L.
//   lambda1  C1 multiplier from stationarity in x2(h)^2 of the per-state
//            Lagrangian density D(h) = 1/2 log2(1 + h^2 P / n)
//            - lambda1 x2^2 - lambda2 ((1 - rho) P - eta h^2 x2^2).
//   mu1      C3 multiplier, mu1 = sum_h p(h) D(h); mu1_per_state holds D(h).
// x0_of_h() inverts D(h) = mu1 for x2 through the principal Lambert W branch.

#pragma once

#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

#include "fdwpc/fading.h"
#include "fdwpc/units.h"

namespace fdwpc {

enum class CapacityCase { kZero, kCase1, kCase2 };
std::string_view to_string(CapacityCase c);

struct PowerAllocation {
  Eigen::ArrayXd x2;     // ET symbol amplitude per state
  Eigen::ArrayXd p_ehu;  // EHU codeword variance per state [W]

  static PowerAllocation zero(Eigen::Index n) {
    return {Eigen::ArrayXd::Zero(n), Eigen::ArrayXd::Zero(n)};
  }
};

using ArrayXld = Eigen::Array<long double, Eigen::Dynamic, 1>;

// Carried in extended precision: optimal states sit at the Lambert W branch
// point, where an argument error e moves x0_of_h() by O(sqrt(e)).
struct MultiplierSet {
  long double lambda1 = 0.0L;
  long double lambda2 = 0.0L;
  long double mu1 = 0.0L;
  ArrayXld mu1_per_state;
};

struct Residuals {
  double c1_slack = 0.0;        // P_ET - sum p x2^2, relative to P_ET
  double c2_residual = 0.0;     // (harvest - consumption) / harvest
  double water_level = 0.0;     // L
  Eigen::ArrayXd stationarity;  // dL/dP per state, relative; 0 where P = 0
  double case_test_lhs = 0.0;   // case-1 test: average rate at sqrt(P_ET)
  double case_test_rhs = 0.0;   // lambda1 P_ET + mu1 + lambda2 (...)
  int iterations = 0;
};

struct CapacityResult {
  CapacityCase regime = CapacityCase::kZero;
  double capacity = 0.0;  // bits per channel use
  PowerAllocation allocation;
  MultiplierSet multipliers;
  Residuals residuals;
};

// Thrown by solve_case2 when the ascent hits its iteration cap.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, PowerAllocation best, double objective)
      : std::runtime_error(what), best_(std::move(best)), objective_(objective) {}
  const PowerAllocation& best() const { return best_; }
  double objective() const { return objective_; }

 private:
  PowerAllocation best_;
  double objective_;
};

// Whether the EHU can sustain any transmission: eta P_ET E[h^2] > Pp. When it
// cannot, every solver returns the all-zero allocation and capacity 0.
bool sustainable(const LinkParams& params, const FadingDistribution& fading);

// Per-state rate sum_h p(h) 1/2 log2(1 + h^2 P(h) / (sigma2^2 + x2(h)^2 alpha2)).
double ergodic_rate(const LinkParams& params, const FadingDistribution& fading,
                    const PowerAllocation& alloc);

/// Water-filling result for a fixed noise floor n(h)/h^2 per state.
struct Waterfill {
  double level = 0.0;    // L; zero when the budget is not positive
  double lambda2 = 0.0;  // 1 / ((1 - rho) L)
  Eigen::ArrayXd power;  // [L - floor]^+
};

/// Distributes an average-power budget over states with the given floors
/// (+inf marks a state that can never be used). lambda2 is located by
/// bracketed bisection in log space, then the level is fixed in closed form
/// on the active set so the budget balance holds to rounding.
Waterfill waterfill(const Eigen::ArrayXd& floors, const Eigen::ArrayXd& probs, double budget,
                    double one_minus_rho);

struct Case1Solution {
  double lambda2 = 0.0;
  double water_level = 0.0;
  PowerAllocation allocation;
};

// ET at constant amplitude sqrt(P_ET); EHU water-fills under C2 with equality.
Case1Solution waterfill_case1(const LinkParams& params, const FadingDistribution& fading);
double capacity_case1(const LinkParams& params, const FadingDistribution& fading,
                      const PowerAllocation& alloc);

// Closed-form ET amplitude from the Lambert-W inversion of D(h) = mu1.
// Returns 0 for h == 0 or when the bracket clamps. Throws DomainError when
// the Lambert W argument is below -1/e, or for alpha2 <= 0 / lambda2 <= 0.
double x0_of_h(const MultiplierSet& mult, double h, const LinkParams& params);
double x0_of_h(const MultiplierSet& mult, double h, const LinkParams& params, long double mu1);

struct Case2Options {
  int max_iterations = 100000;
  // Local ascent from the uniform (case 1) start is done when the state count
  // is at most this; larger problems start from single-state concentrations.
  Eigen::Index dense_start_limit = 256;
  // Number of strongest states tried as single-state starting points.
  Eigen::Index singleton_starts = 64;
};

struct Case2Solution {
  MultiplierSet multipliers;
  PowerAllocation allocation;
  double capacity = 0.0;
  double water_level = 0.0;
  int iterations = 0;
};

/// Case 2: adapts x2(h) per state.
///
/// The value of an ET power profile u(h) = x2(h)^2 is computed exactly by
/// water-filling P. Over u the problem is not concave (the Lagrangian is
/// convex in each u(h)), so the search is multi-start: the uniform profile and
/// every single-state concentration among the strongest states, each followed
/// by pairwise budget transfers chosen by the envelope gradient and sized by a
/// grid-plus-golden line search. Stops when no transfer improves the objective
/// by more than 1e-12 relative.
Case2Solution solve_case2(const LinkParams& params, const FadingDistribution& fading,
                          const Case2Options& options = {});

// Runs both cases and keeps the larger objective; ties go to case 1.
CapacityResult solve(const LinkParams& params, const FadingDistribution& fading);

// Single deterministic state: P = [(eta P_ET h^2 - Pp) / (1 - rho)]^+.
double capacity_no_fading(const LinkParams& params, double h);

struct RayleighClosedForm {
  double lambda2 = 0.0;
  double capacity = 0.0;
};

/// Case-1 capacity for continuous Rayleigh fading with H^2 ~ Exp(omega).
///
/// With s = sigma2^2 + P_ET alpha2, l = lambda2 (1 - rho) and t = l s / omega,
/// l solves (1 - rho) (e^-t / l - (s / omega) E1(t)) + Pp = eta P_ET omega and
/// C = E1(t) / (2 ln 2). Throws DomainError when eta P_ET omega <= Pp.
RayleighClosedForm rayleigh_capacity_closed_form(const LinkParams& params, double omega);

struct OracleGrid {
  int max_grid_points = 20000;  // coarse simplex grid size cap
  int steps_per_level = 8;      // transfer multiples tried per level
  int refinements = 2;          // each divides the step by steps_per_level
};

struct OracleResult {
  double capacity = 0.0;  // best objective found (a lower bound)
  PowerAllocation allocation;
  long evaluations = 0;
};

/// Exhaustive reference for small problems (at most 8 states). Enumerates
/// a simplex grid of ET power fractions (plus an unused-budget bucket), then
/// refines twice with pairwise transfers. Uses its own sort-based
/// water-filling so it shares no numerical path with solve().
OracleResult brute_force_oracle(const LinkParams& params, const FadingDistribution& fading,
                                const OracleGrid& grid = {});

}  // namespace fdwpc
