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

#include "fdwpc/capacity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "fdwpc/errors.h"
#include "fdwpc/specfun.h"

namespace fdwpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// 1/2 log2(x) = kHalfLog2 * ln(x)
constexpr double kHalfLog2 = 0.5 / std::numbers::ln2;
constexpr double kLambdaFloor = 1e-30;

Eigen::ArrayXd noise_floors(const LinkParams& params, const Eigen::ArrayXd& gains,
                            const Eigen::ArrayXd& x2_sq) {
  Eigen::ArrayXd floors(gains.size());
  for (Eigen::Index j = 0; j < gains.size(); ++j) {
    const double h2 = gains(j) * gains(j);
    floors(j) = h2 > 0.0 ? params.et_noise(x2_sq(j)) / h2 : kInf;
  }
  return floors;
}

}  // namespace

std::string_view to_string(CapacityCase c) {
  switch (c) {
    case CapacityCase::kZero:
      return "zero";
    case CapacityCase::kCase1:
      return "case1";
    case CapacityCase::kCase2:
      return "case2";
  }
  return "unknown";
}

bool sustainable(const LinkParams& params, const FadingDistribution& fading) {
  return params.eta() * params.p_et() * fading.second_moment() > params.p_proc();
}

double ergodic_rate(const LinkParams& params, const FadingDistribution& fading,
                    const PowerAllocation& alloc) {
  const auto& h = fading.gains();
  double rate = 0.0;
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    if (alloc.p_ehu(j) <= 0.0) continue;
    const double snr =
        h(j) * h(j) * alloc.p_ehu(j) / params.et_noise(alloc.x2(j) * alloc.x2(j));
    rate += fading.probs()(j) * kHalfLog2 * std::log1p(snr);
  }
  return rate;
}

Waterfill waterfill(const Eigen::ArrayXd& floors, const Eigen::ArrayXd& probs, double budget,
                    double one_minus_rho) {
  Waterfill out;
  out.power = Eigen::ArrayXd::Zero(floors.size());
  if (!(budget > 0.0) || !(floors < kInf).any()) return out;

  const auto excess = [&](double lambda2) {
    const double level = 1.0 / (lambda2 * one_minus_rho);
    return (probs * (level - floors).max(0.0)).sum() - budget;
  };

  // excess() is decreasing in lambda2; bracket the sign change.
  double lo = kLambdaFloor;
  while (excess(lo) <= 0.0 && lo > 1e-290) lo *= 1e-10;
  double hi = 1.0;
  for (int i = 0; i < 700 && excess(hi) > 0.0; ++i) hi *= 10.0;
  for (int i = 0; i < 400 && hi / lo - 1.0 > 1e-15; ++i) {
    const double mid = std::sqrt(lo * hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }

  // Fix the level on the active set, measured from the lowest floor so the
  // powers do not cancel against floors much larger than themselves.
  const double fmin = floors.minCoeff();
  const Eigen::ArrayXd shifted = floors - fmin;
  double delta = 1.0 / (lo * one_minus_rho) - fmin;
  for (Eigen::Index pass = 0; pass <= floors.size(); ++pass) {
    const auto active = (shifted < delta).cast<double>();
    double mass = (probs * active).sum();
    double offset = (probs * active * shifted.min(delta)).sum();
    if (mass <= 0.0) {
      // Only the lowest floors can be active.
      const auto lowest = (shifted == 0.0).cast<double>();
      mass = (probs * lowest).sum();
      offset = 0.0;
    }
    const double next = (budget + offset) / mass;
    const bool stable = ((shifted < next).cast<double>() == active).all();
    delta = next;
    if (stable) break;
  }
  out.level = fmin + delta;
  out.lambda2 = 1.0 / (out.level * one_minus_rho);
  out.power = (delta - shifted).max(0.0);
  return out;
}

Case1Solution waterfill_case1(const LinkParams& params, const FadingDistribution& fading) {
  const Eigen::Index n = fading.size();
  Case1Solution out;
  out.allocation = PowerAllocation::zero(n);
  if (!sustainable(params, fading)) return out;

  const double omr = 1.0 - params.recycle();
  const double budget =
      (params.eta() * params.p_et() * fading.second_moment() - params.p_proc()) / omr;
  const Eigen::ArrayXd floors =
      noise_floors(params, fading.gains(), Eigen::ArrayXd::Constant(n, params.p_et()));
  const Waterfill wf = waterfill(floors, fading.probs(), budget, omr);
  out.lambda2 = wf.lambda2;
  out.water_level = wf.level;
  out.allocation.x2 = Eigen::ArrayXd::Constant(n, std::sqrt(params.p_et()));
  out.allocation.p_ehu = wf.power;
  return out;
}

double capacity_case1(const LinkParams& params, const FadingDistribution& fading,
                      const PowerAllocation& alloc) {
  const double noise = params.et_noise(params.p_et());
  const auto& h = fading.gains();
  return (fading.probs() * kHalfLog2 * (h.square() * alloc.p_ehu / noise).log1p()).sum();
}

double x0_of_h(const MultiplierSet& mult, double h, const LinkParams& params) {
  return x0_of_h(mult, h, params, mult.mu1);
}

double x0_of_h(const MultiplierSet& mult, double h, const LinkParams& params, long double mu1) {
  if (h == 0.0) return 0.0;
  if (!(params.alpha2() > 0.0)) throw DomainError("x0_of_h: needs alpha2 > 0");
  if (!(mult.lambda2 > 0.0)) throw DomainError("x0_of_h: needs lambda2 > 0");
  using R = long double;
  const R a2 = params.alpha2();
  const R s2 = params.sigma2_sq();
  const R l1 = mult.lambda1;
  const R l2 = mult.lambda2;
  const R eta = params.eta();
  const R omr = R(1) - R(params.recycle());
  const R two_ln2 = R(2) * std::numbers::ln2_v<R>;
  const R h2 = R(h) * R(h);

  const R numer = two_ln2 * ((l1 - l2 * eta * h2) * h2 / (l2 * omr * a2) - R(1));
  const R expo = two_ln2 * (R(1) + (l2 * eta * h2 - l1) * s2 / a2 + mu1);
  const R arg = numer * std::exp(-expo);
  if (arg < -std::exp(R(-1)) - R(kBranchPointSlack)) {
    throw DomainError("x0_of_h: Lambert W argument below -1/e");
  }
  const R denom = two_ln2 * ((l1 - l2 * eta * h2) * h2 - l2 * omr * a2);
  const R inner = h2 * lambert_w0(arg) / denom - s2 / a2;
  return inner > R(0) ? static_cast<double>(std::sqrt(inner)) : 0.0;
}

namespace {

// ---------------------------------------------------------------------------
// Case-2 search machinery.

// ET power profile u(h) = x2(h)^2 stored densely, with the list of entries
// that differ from the evaluator's base value.
struct Profile {
  Eigen::ArrayXd u;
  std::vector<Eigen::Index> touched;
  std::vector<char> is_touched;
  double slack = 0.0;  // P_ET - sum p u

  void set(Eigen::Index j, double value) {
    u(j) = value;
    if (!is_touched[static_cast<std::size_t>(j)]) {
      is_touched[static_cast<std::size_t>(j)] = 1;
      touched.push_back(j);
    }
  }
};

struct ProfileValue {
  double value = 0.0;
  double level = 0.0;
  double budget = 0.0;
};

// Evaluates the water-filled rate of a profile that equals `base_u` on all
// but a few states, in O(log n + touched) per bisection step via prefix sums
// over the base floors.
class ProfileEvaluator {
 public:
  ProfileEvaluator(const LinkParams& params, const FadingDistribution& fading, double base_u)
      : params_(params), p_(fading.probs()), h2_(fading.gains().square()), base_u_(base_u) {
    const Eigen::Index n = p_.size();
    omr_ = 1.0 - params.recycle();
    h2_total_ = (p_ * h2_).sum();
    base_floor_.resize(n);
    std::vector<Eigen::Index> order;
    for (Eigen::Index j = 0; j < n; ++j) {
      base_floor_(j) = floor_of(j, base_u);
      if (h2_(j) > 0.0) order.push_back(j);
    }
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return base_floor_(a) < base_floor_(b); });
    order_ = order;
    sorted_.resize(order.size());
    pre_p_.assign(order.size() + 1, 0.0);
    pre_pf_.assign(order.size() + 1, 0.0);
    pre_plog_.assign(order.size() + 1, 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Eigen::Index j = order[i];
      sorted_[i] = base_floor_(j);
      pre_p_[i + 1] = pre_p_[i] + p_(j);
      pre_pf_[i + 1] = pre_pf_[i] + p_(j) * base_floor_(j);
      pre_plog_[i + 1] = pre_plog_[i] + p_(j) * std::log(base_floor_(j));
    }
  }

  Profile make_profile() const {
    const Eigen::Index n = p_.size();
    Profile pr;
    pr.u = Eigen::ArrayXd::Constant(n, base_u_);
    pr.is_touched.assign(static_cast<std::size_t>(n), 0);
    pr.slack = params_.p_et() - base_u_ * p_.sum();
    return pr;
  }

  double floor_of(Eigen::Index j, double u) const {
    return h2_(j) > 0.0 ? params_.et_noise(u) / h2_(j) : kInf;
  }

  double budget_of(const Profile& pr) const {
    double harvest = base_u_ * h2_total_;
    for (Eigen::Index j : pr.touched) harvest += p_(j) * h2_(j) * (pr.u(j) - base_u_);
    return (params_.eta() * harvest - params_.p_proc()) / omr_;
  }

  ProfileValue evaluate(const Profile& pr) const {
    ProfileValue out;
    out.budget = budget_of(pr);
    if (!(out.budget > 0.0)) return out;

    // Lowest current floor gives a one-shot upper bracket for the level.
    double fmin = kInf;
    double pmin = 0.0;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const Eigen::Index j = order_[i];
      if (!pr.is_touched[static_cast<std::size_t>(j)]) {
        fmin = sorted_[i];
        pmin = p_(j);
        break;
      }
    }
    for (Eigen::Index j : pr.touched) {
      const double f = floor_of(j, pr.u(j));
      if (f < fmin) {
        fmin = f;
        pmin = p_(j);
      }
    }
    if (!(fmin < kInf)) return out;

    double lo = 0.0;
    double hi = fmin + out.budget / pmin;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (filled(pr, mid) < out.budget ? lo : hi) = mid;
    }

    double level = hi;
    Sums s;
    for (int pass = 0; pass < 8; ++pass) {
      s = active_sums(pr, level);
      const double next = (out.budget + s.pf) / s.p;
      const Sums check = active_sums(pr, next);
      level = next;
      if (check.p == s.p && check.pf == s.pf) break;
    }
    out.level = level;
    out.value = kHalfLog2 * (s.p * std::log(level) - s.plog);
    return out;
  }

  // Gain in objective per unit of budget p(j) u(j) moved into state j.
  Eigen::ArrayXd gradient(const Profile& pr, const ProfileValue& v) const {
    const Eigen::Index n = p_.size();
    Eigen::ArrayXd g = Eigen::ArrayXd::Zero(n);
    if (!(v.level > 0.0)) return params_.eta() * h2_;
    const double energy_value = kHalfLog2 / v.level;
    for (Eigen::Index j = 0; j < n; ++j) {
      g(j) = energy_value * params_.eta() * h2_(j) / omr_;
      const double f = floor_of(j, pr.u(j));
      if (f < v.level) {
        g(j) += kHalfLog2 * (params_.alpha2() / h2_(j)) * (1.0 / v.level - 1.0 / f);
      }
    }
    return g;
  }

  const Eigen::ArrayXd& probs() const { return p_; }

 private:
  struct Sums {
    double p = 0.0;
    double pf = 0.0;
    double plog = 0.0;
  };

  std::size_t base_below(double level) const {
    return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), level) -
                                    sorted_.begin());
  }

  // Sum of p (level - floor)^+ over all states.
  double filled(const Profile& pr, double level) const {
    const std::size_t k = base_below(level);
    double s = pre_p_[k] * level - pre_pf_[k];
    for (Eigen::Index j : pr.touched) {
      const double fb = base_floor_(j);
      if (fb < level) s -= p_(j) * (level - fb);
      const double f = floor_of(j, pr.u(j));
      if (f < level) s += p_(j) * (level - f);
    }
    return s;
  }

  Sums active_sums(const Profile& pr, double level) const {
    const std::size_t k = base_below(level);
    Sums s{pre_p_[k], pre_pf_[k], pre_plog_[k]};
    for (Eigen::Index j : pr.touched) {
      const double fb = base_floor_(j);
      if (fb < level) {
        s.p -= p_(j);
        s.pf -= p_(j) * fb;
        s.plog -= p_(j) * std::log(fb);
      }
      const double f = floor_of(j, pr.u(j));
      if (f < level) {
        s.p += p_(j);
        s.pf += p_(j) * f;
        s.plog += p_(j) * std::log(f);
      }
    }
    return s;
  }

  const LinkParams& params_;
  Eigen::ArrayXd p_;
  Eigen::ArrayXd h2_;
  double base_u_;
  double omr_ = 1.0;
  double h2_total_ = 0.0;
  Eigen::ArrayXd base_floor_;
  std::vector<Eigen::Index> order_;
  std::vector<double> sorted_;
  std::vector<double> pre_p_;
  std::vector<double> pre_pf_;
  std::vector<double> pre_plog_;
};

constexpr Eigen::Index kSlack = -1;
constexpr double kImprovement = 1e-12;

// Moves `amount` of budget (in units of p u) from donor to receiver.
void transfer(Profile& pr, const Eigen::ArrayXd& p, Eigen::Index donor, Eigen::Index receiver,
              double amount) {
  if (donor == kSlack) {
    pr.slack -= amount;
  } else {
    pr.set(donor, std::max(0.0, pr.u(donor) - amount / p(donor)));
  }
  if (receiver == kSlack) {
    pr.slack += amount;
  } else {
    pr.set(receiver, pr.u(receiver) + amount / p(receiver));
  }
}

struct AscentOutcome {
  Profile profile;
  ProfileValue value;
  int iterations = 0;
  bool converged = true;
};

AscentOutcome ascend(const ProfileEvaluator& ev, Profile start, int max_iterations,
                     double p_et) {
  const Eigen::ArrayXd& p = ev.probs();
  const Eigen::Index n = p.size();
  AscentOutcome out{std::move(start), {}, 0, true};
  out.value = ev.evaluate(out.profile);
  const double tiny = 1e-14 * p_et;

  for (; out.iterations < max_iterations; ++out.iterations) {
    const Eigen::ArrayXd g = ev.gradient(out.profile, out.value);

    std::vector<std::pair<double, Eigen::Index>> donors;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (p(j) * out.profile.u(j) > tiny) donors.emplace_back(g(j), j);
    }
    if (out.profile.slack > tiny) donors.emplace_back(0.0, kSlack);
    std::vector<std::pair<double, Eigen::Index>> receivers;
    receivers.reserve(static_cast<std::size_t>(n) + 1);
    for (Eigen::Index j = 0; j < n; ++j) receivers.emplace_back(g(j), j);
    receivers.emplace_back(0.0, kSlack);

    const std::size_t kd = std::min<std::size_t>(4, donors.size());
    const std::size_t kr = std::min<std::size_t>(4, receivers.size());
    std::partial_sort(donors.begin(), donors.begin() + static_cast<std::ptrdiff_t>(kd), donors.end());
    std::partial_sort(receivers.begin(), receivers.begin() + static_cast<std::ptrdiff_t>(kr),
                      receivers.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (std::size_t a = 0; a < kd; ++a) {
      for (std::size_t b = 0; b < kr; ++b) {
        if (donors[a].second == receivers[b].second) continue;
        if (receivers[b].first > donors[a].first) {
          pairs.emplace_back(donors[a].second, receivers[b].second);
        }
      }
    }

    bool improved = false;
    for (const auto& [d, r] : pairs) {
      const double cap = d == kSlack ? out.profile.slack : p(d) * out.profile.u(d);
      const auto phi = [&](double t) {
        Profile trial = out.profile;
        transfer(trial, p, d, r, t);
        return ev.evaluate(trial).value;
      };
      constexpr int kGrid = 16;
      double best_t = 0.0;
      double best_v = out.value.value;
      int best_i = 0;
      for (int i = 1; i <= kGrid; ++i) {
        const double t = cap * i / kGrid;
        const double v = phi(t);
        if (v > best_v) {
          best_v = v;
          best_t = t;
          best_i = i;
        }
      }
      // Golden section around the best grid point.
      double a = cap * std::max(0, best_i - 1) / kGrid;
      double b = cap * std::min(kGrid, best_i + 1) / kGrid;
      const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = b - invphi * (b - a);
      double x2 = a + invphi * (b - a);
      double f1 = phi(x1);
      double f2 = phi(x2);
      for (int it = 0; it < 60 && b - a > 1e-13 * cap; ++it) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + invphi * (b - a);
          f2 = phi(x2);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - invphi * (b - a);
          f1 = phi(x1);
        }
      }
      if (f1 > best_v) {
        best_v = f1;
        best_t = x1;
      }
      if (f2 > best_v) {
        best_v = f2;
        best_t = x2;
      }
      if (best_t > 0.0 && best_v > out.value.value * (1.0 + kImprovement)) {
        transfer(out.profile, p, d, r, best_t);
        out.value = ev.evaluate(out.profile);
        improved = true;
        break;
      }
    }
    if (!improved) return out;
  }
  out.converged = false;
  return out;
}

Eigen::Index dominant_state(const Eigen::ArrayXd& share) {
  Eigen::Index j = 0;
  share.maxCoeff(&j);
  return j;
}

// Lagrangian density D(h) at the given allocation. Extended precision: the
// closed-form check inverts D near a double root.
ArrayXld lagrangian_density(const LinkParams& params, const FadingDistribution& fading,
                            const PowerAllocation& alloc, long double lambda1, long double lambda2) {
  using R = long double;
  const auto& h = fading.gains();
  ArrayXld d(h.size());
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    const R h2 = R(h(j)) * R(h(j));
    const R u = R(alloc.x2(j)) * R(alloc.x2(j));
    const R p = alloc.p_ehu(j);
    const R n = R(params.sigma2_sq()) + u * R(params.alpha2());
    const R rate = std::log1p(h2 * p / n) / (R(2) * std::numbers::ln2_v<R>);
    d(j) = rate - lambda1 * u -
           lambda2 * ((R(1) - R(params.recycle())) * p - R(params.eta()) * h2 * u);
  }
  return d;
}

// lambda1 from stationarity of D(h) in x2^2 at a state carrying ET power.
long double stationary_lambda1(const LinkParams& params, double h, double x2, double p_ehu,
                               long double lambda2) {
  using R = long double;
  const R h2 = R(h) * R(h);
  R l1 = lambda2 * R(params.eta()) * h2;
  if (p_ehu > 0.0) {
    const R n = R(params.sigma2_sq()) + R(x2) * R(x2) * R(params.alpha2());
    l1 += R(params.alpha2()) * (lambda2 * (R(1) - R(params.recycle())) / h2 -
                                R(1) / (R(2) * std::numbers::ln2_v<R> * n));
  }
  return l1;
}

Eigen::ArrayXd stationarity_residual(const LinkParams& params, const FadingDistribution& fading,
                                     const PowerAllocation& alloc, double lambda2) {
  // d/dP of ln(1 + h^2 P / n) against lambda2 (1 - rho), relative.
  const auto& h = fading.gains();
  Eigen::ArrayXd r = Eigen::ArrayXd::Zero(h.size());
  const double target = lambda2 * (1.0 - params.recycle());
  for (Eigen::Index j = 0; j < h.size(); ++j) {
    if (alloc.p_ehu(j) <= 0.0) continue;
    const double n = params.et_noise(alloc.x2(j) * alloc.x2(j));
    const double slope = h(j) * h(j) / (n + h(j) * h(j) * alloc.p_ehu(j));
    r(j) = std::abs(slope / target - 1.0);
  }
  return r;
}

}  // namespace

Case2Solution solve_case2(const LinkParams& params, const FadingDistribution& fading,
                          const Case2Options& options) {
  const Eigen::Index n = fading.size();
  const Eigen::ArrayXd& p = fading.probs();
  Case2Solution out;
  out.allocation = PowerAllocation::zero(n);
  out.multipliers.mu1_per_state = ArrayXld::Zero(n);
  if (!sustainable(params, fading)) return out;

  const double p_et = params.p_et();
  const ProfileEvaluator zero_base(params, fading, 0.0);
  const ProfileEvaluator flat_base(params, fading, p_et);

  AscentOutcome best;
  best.value.value = -1.0;
  int total_iterations = 0;
  bool stalled = false;
  const auto consider = [&](const ProfileEvaluator& ev, Profile start, bool climb) {
    AscentOutcome r;
    if (climb) {
      r = ascend(ev, std::move(start), options.max_iterations - total_iterations, p_et);
      total_iterations += r.iterations;
      stalled = stalled || !r.converged;
    } else {
      r.profile = std::move(start);
      r.value = ev.evaluate(r.profile);
    }
    if (r.value.value > best.value.value) best = std::move(r);
  };

  const bool small = n <= options.dense_start_limit;
  consider(flat_base, flat_base.make_profile(), small);

  // Single-state concentrations, strongest states first (gains ascend).
  const Eigen::Index n_single = small ? n : std::min(n, options.singleton_starts);
  for (Eigen::Index k = 0; k < n_single && !stalled; ++k) {
    const Eigen::Index j = n - 1 - k;
    if (fading.gains()(j) <= 0.0) continue;
    Profile pr = zero_base.make_profile();
    pr.set(j, p_et / p(j));
    pr.slack = 0.0;
    if (!(zero_base.budget_of(pr) > 0.0)) continue;
    consider(zero_base, std::move(pr), true);
  }
  out.iterations = total_iterations;

  Eigen::ArrayXd u = best.profile.u.max(0.0);
  // Drop rounding residue left behind by transfers.
  u = (p * u > 1e-12 * p_et).select(u, 0.0);
  const double used = (p * u).sum();
  if (used > p_et) u *= p_et / used;

  const double omr = 1.0 - params.recycle();
  const auto value_of = [&](const Eigen::ArrayXd& v) {
    const double b = (params.eta() * (p * fading.gains().square() * v).sum() - params.p_proc()) / omr;
    if (!(b > 0.0)) return 0.0;
    const Waterfill w = waterfill(noise_floors(params, fading.gains(), v), p, b, omr);
    return ergodic_rate(params, fading, {v.sqrt(), w.power});
  };
  // Small leftover shares: hand them to the dominant state when that is no worse.
  {
    Eigen::Index dom = 0;
    (p * u).maxCoeff(&dom);
    double current = value_of(u);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == dom || u(j) <= 0.0 || p(j) * u(j) > 1e-6 * p_et) continue;
      Eigen::ArrayXd trial = u;
      trial(dom) += p(j) * u(j) / p(dom);
      trial(j) = 0.0;
      const double v = value_of(trial);
      if (v >= current * (1.0 - 1e-12)) {
        u = std::move(trial);
        current = std::max(current, v);
      }
    }
  }
  const double budget =
      (params.eta() * (p * fading.gains().square() * u).sum() - params.p_proc()) / omr;
  const Waterfill wf = waterfill(noise_floors(params, fading.gains(), u), p, budget, omr);
  out.allocation.x2 = u.sqrt();
  out.allocation.p_ehu = wf.power;
  out.water_level = wf.level;
  out.capacity = ergodic_rate(params, fading, out.allocation);

  MultiplierSet& m = out.multipliers;
  m.lambda2 = wf.lambda2;
  if (p_et - used <= 1e-9 * p_et && m.lambda2 > 0.0) {
    const Eigen::Index j = dominant_state(p * u);
    if (wf.power(j) > 0.0) {
      // Water-filling condition of this state, evaluated on the rounded
      // primal so that both multipliers describe the same point.
      using R = long double;
      const R x2 = out.allocation.x2(j);
      const R h2 = R(fading.gains()(j)) * R(fading.gains()(j));
      const R n = R(params.sigma2_sq()) + x2 * x2 * R(params.alpha2());
      m.lambda2 = R(1) / ((R(1) - R(params.recycle())) * (n / h2 + R(wf.power(j))));
    }
    m.lambda1 = std::max(
        0.0L, stationary_lambda1(params, fading.gains()(j), out.allocation.x2(j), wf.power(j), m.lambda2));
  }
  m.mu1_per_state = lagrangian_density(params, fading, out.allocation, m.lambda1, m.lambda2);
  m.mu1 = (p.cast<long double>() * m.mu1_per_state).sum();

  if (stalled) {
    throw NonConvergence("solve_case2: iteration cap reached", out.allocation, out.capacity);
  }
  return out;
}

CapacityResult solve(const LinkParams& params, const FadingDistribution& fading) {
  const Eigen::Index n = fading.size();
  const Eigen::ArrayXd& p = fading.probs();
  CapacityResult out;
  out.allocation = PowerAllocation::zero(n);
  out.multipliers.mu1_per_state = ArrayXld::Zero(n);
  out.residuals.stationarity = Eigen::ArrayXd::Zero(n);
  if (!sustainable(params, fading)) return out;

  const Case1Solution c1 = waterfill_case1(params, fading);
  const double cap1 = capacity_case1(params, fading, c1.allocation);
  const Case2Solution c2 = solve_case2(params, fading);

  const double omr = 1.0 - params.recycle();
  const double h2_mean = fading.second_moment();
  if (c2.capacity > cap1 * (1.0 + kImprovement)) {
    out.regime = CapacityCase::kCase2;
    out.capacity = c2.capacity;
    out.allocation = c2.allocation;
    out.multipliers = c2.multipliers;
    out.residuals.water_level = c2.water_level;
  } else {
    out.regime = CapacityCase::kCase1;
    out.capacity = cap1;
    out.allocation = c1.allocation;
    MultiplierSet& m = out.multipliers;
    m.lambda2 = c1.lambda2;
    // Common amplitude: stationarity averaged over the states.
    long double l1 = m.lambda2 * params.eta() * h2_mean;
    const double n_et = params.et_noise(params.p_et());
    for (Eigen::Index j = 0; j < n; ++j) {
      if (c1.allocation.p_ehu(j) <= 0.0) continue;
      const double h2 = fading.gains()(j) * fading.gains()(j);
      l1 += p(j) * params.alpha2() * (m.lambda2 * omr / h2 - kHalfLog2 / n_et);
    }
    m.lambda1 = std::max(0.0L, l1);
    m.mu1_per_state = lagrangian_density(params, fading, out.allocation, m.lambda1, m.lambda2);
    m.mu1 = (p.cast<long double>() * m.mu1_per_state).sum();
    out.residuals.water_level = c1.water_level;
  }
  out.residuals.iterations = c2.iterations;

  const PowerAllocation& a = out.allocation;
  const double et_used = (p * a.x2.square()).sum();
  const double harvest = params.eta() * (p * fading.gains().square() * a.x2.square()).sum();
  const double consumed = omr * (p * a.p_ehu).sum() + params.p_proc();
  out.residuals.c1_slack = params.p_et() > 0.0 ? (params.p_et() - et_used) / params.p_et() : 0.0;
  out.residuals.c2_residual = harvest > 0.0 ? (harvest - consumed) / harvest : 0.0;
  out.residuals.stationarity =
      stationarity_residual(params, fading, a, static_cast<double>(out.multipliers.lambda2));

  const MultiplierSet& m = out.multipliers;
  out.residuals.case_test_lhs = cap1;
  out.residuals.case_test_rhs = static_cast<double>(
      m.lambda1 * params.p_et() + m.mu1 +
      m.lambda2 * (omr * (p * c1.allocation.p_ehu).sum() -
                   params.eta() * params.p_et() * h2_mean));
  return out;
}

double capacity_no_fading(const LinkParams& params, double h) {
  if (!(h >= 0.0)) throw InvalidParameter("capacity_no_fading: gain must be >= 0");
  const double h2 = h * h;
  const double p_ehu =
      std::max(0.0, (params.eta() * params.p_et() * h2 - params.p_proc()) / (1.0 - params.recycle()));
  return kHalfLog2 * std::log1p(h2 * p_ehu / params.et_noise(params.p_et()));
}

RayleighClosedForm rayleigh_capacity_closed_form(const LinkParams& params, double omega) {
  if (!(omega > 0.0)) throw InvalidParameter("rayleigh closed form: omega must be positive");
  const double omr = 1.0 - params.recycle();
  const double target = params.eta() * params.p_et() * omega - params.p_proc();
  if (!(target > 0.0)) throw DomainError("rayleigh closed form: eta P_ET omega <= Pp");
  const double s = params.et_noise(params.p_et());

  // Expected EHU power for scaled multiplier l = lambda2 (1 - rho); decreasing in l.
  const auto expected_power = [&](double l) {
    const double t = l * s / omega;
    return std::exp(-t) / l - (s / omega) * exp_e1(t);
  };
  const auto excess = [&](double l) { return omr * expected_power(l) - target; };

  double lo = kLambdaFloor;
  while (excess(lo) <= 0.0 && lo > 1e-290) lo *= 1e-10;
  double hi = 1.0;
  for (int i = 0; i < 700 && excess(hi) > 0.0; ++i) hi *= 10.0;
  for (int i = 0; i < 400 && hi / lo - 1.0 > 1e-15; ++i) {
    const double mid = std::sqrt(lo * hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  const double l = std::sqrt(lo * hi);
  return {l / omr, exp_e1(l * s / omega) * kHalfLog2};
}

}  // namespace fdwpc
