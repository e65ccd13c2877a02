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

#include "fdwpc/fading.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "fdwpc/errors.h"

namespace fdwpc {
namespace {

constexpr double kProbSumSlack = 1e-9;

}  // namespace

FadingDistribution::FadingDistribution(Eigen::ArrayXd gains, Eigen::ArrayXd probs)
    : FadingDistribution(std::move(gains), std::move(probs), std::nan("")) {}

FadingDistribution::FadingDistribution(Eigen::ArrayXd gains, Eigen::ArrayXd probs,
                                       double nominal_omega) {
  if (gains.size() == 0 || gains.size() != probs.size()) {
    throw InvalidParameter("fading: need a non-empty, equal number of gains and probabilities");
  }
  if (!gains.allFinite() || (gains < 0.0).any()) {
    throw InvalidParameter("fading: gains must be finite and >= 0");
  }
  if (!probs.allFinite() || (probs <= 0.0).any()) {
    throw InvalidParameter("fading: probabilities must be finite and > 0");
  }
  const double total = probs.sum();
  if (std::abs(total - 1.0) > kProbSumSlack) {
    throw InvalidParameter("fading: probabilities sum to " + std::to_string(total));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(gains.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return gains(a) < gains(b); });
  gains_.resize(gains.size());
  probs_.resize(probs.size());
  for (Eigen::Index i = 0; i < gains.size(); ++i) {
    gains_(i) = gains(order[static_cast<std::size_t>(i)]);
    probs_(i) = probs(order[static_cast<std::size_t>(i)]) / total;
  }
  omega_ = std::isnan(nominal_omega) ? second_moment() : nominal_omega;
}

FadingDistribution deterministic(double gain) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) {
    throw InvalidParameter("deterministic: gain must be finite and >= 0");
  }
  return FadingDistribution(Eigen::ArrayXd::Constant(1, gain), Eigen::ArrayXd::Ones(1));
}

FadingDistribution rayleigh(double omega, int n_states) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidParameter("rayleigh: omega must be positive");
  }
  if (n_states < 2) throw InvalidParameter("rayleigh: need at least two states");
  const double n = n_states;
  Eigen::ArrayXd mid = (Eigen::ArrayXd::LinSpaced(n_states, 1.0, n) - 0.5) / n;
  // H^2 ~ Exp(mean omega): inverse CDF is -omega ln(1 - u).
  Eigen::ArrayXd gains = (-omega * (-mid).log1p()).sqrt();
  return FadingDistribution(std::move(gains), Eigen::ArrayXd::Constant(n_states, 1.0 / n), omega);
}

FadingDistribution parse_fading(std::istream& in) {
  std::vector<double> h;
  std::vector<double> p;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double gain = 0.0;
    double prob = 0.0;
    if (!(fields >> gain)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InvalidParameter("fading file line " + std::to_string(line_no) + ": bad gain");
    }
    std::string extra;
    if (!(fields >> prob) || (fields >> extra)) {
      throw InvalidParameter("fading file line " + std::to_string(line_no) +
                             ": expected exactly two columns");
    }
    h.push_back(gain);
    p.push_back(prob);
  }
  return FadingDistribution(Eigen::Map<Eigen::ArrayXd>(h.data(), static_cast<Eigen::Index>(h.size())),
                            Eigen::Map<Eigen::ArrayXd>(p.data(), static_cast<Eigen::Index>(p.size())));
}

FadingDistribution load_fading(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open fading file " + path);
  return parse_fading(in);
}

std::vector<Eigen::Index> sample_indices(const FadingDistribution& dist, std::uint64_t seed,
                                         std::size_t n) {
  std::vector<double> cdf(static_cast<std::size_t>(dist.size()));
  std::partial_sum(dist.probs().begin(), dist.probs().end(), cdf.begin());
  std::mt19937_64 engine(seed);
  std::vector<Eigen::Index> out(n);
  const auto last = static_cast<Eigen::Index>(cdf.size()) - 1;
  for (auto& idx : out) {
    // 53 random mantissa bits; portable across standard libraries.
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    idx = std::min(static_cast<Eigen::Index>(it - cdf.begin()), last);
  }
  return out;
}

std::vector<double> sample(const FadingDistribution& dist, std::uint64_t seed, std::size_t n) {
  const auto idx = sample_indices(dist, seed, n);
  std::vector<double> out(idx.size());
  std::transform(idx.begin(), idx.end(), out.begin(), [&](Eigen::Index i) { return dist.gains()(i); });
  return out;
}

}  // namespace fdwpc
