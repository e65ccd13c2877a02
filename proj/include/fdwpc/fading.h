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

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fdwpc {

/// Block-fading channel amplitude H as a finite probability mass function.
///
/// States are sorted ascending by gain, every probability is positive and they
/// sum to one. omega() is the nominal E[H^2]; for quantized continuous models
/// it may differ from second_moment() by the quantization bias.
class FadingDistribution {
 public:
  // Validates and sorts. Probabilities within 1e-9 of summing to one are
  // renormalized; anything further off is rejected with InvalidParameter.
  FadingDistribution(Eigen::ArrayXd gains, Eigen::ArrayXd probs);
  FadingDistribution(Eigen::ArrayXd gains, Eigen::ArrayXd probs, double nominal_omega);

  const Eigen::ArrayXd& gains() const { return gains_; }
  const Eigen::ArrayXd& probs() const { return probs_; }
  Eigen::Index size() const { return gains_.size(); }

  double omega() const { return omega_; }
  double second_moment() const { return (gains_.square() * probs_).sum(); }
  double max_gain() const { return gains_(gains_.size() - 1); }

 private:
  Eigen::ArrayXd gains_;
  Eigen::ArrayXd probs_;
  double omega_;
};

FadingDistribution deterministic(double gain);

// Equiprobable inverse-CDF quantization of a Rayleigh amplitude with
// E[H^2] = omega at the probability midpoints (j - 1/2) / n_states.
FadingDistribution rayleigh(double omega, int n_states);

// Two whitespace-separated columns "h p" per line; '#' starts a comment.
FadingDistribution parse_fading(std::istream& in);
FadingDistribution load_fading(const std::string& path);

// i.i.d. state indices / gains. Bit-reproducible for a given (seed, n).
std::vector<Eigen::Index> sample_indices(const FadingDistribution& dist, std::uint64_t seed,
                                         std::size_t n);
std::vector<double> sample(const FadingDistribution& dist, std::uint64_t seed, std::size_t n);

}  // namespace fdwpc
