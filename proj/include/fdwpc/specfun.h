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

// Principal-branch Lambert W and the exponential integral E1 for real
// arguments. Both are templated on the floating-point type so tests can run
// them in long double.

#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>

#include "fdwpc/errors.h"

namespace fdwpc {

// Arguments this far below -1/e are still mapped onto the branch point.
inline constexpr double kBranchPointSlack = 1e-12;

/// W0(x): the solution w >= -1 of w e^w = x, for x >= -1/e.
///
/// Initial guess from the branch-point series, Winitzki's approximation or the
/// asymptotic log expansion depending on the region, then Halley refinement to
/// a few ulps. Throws DomainError for x < -1/e - kBranchPointSlack.
template <std::floating_point T>
T lambert_w0(T x) {
  using std::exp, std::log, std::log1p, std::sqrt, std::abs;
  const T branch = -exp(T(-1));
  if (std::isnan(x)) return x;
  if (x < branch - T(kBranchPointSlack)) {
    throw DomainError("lambert_w0: argument below -1/e");
  }
  if (x <= branch) return T(-1);
  if (x == T(0)) return T(0);
  if (std::isinf(x)) return x;

  T w;
  if (x < T(-0.32)) {
    const T p = sqrt(T(2) * (std::numbers::e_v<T> * x + T(1)));
    // Puiseux series about the branch point; exact to rounding for tiny p.
    w = T(-1) + p * (T(1) + p * (T(-1) / 3 + p * (T(11) / 72 + p * (T(-43) / 540 +
                                                                     p * T(769) / 17280))));
    if (p < T(1e-3)) return w;
  } else if (x < T(3)) {
    const T l = log1p(x);
    w = l * (T(1) - log1p(l) / (T(2) + l));
  } else {
    const T l1 = log(x);
    const T l2 = log(l1);
    w = l1 - l2 + l2 / l1;
  }

  const T tol = T(4) * std::numeric_limits<T>::epsilon();
  for (int i = 0; i < 64; ++i) {
    const T ew = exp(w);
    const T f = w * ew - x;
    const T wp1 = w + T(1);
    const T step = f / (ew * wp1 - (w + T(2)) * f / (T(2) * wp1));
    w -= step;
    if (abs(step) <= tol * (T(1) + abs(w))) break;
  }
  return w;
}

/// E1(x) = integral_x^inf e^-t / t dt for x > 0.
///
/// Power series for x <= 1, modified-Lentz continued fraction above.
template <std::floating_point T>
T exp_e1(T x) {
  using std::exp, std::log, std::abs;
  if (!(x > T(0))) throw DomainError("exp_e1: argument must be positive");
  if (std::isinf(x)) return T(0);
  const T eps = std::numeric_limits<T>::epsilon();

  if (x <= T(1)) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    T sum = T(0);
    T term = T(1);
    for (int k = 1; k < 200; ++k) {
      term *= -x / T(k);
      const T contrib = term / T(k);
      sum += contrib;
      if (abs(contrib) < eps * abs(sum)) break;
    }
    return -std::numbers::egamma_v<T> - log(x) - sum;
  }

  const T tiny = std::numeric_limits<T>::min() / eps;
  T b = x + T(1);
  T c = T(1) / tiny;
  T d = T(1) / b;
  T h = d;
  for (int i = 1; i < 10000; ++i) {
    const T an = -T(i) * T(i);
    b += T(2);
    d = T(1) / (an * d + b);
    c = b + an / c;
    const T del = c * d;
    h *= del;
    if (abs(del - T(1)) < eps) break;
  }
  return h * exp(-x);
}

}  // namespace fdwpc
