// Copyright 2026 The SemantiX Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "semantix/error.hpp"

namespace semantix {

struct PearsonResult {
  double r;
  double p;  // two-sided
  std::size_t n;
};

// Pearson r with a two-sided p-value from t = r sqrt((n-2)/(1-r^2)) on n-2
// degrees of freedom. Throws DataError for n < 3 or a constant input.
inline PearsonResult pearson_with_p(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw DataError("pearson: sequences differ in length (" + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()) + ")");
  const std::size_t n = xs.size();
  if (n < 3) throw DataError("pearson: need at least 3 points, got " + std::to_string(n));

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw DataError("pearson: non-finite input");
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pearson: correlation undefined for a constant sequence");

  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  if (1.0 - r * r <= 0.0) return {r, 0.0, n};
  const double t = r * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  const double p = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
  return {r, p, n};
}

}  // namespace semantix
