// Copyright 2026 The knapbench authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KNAPBENCH_SCALING_HPP
#define KNAPBENCH_SCALING_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace knapbench {

// This module works in doubles, unlike the integer-exact rest of the
// library: growth values arrive as measured operation totals and the
// closed-form bounds are transcendental. Closed-form comparisons in tests
// carry a documented 1e-9 tolerance.

struct GrowthPoint {
  std::uint64_t n = 0;
  double value = 0.0;
};

// A measured growth curve: (n, f_hat(n)) pairs for one solver, with the
// identifiers of the estimates behind each point.
struct GrowthSeries {
  std::vector<GrowthPoint> points;  // n strictly increasing
  std::string solver_id;
  std::vector<std::string> provenance;
};

inline void validate_series(const GrowthSeries& series, std::size_t min_points = 2) {
  if (series.points.size() < min_points)
    throw std::invalid_argument("growth series: too few points");
  for (std::size_t i = 1; i < series.points.size(); ++i)
    if (series.points[i].n <= series.points[i - 1].n)
      throw std::invalid_argument("growth series: n values must be strictly increasing");
}

struct RecursionCheck {
  std::uint64_t n = 0;
  bool holds = false;
  double lhs = 0.0;  // (n/m) * f(n/m)
  double rhs = 0.0;  // f(n)
};

// Per-n evidence for the recursion inequality (n/m) f(n/m) < f(n).
// Measurements only ever support finitely many n, so the verdict is the full
// list, never a single boolean.
struct RecursionVerdict {
  std::uint64_t m = 0;
  std::vector<RecursionCheck> checks;
};

// Evaluates (n/m) * f(n/m) < f(n) at every series point whose n/m is also in
// the series. The inequality is strict.
inline RecursionVerdict check_recursion(const GrowthSeries& series, std::uint64_t m) {
  if (m < 2) throw std::invalid_argument("check_recursion: m must be >= 2");
  validate_series(series);
  std::map<std::uint64_t, double> lookup;
  for (const auto& p : series.points) lookup[p.n] = p.value;

  RecursionVerdict verdict;
  verdict.m = m;
  for (const auto& p : series.points) {
    if (p.n % m != 0) continue;
    const auto it = lookup.find(p.n / m);
    if (it == lookup.end()) continue;
    RecursionCheck check;
    check.n = p.n;
    check.lhs = static_cast<double>(p.n / m) * it->second;
    check.rhs = p.value;
    check.holds = check.lhs < check.rhs;
    verdict.checks.push_back(check);
  }
  if (verdict.checks.empty())
    throw std::invalid_argument("check_recursion: no applicable (n, n/m) pairs");
  return verdict;
}

inline double eval_polynomial(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

// Splits f = f1 + f2 with f1 the given polynomial (coefficients in ascending
// powers) and applies the m = 2 recursion check to the remainder f2.
inline RecursionVerdict decomposed_check(const GrowthSeries& series,
                                         const std::vector<double>& poly_coeffs) {
  validate_series(series);
  GrowthSeries remainder;
  remainder.solver_id = series.solver_id;
  remainder.provenance = series.provenance;
  for (const auto& p : series.points) {
    const double f1 = eval_polynomial(poly_coeffs, static_cast<double>(p.n));
    const double f2 = p.value - f1;
    if (f2 < 0.0)
      throw std::invalid_argument(
          "decomposed_check: negative remainder, the polynomial part overshoots");
    remainder.points.push_back({p.n, f2});
  }
  return check_recursion(remainder, 2);
}

// Closed-form lower bound obtained by iterating the recursion inequality
// down to n = 1:  exp((ln n)^2 / (2 ln m)) * n^(-1/2) * f(1).
inline double superpoly_bound(double n, std::uint64_t m, double f1_value) {
  if (n < 1.0) throw std::invalid_argument("superpoly_bound: n must be >= 1");
  if (m < 2) throw std::invalid_argument("superpoly_bound: m must be >= 2");
  const double ln_n = std::log(n);
  return std::exp(ln_n * ln_n / (2.0 * std::log(static_cast<double>(m)))) /
         std::sqrt(n) * f1_value;
}

struct GrowthClassification {
  double best_fit_exponent = 0.0;
  bool poly_consistent = false;
  std::vector<double> residuals;  // natural-log units, one per point
  double max_abs_residual = 0.0;
};

// Least-squares fit of log f against log n. A series is flagged
// polynomial-consistent when every residual stays inside the threshold;
// exponential-family curves force residuals far outside it at the scales
// measured here.
inline GrowthClassification classify_growth(const GrowthSeries& series,
                                            double residual_threshold = 0.5) {
  validate_series(series, 3);
  std::vector<double> xs, ys;
  for (const auto& p : series.points) {
    if (p.value <= 0.0)
      throw std::invalid_argument("classify_growth: values must be positive");
    xs.push_back(std::log(static_cast<double>(p.n)));
    ys.push_back(std::log(p.value));
  }
  const std::size_t count = xs.size();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(count);
  mean_y /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("classify_growth: degenerate series");
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  GrowthClassification result;
  result.best_fit_exponent = slope;
  for (std::size_t i = 0; i < count; ++i) {
    const double residual = ys[i] - (slope * xs[i] + intercept);
    result.residuals.push_back(residual);
    result.max_abs_residual = std::max(result.max_abs_residual, std::abs(residual));
  }
  result.poly_consistent = result.max_abs_residual < residual_threshold;
  return result;
}

}  // namespace knapbench

#endif  // KNAPBENCH_SCALING_HPP
