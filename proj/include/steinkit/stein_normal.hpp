// Copyright 2026 The Steinkit Authors.
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

#ifndef STEINKIT_STEIN_NORMAL_HPP_
#define STEINKIT_STEIN_NORMAL_HPP_

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "steinkit/dist_core.hpp"

namespace stein {

// Target density for the characterizing operator f' + psi*f, where
// psi = p'/p.  log_density may be unnormalized; only psi and relative
// density values enter the computations.
struct DensitySpec {
  std::function<double(double)> log_density;
  std::function<double(double)> psi;
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();

  static DensitySpec standard_normal();
  bool contains(double x) const { return x > support_lo && x < support_hi; }
};

// Uniform grid holding sampled function values.
struct GridFunction {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return lo + static_cast<double>(i) * step; }
  // Piecewise-linear interpolation, clamped to the grid range.
  double interpolate(double xv) const;
};

struct GridSpec {
  double lo = -8.0;
  double hi = 8.0;
  double step = 1e-3;
};

// Tabulated solution of f' + psi*f = h - E h(Z) with its norm estimates.
// Norms are taken over interior grid nodes (two cells trimmed at each end,
// where the truncated tail of the defining integral dominates).
struct NormalSteinSolution {
  GridFunction f;
  double expected_h = 0.0;  // E h(Z) used for centering
  double sup_norm = 0.0;
  double deriv_norm = 0.0;
  double deriv2_norm = 0.0;
};

// Applies the general-density characterizing operator: f'(x) + psi(x) f(x).
// Throws std::domain_error when x is outside the interior of the support.
double general_stein_apply(const DensitySpec& d, double f, double fprime,
                           double x);

// Standard normal case: f'(w) - w f(w).
double normal_stein_apply(double f, double fprime, double w);

// Second-order form (the Ornstein-Uhlenbeck generator): -w f'(w) + f''(w).
double ou_generator_apply(double fprime, double fsecond, double w);

// Solves the equation f' + psi*f = h - E h(Z) on the grid by cumulative
// quadrature of (h - E h) p in density-weighted form.  The integral runs
// from the left for x <= 0 and from the right for x > 0, so the ratio to
// p(x) stays well scaled in both tails.  expected_h overrides the
// quadrature estimate of E h(Z) (pass the exact value for indicator h).
// jumps lists discontinuities or kinks of h; quadrature cells are split
// there so the piecewise accuracy order is preserved.
NormalSteinSolution solve_stein_normal(
    const std::function<double(double)>& h, const DensitySpec& d,
    const GridSpec& grid, std::optional<double> expected_h = std::nullopt,
    const std::vector<double>& jumps = {});

// Pointwise residuals f'(x) + psi(x) f(x) - (h(x) - E h) over interior grid
// nodes, with f' from one-dimensional finite differences of the tabulated
// solution.  Nodes within one grid cell of a listed jump of h are skipped
// (NaN); stencils near a jump switch to one-sided form so adjacent nodes
// stay accurate.
std::vector<double> equation_residuals(const NormalSteinSolution& sol,
                                       const DensitySpec& d,
                                       const std::function<double(double)>& h,
                                       const std::vector<double>& jumps = {});

// Largest finite residual magnitude from equation_residuals.
double max_equation_residual(const NormalSteinSolution& sol,
                             const DensitySpec& d,
                             const std::function<double(double)>& h,
                             const std::vector<double>& jumps = {});

// Third-moment bound (3/2) * sum E|X_i|^3 * ||f''||.
double lyapounov_bound(const std::vector<double>& moments3, double f2norm);

}  // namespace stein

#endif  // STEINKIT_STEIN_NORMAL_HPP_
