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

#ifndef STEINKIT_CONCENTRATION_HPP_
#define STEINKIT_CONCENTRATION_HPP_

#include <cstdint>
#include <functional>

#include "steinkit/certificate.hpp"
#include "steinkit/dist_core.hpp"
#include "steinkit/stein_normal.hpp"

namespace stein {

// Piecewise-constant kernel K(t) = n E X [1(0 < t < X) - 1(X < t < 0)]
// for one summand X of an i.i.d. standardized sum.  K is a probability
// density: it integrates to n E X^2 = 1, and integrates |t| to
// (n/2) E|X|^3 = beta / (2 sqrt n).
struct KFunction {
  std::vector<double> breakpoints;     // sorted; K vanishes outside
  std::vector<double> plateau_values;  // value on (b_i, b_{i+1})
  double beta = 0.0;                   // n^{3/2} E|X|^3
  std::int64_t n = 0;

  double value(double t) const;
  double integral() const;
  double abs_weighted_integral() const;  // integral of |t| K(t)
  // Mass of K over (-inf, t_hi].
  double integral_below(double t_hi) const;
  // Mass of K over [t_lo, t_hi].
  double integral_between(double t_lo, double t_hi) const;
  // integral f'(shift + t) K(t) dt evaluated exactly through the
  // antiderivative: sum_i K_i (f(shift + b_{i+1}) - f(shift + b_i)).
  double convolve_derivative(const std::function<double(double)>& f,
                             double shift) const;
};

// Builds K for the summand law X; requires E X = 0 and E X^2 = 1/n within
// 1e-12.  The construction self-checks its two moment identities.
KFunction k_function(const FiniteRv& x, std::int64_t n);

// Residual |E{W_n f(W_n)} - E integral f'(W_{n-1} + t) K(t) dt| with both
// sides exact: the n-fold and (n-1)-fold sum laws come from the
// convolution engine and the kernel integral uses the antiderivative f.
// The product-support budget guards pathological inputs.
double kernel_identity_residual(const FiniteRv& x, std::int64_t n,
                                const std::function<double(double)>& f,
                                std::size_t enumeration_budget = 1'000'000);

// Absolutely continuous window ramp: constant left of a - x, slope one on
// [a - x, b + x], constant right of b + x; its derivative is the indicator
// of [a - x, b + x] and its sup norm is (b - a)/2 + x.
struct RampWindow {
  double a = 0.0;
  double b = 0.0;
  double x = 0.0;

  double operator()(double w) const;
  double derivative(double w) const;  // indicator of [a - x, b + x]
  double sup_norm() const { return 0.5 * (b - a) + x; }
};
RampWindow ramp_window(double a, double b, double x);

// Certificate for P(a <= W_{n-1} <= b) <= (b - a) + 2 beta / sqrt(n),
// with the exact window probability from the convolution oracle.  The
// proof-chain quantities (half-mass inequality for K, the smoothed-window
// expectation and its two bounds) are validated numerically and exposed
// as components.
BoundCertificate concentration_certificate(const FiniteRv& x, std::int64_t n,
                                           double a, double b);

// Reported magnitude of the smoothing remainder
// E integral {f'(W_{n-1}+X_n) - f'(W_{n-1}+t)} K(t) dt for the tabulated
// equation solution f (half-line test function at z); no bound is
// asserted.  The solution grid must cover the support of W_{n-1} plus the
// extreme atom of X on both sides.
double kolmogorov_remainder_report(const FiniteRv& x, std::int64_t n,
                                   const NormalSteinSolution& f);

}  // namespace stein

#endif  // STEINKIT_CONCENTRATION_HPP_
