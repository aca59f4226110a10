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

#include "steinkit/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stein {

namespace {

FiniteRv sum_law(const FiniteRv& x, std::int64_t copies) {
  if (copies == 0) return FiniteRv::point_mass(0.0);
  return convolve_finite(
      std::vector<FiniteRv>(static_cast<std::size_t>(copies), x));
}

void check_standardized(const FiniteRv& x, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("sample count n must be >= 1");
  if (std::abs(x.mean()) > 1e-12)
    throw std::invalid_argument("summand law must be centered (E X = 0)");
  if (std::abs(x.variance() - 1.0 / static_cast<double>(n)) > 1e-12)
    throw std::invalid_argument("summand law must have variance 1/n");
}

}  // namespace

double KFunction::value(double t) const {
  if (breakpoints.size() < 2) return 0.0;
  const auto it =
      std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  if (it == breakpoints.begin() || it == breakpoints.end()) return 0.0;
  return plateau_values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

double KFunction::integral() const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < plateau_values.size(); ++i)
    s += static_cast<long double>(plateau_values[i]) *
         (breakpoints[i + 1] - breakpoints[i]);
  return static_cast<double>(s);
}

double KFunction::abs_weighted_integral() const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < plateau_values.size(); ++i) {
    const double lo = breakpoints[i], hi = breakpoints[i + 1];
    // Intervals never straddle zero because 0 is always a breakpoint.
    const double seg = 0.5 * std::abs(hi * hi - lo * lo);
    s += static_cast<long double>(plateau_values[i]) * seg;
  }
  return static_cast<double>(s);
}

double KFunction::integral_below(double t_hi) const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < plateau_values.size(); ++i) {
    const double lo = breakpoints[i];
    const double hi = std::min(breakpoints[i + 1], t_hi);
    if (hi > lo) s += static_cast<long double>(plateau_values[i]) * (hi - lo);
  }
  return static_cast<double>(s);
}

double KFunction::integral_between(double t_lo, double t_hi) const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < plateau_values.size(); ++i) {
    const double lo = std::max(breakpoints[i], t_lo);
    const double hi = std::min(breakpoints[i + 1], t_hi);
    if (hi > lo) s += static_cast<long double>(plateau_values[i]) * (hi - lo);
  }
  return static_cast<double>(s);
}

double KFunction::convolve_derivative(const std::function<double(double)>& f,
                                      double shift) const {
  long double s = 0.0L;
  for (std::size_t i = 0; i < plateau_values.size(); ++i)
    s += static_cast<long double>(plateau_values[i]) *
         (f(shift + breakpoints[i + 1]) - f(shift + breakpoints[i]));
  return static_cast<double>(s);
}

KFunction k_function(const FiniteRv& x, std::int64_t n) {
  check_standardized(x, n);
  KFunction k;
  k.n = n;
  const double nd = static_cast<double>(n);
  k.beta = nd * std::sqrt(nd) * x.abs_moment(3);

  std::vector<double> bps;
  bps.push_back(0.0);
  for (const auto& a : x.atoms)
    if (std::abs(a.value) > 0.0) bps.push_back(a.value);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  k.breakpoints = bps;

  k.plateau_values.assign(bps.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    long double v = 0.0L;
    if (bps[i] >= 0.0) {
      for (const auto& a : x.atoms)
        if (a.value >= bps[i + 1]) v += static_cast<long double>(a.value) * a.prob;
    } else {
      for (const auto& a : x.atoms)
        if (a.value <= bps[i]) v -= static_cast<long double>(a.value) * a.prob;
    }
    k.plateau_values[i] = static_cast<double>(nd * v);
    if (k.plateau_values[i] < 0.0)
      throw std::logic_error("k_function: negative plateau");
  }

  // Construction identities: the kernel integrates to n E X^2 and weights
  // |t| to (n/2) E |X|^3, independent of the moment preconditions.
  if (std::abs(k.integral() - nd * x.moment(2)) > 1e-12)
    throw std::logic_error("k_function: unit-mass identity failed");
  if (std::abs(k.abs_weighted_integral() - 0.5 * nd * x.abs_moment(3)) > 1e-12)
    throw std::logic_error("k_function: first-moment identity failed");
  return k;
}

double kernel_identity_residual(const FiniteRv& x, std::int64_t n,
                                const std::function<double(double)>& f,
                                std::size_t enumeration_budget) {
  check_standardized(x, n);
  double work = 1.0;
  for (std::int64_t i = 0; i < n; ++i) {
    work *= static_cast<double>(x.atoms.size());
    if (work > static_cast<double>(enumeration_budget))
      throw resource_error("kernel_identity_residual: enumeration budget");
  }
  const KFunction k = k_function(x, n);
  const FiniteRv wn = sum_law(x, n);
  const FiniteRv wn1 = sum_law(x, n - 1);

  long double lhs = 0.0L;
  for (const auto& a : wn.atoms)
    lhs += static_cast<long double>(a.prob) * a.value * f(a.value);
  long double rhs = 0.0L;
  for (const auto& a : wn1.atoms)
    rhs += static_cast<long double>(a.prob) * k.convolve_derivative(f, a.value);
  return std::abs(static_cast<double>(lhs - rhs));
}

double RampWindow::operator()(double w) const {
  if (w <= a - x) return -0.5 * (b - a) - x;
  if (w >= b + x) return 0.5 * (b - a) + x;
  return w - 0.5 * (a + b);
}

double RampWindow::derivative(double w) const {
  return w >= a - x && w <= b + x ? 1.0 : 0.0;
}

RampWindow ramp_window(double a, double b, double x) {
  if (!(a < b)) throw std::invalid_argument("ramp_window: requires a < b");
  if (!(x > 0.0)) throw std::invalid_argument("ramp_window: requires x > 0");
  return RampWindow{a, b, x};
}

BoundCertificate concentration_certificate(const FiniteRv& x, std::int64_t n,
                                           double a, double b) {
  if (!(a < b))
    throw std::invalid_argument("concentration_certificate: requires a < b");
  const KFunction k = k_function(x, n);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double smoothing = k.beta / root_n;

  const FiniteRv wn1 = sum_law(x, n - 1);
  long double window_mass = 0.0L;
  for (const auto& atom : wn1.atoms)
    if (atom.value >= a && atom.value <= b) window_mass += atom.prob;
  const double exact = static_cast<double>(window_mass);

  BoundCertificate cert;
  cert.theorem = "concentration_window";
  cert.bound = (b - a) + 2.0 * smoothing;
  cert.exact = {exact, exact};
  cert.margin = cert.bound - exact;

  // Proof-chain quantities, all computed exactly from the kernel and the
  // convolution laws.  The one-sided mass below beta/sqrt(n) and the
  // symmetric mass within it both stay above 1/2 by the Markov step.
  const double half_mass = k.integral_below(smoothing);
  const double central_mass = k.integral_between(-smoothing, smoothing);
  const RampWindow g = ramp_window(a, b, smoothing);
  long double smoothed = 0.0L;
  for (const auto& atom : wn1.atoms)
    smoothed += static_cast<long double>(atom.prob) *
                k.integral_between(a - smoothing - atom.value,
                                   b + smoothing - atom.value);
  const FiniteRv wn = sum_law(x, n);
  long double ewf = 0.0L;
  for (const auto& atom : wn.atoms)
    ewf += static_cast<long double>(atom.prob) * atom.value * g(atom.value);

  const double tol = 1e-10;
  if (half_mass < 0.5 - tol || central_mass < 0.5 - tol)
    throw std::logic_error("concentration_certificate: half-mass inequality");
  if (static_cast<double>(smoothed) < exact * central_mass - tol)
    throw std::logic_error("concentration_certificate: smoothing inequality");
  if (std::abs(static_cast<double>(smoothed - ewf)) > tol)
    throw std::logic_error("concentration_certificate: kernel identity");
  if (static_cast<double>(ewf) > 0.5 * cert.bound + tol)
    throw std::logic_error("concentration_certificate: norm bound");

  cert.components = {{"beta", k.beta},
                     {"smoothing", smoothing},
                     {"half_mass", half_mass},
                     {"central_mass", central_mass},
                     {"smoothed_window", static_cast<double>(smoothed)},
                     {"weighted_mean", static_cast<double>(ewf)},
                     {"ramp_sup", g.sup_norm()}};
  return cert;
}

double kolmogorov_remainder_report(const FiniteRv& x, std::int64_t n,
                                   const NormalSteinSolution& f) {
  const KFunction k = k_function(x, n);
  const FiniteRv wn1 = sum_law(x, n - 1);
  const double max_abs_atom =
      std::max(std::abs(x.atoms.front().value), std::abs(x.atoms.back().value));
  const double need_lo = wn1.atoms.front().value - max_abs_atom;
  const double need_hi = wn1.atoms.back().value + max_abs_atom;
  if (need_lo < f.f.lo || need_hi > f.f.hi)
    throw std::invalid_argument(
        "kolmogorov_remainder_report: solution grid does not cover the "
        "support of the sum");

  // f' interpolated from a five-point grid derivative; adequate for a
  // reporting quantity.
  GridFunction deriv = f.f;
  const std::size_t m = f.f.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = std::clamp<std::size_t>(i, 2, m - 3);
    const double num = f.f.values[j - 2] - 8.0 * f.f.values[j - 1] +
                       8.0 * f.f.values[j + 1] - f.f.values[j + 2];
    deriv.values[i] = num / (12.0 * f.f.step);
  }

  long double direct = 0.0L, kernel = 0.0L;
  for (const auto& atom : wn1.atoms) {
    for (const auto& xi : x.atoms)
      direct += static_cast<long double>(atom.prob) * xi.prob *
                deriv.interpolate(atom.value + xi.value);
    kernel += static_cast<long double>(atom.prob) *
              k.convolve_derivative(
                  [&](double v) { return f.f.interpolate(v); }, atom.value);
  }
  return std::abs(static_cast<double>(direct - kernel));
}

}  // namespace stein
