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
//
// Independent reference computations used only by tests.  Everything here
// is deliberately written from first principles (series, continued
// fractions, multiplicative recurrences in long double) so it shares no
// code path with the library implementations it checks.

#ifndef STEINKIT_TESTS_ORACLES_HPP_
#define STEINKIT_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// erf by Taylor series; accurate to ~1e-16 for |z| <= 3.
inline long double erf_series(long double z) {
  const long double two_over_sqrt_pi = 1.1283791670955125738961589031L;
  long double term = z, sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / n;
    const long double contrib = term / (2 * n + 1);
    sum += contrib;
    if (std::abs(contrib) < 1e-25L * std::abs(sum)) break;
  }
  return two_over_sqrt_pi * sum;
}

// erfc by the Lentz continued fraction; accurate for z >= 2.5.
inline long double erfc_cf(long double z) {
  const long double sqrt_pi = 1.7724538509055160272981674833L;
  long double b = z, c = 1e30L, d = 0.0L, h = 0.0L;
  // erfc(z) = exp(-z^2)/sqrt(pi) * 1/(z + 1/2/(z + 2/2/(z + 3/2/(...))))
  d = 1.0L / b;
  h = d;
  for (int k = 1; k < 500; ++k) {
    const long double a = k / 2.0L;
    b = z;
    d = 1.0L / (b + a * d);
    c = b + a / c;
    const long double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0L) < 1e-22L) break;
  }
  return std::exp(-z * z) / sqrt_pi * h;
}

// Standard normal distribution function, independent high-precision route.
inline long double normal_cdf(long double x) {
  const long double z = x / std::sqrt(2.0L);
  if (x >= 0.0L) {
    if (z <= 3.0L) return 0.5L * (1.0L + erf_series(z));
    return 1.0L - 0.5L * erfc_cf(z);
  }
  if (-z <= 3.0L) return 0.5L * (1.0L - erf_series(-z));
  return 0.5L * erfc_cf(-z);
}

// Binomial point probabilities C(n,k) p^k (1-p)^(n-k) by multiplicative
// recurrence in long double.
inline std::vector<long double> binomial_pmf(int n, long double p) {
  std::vector<long double> w(static_cast<std::size_t>(n) + 1);
  w[0] = std::pow(1.0L - p, n);
  for (int k = 0; k < n; ++k)
    w[static_cast<std::size_t>(k) + 1] = w[static_cast<std::size_t>(k)] *
                                         (n - k) / (k + 1.0L) * p /
                                         (1.0L - p);
  return w;
}

// Exact central binomial weights C(n,k) 2^{-n}.
inline std::vector<long double> symmetric_binomial(int n) {
  return binomial_pmf(n, 0.5L);
}

// Truncated Poisson weights by the ratio recurrence in long double.
inline std::vector<long double> poisson_pmf(long double lambda, int terms) {
  std::vector<long double> w(static_cast<std::size_t>(terms));
  w[0] = std::exp(-lambda);
  for (int j = 0; j + 1 < terms; ++j)
    w[static_cast<std::size_t>(j) + 1] =
        w[static_cast<std::size_t>(j)] * lambda / (j + 1.0L);
  return w;
}

// Kolmogorov distance of the lattice law values[k] at points x[k] from the
// standard normal, evaluated from both sides of every atom.
inline long double kolmogorov_vs_normal(const std::vector<long double>& x,
                                        const std::vector<long double>& w) {
  long double cum = 0.0L, sup = 0.0L;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const long double phi = normal_cdf(x[k]);
    sup = std::max(sup, std::abs(cum - phi));
    cum += w[k];
    sup = std::max(sup, std::abs(cum - phi));
  }
  return sup;
}

}  // namespace oracle

#endif  // STEINKIT_TESTS_ORACLES_HPP_
