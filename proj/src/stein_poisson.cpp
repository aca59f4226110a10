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

#include "steinkit/stein_poisson.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stein {

double BoundCertificate::component(const std::string& name) const {
  for (const auto& [k, v] : components)
    if (k == name) return v;
  throw std::out_of_range("BoundCertificate: no component " + name);
}

BernoulliEnsemble BernoulliEnsemble::independent(std::vector<double> p) {
  BernoulliEnsemble e;
  e.p = std::move(p);
  return e;
}

double BernoulliEnsemble::lambda() const {
  long double s = 0.0L;
  for (double pi : p) s += pi;
  return static_cast<double>(s);
}

void BernoulliEnsemble::validate(double tol) const {
  const std::size_t n = p.size();
  for (double pi : p)
    if (!(pi >= 0.0 && pi <= 1.0))
      throw std::domain_error("BernoulliEnsemble: p outside [0,1]");
  if (joint) {
    if (n > 20)
      throw resource_error("BernoulliEnsemble: joint law limited to n <= 20");
    if (joint->size() != (std::size_t{1} << n))
      throw std::invalid_argument("BernoulliEnsemble: joint size != 2^n");
    long double total = 0.0L;
    std::vector<long double> marg(n, 0.0L);
    for (std::size_t mask = 0; mask < joint->size(); ++mask) {
      const double q = (*joint)[mask];
      if (!(q >= 0.0))
        throw std::domain_error("BernoulliEnsemble: negative joint mass");
      total += q;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) marg[i] += q;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > tol)
      throw std::invalid_argument("BernoulliEnsemble: joint mass != 1");
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(static_cast<double>(marg[i]) - p[i]) > tol)
        throw std::invalid_argument(
            "BernoulliEnsemble: joint marginal disagrees with p at index " +
            std::to_string(i));
  }
  if (neighborhoods && neighborhoods->size() != n)
    throw std::invalid_argument("BernoulliEnsemble: neighborhoods size != n");
}

double poisson_op_apply(const PoissonSteinSolution& f, std::int64_t w) {
  if (w < 0 || static_cast<std::size_t>(w + 1) >= f.values.size())
    throw std::out_of_range("poisson_op_apply: w+1 outside stored window");
  return f.lambda * f.values[static_cast<std::size_t>(w + 1)] -
         static_cast<double>(w) * f.values[static_cast<std::size_t>(w)];
}

PoissonSteinSolution solve_stein_poisson(const std::vector<double>& h,
                                         double lambda, double tail_tol) {
  if (!(lambda > 0.0))
    throw std::domain_error("solve_stein_poisson: lambda must be positive");
  if (h.empty()) throw std::invalid_argument("solve_stein_poisson: empty h");
  const std::size_t J = h.size() - 1;

  // Poisson weights on {0..J} by the ratio recurrence.
  std::vector<double> pmf(J + 1);
  pmf[0] = std::exp(-lambda);
  for (std::size_t j = 0; j + 1 <= J; ++j)
    pmf[j + 1] = pmf[j] * lambda / static_cast<double>(j + 1);
  long double window_mass = 0.0L;
  for (double q : pmf) window_mass += q;
  const double tail = std::max(0.0, static_cast<double>(1.0L - window_mass));
  if (tail > tail_tol)
    throw std::invalid_argument(
        "solve_stein_poisson: Poisson tail beyond the h window is " +
        std::to_string(tail) + "; extend h");

  // Centering constant; h is implicitly 0 beyond J so the centered
  // function integrates to zero against the full Poisson law.
  long double eh = 0.0L;
  for (std::size_t j = 0; j <= J; ++j)
    eh += static_cast<long double>(h[j]) * pmf[j];
  const double c = static_cast<double>(eh);

  // Forward partial sums S(w) = sum_{j<=w} (h - c) p and complementary
  // tail sums; the tail sum carries the -c * tail correction so the two
  // forms describe the same infinite sum.
  std::vector<long double> forward(J + 1);
  long double run = 0.0L;
  for (std::size_t j = 0; j <= J; ++j) {
    run += (static_cast<long double>(h[j]) - c) * pmf[j];
    forward[j] = run;
  }
  std::vector<long double> tail_sum(J + 2, 0.0L);
  tail_sum[J + 1] = -static_cast<long double>(c) * tail;
  for (std::size_t j = J + 1; j-- > 0;)
    tail_sum[j] = tail_sum[j + 1] + (static_cast<long double>(h[j]) - c) * pmf[j];

  PoissonSteinSolution sol;
  sol.lambda = lambda;
  sol.expected_h = c;
  sol.values.assign(J + 1, 0.0);
  const std::size_t mode = static_cast<std::size_t>(lambda);
  for (std::size_t w = 1; w <= J; ++w) {
    const long double numer =
        w - 1 < mode ? forward[w - 1] : -tail_sum[w];
    sol.values[w] =
        static_cast<double>(numer / (static_cast<long double>(lambda) *
                                     pmf[w - 1]));
  }

  double sup = 0.0, d1 = 0.0, d2 = 0.0;
  for (std::size_t w = 1; w <= J; ++w) {
    sup = std::max(sup, std::abs(sol.values[w]));
    if (w + 1 <= J)
      d1 = std::max(d1, std::abs(sol.values[w + 1] - sol.values[w]));
    if (w + 2 <= J)
      d2 = std::max(d2, std::abs(sol.values[w + 2] - 2.0 * sol.values[w + 1] +
                                 sol.values[w]));
  }
  sol.sup_norm = sup;
  sol.diff_norm = d1;
  sol.diff2_norm = d2;
  return sol;
}

MagicFactors magic_factor_bounds(double lambda) {
  if (!(lambda > 0.0))
    throw std::domain_error("magic_factor_bounds: lambda must be positive");
  return {2.0 * std::min(1.0, 1.0 / lambda),
          2.0 * std::min(1.0, 1.0 / std::sqrt(lambda))};
}

BoundCertificate independent_bound(const std::vector<double>& p,
                                   double truncation_eps) {
  if (p.empty())
    throw std::invalid_argument("independent_bound: empty system (lambda 0)");
  long double lam = 0.0L, sumsq = 0.0L;
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0))
      throw std::domain_error("independent_bound: p outside [0,1]");
    lam += pi;
    sumsq += static_cast<long double>(pi) * pi;
  }
  const double lambda = static_cast<double>(lam);
  if (!(lambda > 0.0))
    throw std::invalid_argument("independent_bound: lambda must be positive");

  BoundCertificate cert;
  cert.theorem = "poisson_independent";
  cert.bound = std::min(1.0, 1.0 / lambda) * static_cast<double>(sumsq);
  cert.exact =
      tv_distance(convolve_bernoulli(p), poisson_pmf(lambda, truncation_eps));
  cert.margin = cert.bound - cert.exact.hi;
  cert.components = {{"lambda", lambda},
                     {"sum_p_sq", static_cast<double>(sumsq)}};
  return cert;
}

double lecam_bound(const std::vector<double>& p) {
  long double lam = 0.0L, sumsq = 0.0L;
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0))
      throw std::domain_error("lecam_bound: p outside [0,1]");
    if (pi > 0.25)
      throw std::invalid_argument("lecam_bound: requires max p_i <= 1/4");
    lam += pi;
    sumsq += static_cast<long double>(pi) * pi;
  }
  if (!(lam > 0.0L))
    throw std::invalid_argument("lecam_bound: lambda must be positive");
  return 8.0 * std::min(1.0, 1.0 / static_cast<double>(lam)) *
         static_cast<double>(sumsq);
}

double prohorov_binomial_bound(std::int64_t n, double p, double c) {
  if (!(c > 0.0))
    throw std::invalid_argument("prohorov_binomial_bound: c must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("prohorov_binomial_bound: p outside [0,1]");
  return c * p * std::min(1.0, static_cast<double>(n) * p);
}

LatticePmf ensemble_sum_law(const BernoulliEnsemble& e) {
  e.validate();
  if (!e.joint) return convolve_bernoulli(e.p);
  const std::size_t n = e.p.size();
  LatticePmf out;
  out.origin = 0;
  out.weights.assign(n + 1, 0.0);
  for (std::size_t mask = 0; mask < e.joint->size(); ++mask)
    out.weights[static_cast<std::size_t>(std::popcount(mask))] +=
        (*e.joint)[mask];
  out.tail_mass = 0.0;
  return out;
}

BoundCertificate local_dependence_bound(const BernoulliEnsemble& e,
                                        double truncation_eps) {
  if (!e.joint)
    throw std::invalid_argument("local_dependence_bound: joint law required");
  if (!e.neighborhoods)
    throw std::invalid_argument(
        "local_dependence_bound: neighborhoods required");
  e.validate();
  const std::size_t n = e.p.size();
  const std::vector<double>& joint = *e.joint;

  const double lambda = e.lambda();
  BoundCertificate cert;
  cert.theorem = "poisson_local_dependence";
  if (!(lambda > 0.0)) {
    // Degenerate empty process: W == 0 == Po(0) pointwise.
    cert.bound = 0.0;
    cert.exact = {0.0, 0.0};
    cert.margin = 0.0;
    cert.components = {{"lambda", 0.0}, {"moment_term", 0.0},
                       {"coupling_term", 0.0}};
    return cert;
  }

  long double moment_term = 0.0L;   // p_i^2 + p_i E Y_i + E(X_i Y_i)
  long double coupling_term = 0.0L; // E |E(X_i | rest) - p_i|
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t nbhd_mask = 0;
    for (int j : (*e.neighborhoods)[i]) {
      if (j < 0 || static_cast<std::size_t>(j) >= n)
        throw std::invalid_argument("local_dependence_bound: bad neighborhood");
      nbhd_mask |= std::size_t{1} << j;
    }
    nbhd_mask |= std::size_t{1} << i;
    const std::size_t y_mask = nbhd_mask & ~(std::size_t{1} << i);
    const std::size_t rest_mask = ~nbhd_mask;

    // Compressed index over the configuration outside the neighborhood,
    // so conditional expectations of X_i accumulate in dense arrays.
    std::vector<int> rest_bits;
    for (std::size_t j = 0; j < n; ++j)
      if (rest_mask >> j & 1) rest_bits.push_back(static_cast<int>(j));
    std::vector<long double> rest_prob(std::size_t{1} << rest_bits.size(),
                                       0.0L);
    std::vector<long double> rest_xi(rest_prob.size(), 0.0L);

    long double e_y = 0.0L, e_xy = 0.0L;
    for (std::size_t mask = 0; mask < joint.size(); ++mask) {
      const double q = joint[mask];
      if (q == 0.0) continue;
      const int y = std::popcount(mask & y_mask);
      const int xi = static_cast<int>(mask >> i & 1);
      e_y += static_cast<long double>(y) * q;
      e_xy += static_cast<long double>(xi * y) * q;
      std::size_t key = 0;
      for (std::size_t b = 0; b < rest_bits.size(); ++b)
        key |= (mask >> rest_bits[b] & 1) << b;
      rest_prob[key] += q;
      rest_xi[key] += xi * q;
    }
    moment_term += static_cast<long double>(e.p[i]) * e.p[i] +
                   static_cast<long double>(e.p[i]) * e_y + e_xy;
    for (std::size_t k = 0; k < rest_prob.size(); ++k)
      coupling_term +=
          std::abs(rest_xi[k] - static_cast<long double>(e.p[i]) *
                                    rest_prob[k]);
  }

  const double c_diff = std::min(1.0, 1.0 / lambda);
  const double c_sup = 2.0 * std::min(1.0, 1.0 / std::sqrt(lambda));
  cert.bound = static_cast<double>(moment_term) * c_diff +
               static_cast<double>(coupling_term) * c_sup;
  cert.exact =
      tv_distance(ensemble_sum_law(e), poisson_pmf(lambda, truncation_eps));
  cert.margin = cert.bound - cert.exact.hi;
  cert.components = {{"lambda", lambda},
                     {"moment_term", static_cast<double>(moment_term)},
                     {"coupling_term", static_cast<double>(coupling_term)}};
  return cert;
}

}  // namespace stein
