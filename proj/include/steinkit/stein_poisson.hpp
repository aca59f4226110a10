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

#ifndef STEINKIT_STEIN_POISSON_HPP_
#define STEINKIT_STEIN_POISSON_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "steinkit/certificate.hpp"
#include "steinkit/dist_core.hpp"

namespace stein {

// Tabulated solution of lambda f(w+1) - w f(w) = h(w) - E h(Z) on {0..J},
// Z ~ Po(lambda).  values[0] is a free normalization fixed to 0; the norm
// fields therefore run over indices w >= 1, where the solution is
// determined.
struct PoissonSteinSolution {
  std::vector<double> values;
  double lambda = 0.0;
  double expected_h = 0.0;
  double sup_norm = 0.0;    // max |f(w)|, w >= 1
  double diff_norm = 0.0;   // max |f(w+1) - f(w)|, w >= 1
  double diff2_norm = 0.0;  // max |f(w+2) - 2f(w+1) + f(w)|, w >= 1
};

// Collection of Bernoulli indicators on {1..n}, optionally with a
// dependence structure: neighborhoods[i] lists the indices whose indicator
// is allowed to depend on X_i (i itself included), and joint gives the
// exact law over {0,1}^n indexed by bitmask (bit i = X_{i+1}).
struct BernoulliEnsemble {
  std::vector<double> p;
  std::optional<std::vector<std::vector<int>>> neighborhoods;
  std::optional<std::vector<double>> joint;

  static BernoulliEnsemble independent(std::vector<double> p);
  double lambda() const;
  // Checks joint consistency: mass balance and marginals matching p.
  void validate(double tol = 1e-12) const;
};

// lambda f(w+1) - w f(w) for a tabulated solution; w+1 must be stored.
double poisson_op_apply(const PoissonSteinSolution& f, std::int64_t w);

// Exact solver: partial sums of (h - E h) against the Poisson law, run
// forward below the mode and as complementary tail sums above it.  h is
// given on {0..J}; the Po(lambda) mass beyond J must not exceed tail_tol.
PoissonSteinSolution solve_stein_poisson(const std::vector<double>& h,
                                         double lambda,
                                         double tail_tol = 1e-12);

// Universal norms of the solution for test functions with ||h|| <= 1:
// first component bounds |f(w+1)-f(w)|, second bounds |f(w)|.
struct MagicFactors {
  double diff_bound = 0.0;
  double sup_bound = 0.0;
};
MagicFactors magic_factor_bounds(double lambda);

// Certified total-variation bound sum p_i^2 * min(1, 1/lambda) for an
// independent Bernoulli sum against Po(sum p_i), with the exact distance
// from the convolution oracle.
BoundCertificate independent_bound(const std::vector<double>& p,
                                   double truncation_eps = 1e-12);

// Le Cam's bound 8 min(1, 1/lambda) sum p_i^2, valid only when
// max p_i <= 1/4 (throws std::invalid_argument otherwise).
double lecam_bound(const std::vector<double>& p);

// c * p * min(1, n p): the binomial-to-Poisson rate with caller-supplied
// constant.
double prohorov_binomial_bound(std::int64_t n, double p, double c);

// Certified bound for a locally dependent ensemble, all moment terms
// computed exactly from the supplied joint law; requires neighborhoods and
// joint, n <= 20.
BoundCertificate local_dependence_bound(const BernoulliEnsemble& e,
                                        double truncation_eps = 1e-12);

// Exact law of W = sum X_i induced by an ensemble joint (or product law).
LatticePmf ensemble_sum_law(const BernoulliEnsemble& e);

}  // namespace stein

#endif  // STEINKIT_STEIN_POISSON_HPP_
