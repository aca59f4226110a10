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

#ifndef STEINKIT_POINT_PROCESS_HPP_
#define STEINKIT_POINT_PROCESS_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "steinkit/certificate.hpp"
#include "steinkit/stein_poisson.hpp"

namespace stein {

// Counting measure on the finite ground space {1..n}: one nonnegative
// count per site.
using CountingMeasure = std::vector<int>;

using MeasureFunction = std::function<double(const CountingMeasure&)>;

// Exact law of a point process on {1..n} with per-site counts stored up
// to cap; states are indexed in mixed radix (site 0 least significant).
// tail_mass carries the probability of configurations outside the stored
// box.
struct ProcessLaw {
  int site_count = 0;
  int cap = 0;
  std::vector<double> pmf;  // size (cap+1)^site_count
  double tail_mass = 0.0;

  std::size_t states() const { return pmf.size(); }
  std::size_t index(const CountingMeasure& counts) const;
  CountingMeasure counts_of(std::size_t index) const;
  double prob(const CountingMeasure& counts) const;
  void validate(double tol = 1e-12) const;
};

// Law of sum X_i delta_i for independent Bernoulli(p_i) indicators;
// exact on {0,1}^n, tail_mass 0.  Requires n <= 20.
ProcessLaw bernoulli_process_law(const std::vector<double>& p);

// Law of independent Po(lambda_u) counts per site truncated at cap, with
// the aggregate tail tracked; the tail must not exceed tail_tol.
ProcessLaw product_poisson_law(const std::vector<double>& lambda, int cap,
                               double tail_tol = 1e-10,
                               std::size_t state_budget = 10'000'000);

// Smallest cap whose aggregate truncation tail is below tail_tol.
int poisson_site_cap(const std::vector<double>& lambda,
                     double tail_tol = 1e-10);

// Law of X_i delta_i under an ensemble joint over {0,1}^n.
ProcessLaw ensemble_process_law(const BernoulliEnsemble& e);

// Total-variation bracket between two process laws on the same ground
// space, in the (1/2) sum |p - q| convention with tail slack.
DistanceInterval process_tv(const ProcessLaw& P, const ProcessLaw& Q);

// Spatial immigration-death generator value at xi:
// sum_u lambda_u {f(xi + d_u) - f(xi)} + sum_u xi_u {f(xi - d_u) - f(xi)}.
double spatial_generator_apply(const MeasureFunction& f,
                               const CountingMeasure& xi,
                               const std::vector<double>& lambda);

// Equation solution on the truncated box: L f = h - pi h with pi f = 0,
// where L reflects at the cap and pi is its exact product-form stationary
// law.  Interior states (all counts below cap) satisfy the untruncated
// equation up to the truncation tail.
struct ProcessSteinSolution {
  int site_count = 0;
  int cap = 0;
  std::vector<double> values;  // mixed-radix indexed as in ProcessLaw
  std::vector<double> pi;
  double expected_h = 0.0;

  std::size_t index(const CountingMeasure& counts) const;
  double value(const CountingMeasure& counts) const;
};
ProcessSteinSolution solve_process_stein(const MeasureFunction& h,
                                         const std::vector<double>& lambda,
                                         int cap,
                                         std::size_t state_budget = 1'000'000);

// Residual of the generator identity for independent indicators: the
// direct expectation E L f(Xi) against the sum of second differences
// p_i^2-weighted over the reduced configurations.  Requires n <= 12.
double generator_identity_residual(const std::vector<double>& p,
                                   const MeasureFunction& f);

// Certified process bound: d_TV(L(Xi), PP(lambda)) <= sum p_i^2 for the
// independent Bernoulli process; the expectation-scale bound 2 sum p_i^2
// is stored as a component.
BoundCertificate independent_process_bound(const std::vector<double>& p,
                                           double tail_tol = 1e-10);

// Certified bound for a locally dependent indicator process, with both
// first- and zeroth-order solution norms taken as the universal constant
// 2.  The margin is certified on the expectation scale (2 d_TV); the
// halved total-variation reading is stored as a component.  Requires the
// ensemble joint; n <= 12.
BoundCertificate dependent_process_bound(const BernoulliEnsemble& e,
                                         double tail_tol = 1e-10);

}  // namespace stein

#endif  // STEINKIT_POINT_PROCESS_HPP_
