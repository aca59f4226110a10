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

#ifndef STEINKIT_GENERATOR_METHOD_HPP_
#define STEINKIT_GENERATOR_METHOD_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "steinkit/dist_core.hpp"

namespace stein {

// Dense rate matrix of a continuous-time Markov chain on integer-labelled
// states: nonnegative off-diagonal rates, zero row sums.
struct CtmcGenerator {
  std::vector<std::int64_t> states;
  std::vector<std::vector<double>> rates;

  std::size_t size() const { return states.size(); }
  void validate(double tol = 1e-12) const;
  // (Qf)(w) for a function tabulated on the states.
  std::vector<double> apply(const std::vector<double>& f) const;
};

// Laws of the coordinates of the resampling chain: at each step a uniform
// coordinate is replaced by an independent copy.
struct CoordinateChainSpec {
  std::vector<FiniteRv> coords;

  std::size_t n() const { return coords.size(); }
  void validate() const;
};

using ConfigFunction =
    std::function<double(const std::vector<double>&)>;

// Exact generator value (1/n) sum_i E{f(z with coordinate i resampled) -
// f(z)}.  Every z_i must be an atom of coords[i].
double coordinate_generator_apply(const CoordinateChainSpec& spec,
                                  const ConfigFunction& f,
                                  const std::vector<double>& z);

// Second-order projection of the generator onto functions of the
// coordinate sum w = sum z_i.  lhs is n times the generator applied to
// f(sum .); rhs re-expresses it through -w f'(w) + (1/2)(1 + sum z_i^2)
// f''(w) plus the exact Taylor remainder.  Requires centered coordinates
// with total variance 1; throws std::logic_error if lhs and rhs disagree
// beyond 1e-10.
struct ProjectionExpansion {
  double lhs = 0.0;
  double remainder = 0.0;
  double rhs = 0.0;
};
ProjectionExpansion projection_expansion(const CoordinateChainSpec& spec,
                                         const std::function<double(double)>& f,
                                         const std::function<double(double)>& fprime,
                                         const std::function<double(double)>& fsecond,
                                         const std::vector<double>& z);

// Both sides of the sum-projection identity for W = sum X_i, evaluated by
// exhaustive enumeration over the product of atom supports: the expected
// second-order operator against the expected variance defect plus Taylor
// remainder.  Returns the absolute difference.
double sum_projection_identity_residual(
    const std::vector<FiniteRv>& rvs, const std::function<double(double)>& f,
    const std::function<double(double)>& fprime,
    const std::function<double(double)>& fsecond,
    std::size_t enumeration_budget = 1'000'000);

// Reported (not asserted) smallness inputs of the projection route:
// E|sum X_i^2 - 1| and E|remainder|.
struct ProjectionErrorTerms {
  double variance_defect = 0.0;
  double expected_abs_remainder = 0.0;
};
ProjectionErrorTerms projection_error_terms(
    const std::vector<FiniteRv>& rvs, const std::function<double(double)>& f,
    const std::function<double(double)>& fprime,
    const std::function<double(double)>& fsecond,
    std::size_t enumeration_budget = 1'000'000);

// Birth-death chain on {0..N} with constant birth rate lambda and unit
// per-capita death rate, truncated by dropping the upward rate at N.
// Requires N >= ceil(lambda) + 10 sqrt(lambda) so the truncation error in
// the stationary law stays below the certification tolerances.
CtmcGenerator immigration_death_generator(double lambda, std::int64_t N);

// Stationary law of an irreducible generator (pi Q = 0, sum pi = 1).
std::vector<double> stationary_law(const CtmcGenerator& Q);

// Solves Q f = -(h - pi h) with the normalization pi f = 0 (the recurrent
// potential of the centered h).  Throws std::invalid_argument for
// reducible chains.
std::vector<double> solve_poisson_equation(const CtmcGenerator& Q,
                                           const std::vector<double>& h);

// |sum_w pi(w) (Qf)(w)|: the stationarity defect of the generator.
double stationarity_check(const CtmcGenerator& Q, const std::vector<double>& f);

}  // namespace stein

#endif  // STEINKIT_GENERATOR_METHOD_HPP_
