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

#ifndef STEINKIT_EXCHANGEABLE_PAIRS_HPP_
#define STEINKIT_EXCHANGEABLE_PAIRS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "steinkit/certificate.hpp"
#include "steinkit/dist_core.hpp"

namespace stein {

// Exact joint law of a pair (W, W') on a finite grid.  Both coordinates
// share one canonical value grid; entries hold the sparse joint mass.
// Exchangeability is a property checked where required, not enforced at
// construction, so equal-marginal couplings that are not exchangeable can
// be represented too.
struct PairLaw {
  struct Entry {
    std::size_t iw = 0;   // index of w in values
    std::size_t iwp = 0;  // index of w' in values
    double prob = 0.0;
  };
  std::vector<double> values;
  std::vector<Entry> entries;  // sorted by (iw, iwp)
  double lambda_declared = 0.0;

  struct Atom {
    double w = 0.0;
    double wp = 0.0;
    double prob = 0.0;
  };
  // Clusters coordinates at absolute tolerance merge_tol and accumulates
  // duplicate cells.  Total mass must be 1 up to 1e-12.
  static PairLaw from_atoms(const std::vector<Atom>& raw,
                            double lambda_declared,
                            double merge_tol = 1e-12);

  double prob(std::size_t iw, std::size_t iwp) const;
  FiniteRv w_marginal() const;
  double mean_w() const;
  // max_{i,j} |P(i,j) - P(j,i)|.
  double exchangeability_defect() const;
  // max_i |P(W = v_i) - P(W' = v_i)|.
  double marginal_defect() const;
  // Throws std::logic_error when mass balance, exchangeability or the
  // zero-mean property fail beyond tolerance.
  void validate_exchangeable(double tol = 1e-12) const;
};

// Exact joint law of (W, W') where W = sum of independent coordinates and
// W' replaces a uniformly chosen coordinate by an independent copy.
// Enumerates every (configuration, index, replacement) triple; throws
// resource_error when that work exceeds work_budget.
PairLaw coordinate_resample_pair(const std::vector<FiniteRv>& rvs,
                                 std::size_t work_budget = 10'000'000);

// Same chain for n i.i.d. copies of x, computed through the exact law of
// the (n-1)-fold sum instead of configuration enumeration, so large n
// stays tractable on lattice supports.
PairLaw coordinate_resample_pair_iid(const FiniteRv& x, std::int64_t n);

// Monte Carlo version with an explicit seed; the empirical pair law puts
// mass 1/samples on each draw.
PairLaw coordinate_resample_pair_sampled(const std::vector<FiniteRv>& rvs,
                                         std::uint64_t seed,
                                         std::size_t samples);

// Fitted regression constant of E[W'|W] = (1 - lambda) W together with the
// worst conditional deviation; in_range flags lambda_hat inside (0, 1).
struct RegressionCheck {
  double lambda_hat = 0.0;
  double max_dev = 0.0;
  bool in_range = false;
};
RegressionCheck regression_check(const PairLaw& pl);

// Kolmogorov-distance bound from the pair: a conditional-variance term
// plus a third-moment term, certified against the exact distance of the W
// marginal from the standard normal.
BoundCertificate pair_bound(const PairLaw& pl);

// |E F(W, W')| for antisymmetric F; verifies antisymmetry on the support
// first (1e-12) and throws std::invalid_argument when it fails.
double antisymmetry_identity_check(
    const PairLaw& pl, const std::function<double(double, double)>& F);

// Absolute value of the three-term second-order identity for the pair:
// the generator-form term, the conditional-variance defect term and the
// Taylor remainder must cancel.  Requires the regression condition to hold
// to 1e-9.
double remainder_identity_check(const PairLaw& pl,
                                const std::function<double(double)>& f,
                                const std::function<double(double)>& fprime,
                                const std::function<double(double)>& fsecond);

// |E f(W') - E f(W)|, requiring only equal marginals (1e-12), which is
// weaker than exchangeability.
double equal_distribution_identity(const PairLaw& pl,
                                   const std::function<double(double)>& f);

}  // namespace stein

#endif  // STEINKIT_EXCHANGEABLE_PAIRS_HPP_
