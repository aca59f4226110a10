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

#ifndef STEINKIT_DIST_CORE_HPP_
#define STEINKIT_DIST_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "steinkit/errors.hpp"

namespace stein {

// Exact probability mass function on an integer lattice window
// [origin, origin + weights.size()).  tail_mass tracks the probability
// outside the window, so truncated laws remain certified brackets:
// sum(weights) + tail_mass == 1 up to rounding.  Finitely supported laws
// (Bernoulli convolutions) carry tail_mass == 0 and are exact everywhere,
// including the implicit zeros outside the window.
struct LatticePmf {
  std::int64_t origin = 0;
  std::vector<double> weights;
  double tail_mass = 0.0;

  // Stored weight at lattice point k; 0 outside the window.
  double prob(std::int64_t k) const;
  std::int64_t last() const {
    return origin + static_cast<std::int64_t>(weights.size()) - 1;
  }
  double mean() const;
  double variance() const;

  // Throws std::logic_error if the mass-balance or nonnegativity
  // invariants fail beyond tolerance.
  void validate(double tol = 1e-12) const;
};

// Finite-support real-valued random variable: atoms sorted by strictly
// increasing value with probabilities summing to one.
struct FiniteRv {
  struct Atom {
    double value = 0.0;
    double prob = 0.0;
  };
  std::vector<Atom> atoms;

  // Builds an atom list into a valid FiniteRv: sorts, merges values that
  // agree within merge_tol (absolute), drops zero-probability atoms, and
  // checks the invariants.
  static FiniteRv from_atoms(std::vector<Atom> raw, double merge_tol = 1e-12);
  static FiniteRv two_point(double a, double pa, double b, double pb);
  // Symmetric +-a, each with probability 1/2.
  static FiniteRv symmetric(double a);
  static FiniteRv point_mass(double v);

  double mean() const;
  double variance() const;
  // E|X - center|^k (k >= 1); center defaults to 0.
  double abs_moment(int k, double center = 0.0) const;
  double moment(int k) const;
  // P(X <= x).
  double cdf(double x) const;
  void validate(double tol = 1e-12) const;
};

// Certified bracket [lo, hi] around an exactly defined distance.  The
// width comes only from truncation tails of the compared laws.
struct DistanceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Exact law of a sum of independent Bernoulli(p_i) variables on {0..n}.
// Computed by iterated convolution in ascending index order; tail_mass 0.
// Throws std::domain_error if some p_i lies outside [0, 1].
LatticePmf convolve_bernoulli(const std::vector<double>& p);

// Exact law of a sum of independent finite-support variables.  Atom values
// are merged at absolute tolerance merge_tol.  Throws resource_error when
// an intermediate pairwise convolution would exceed pair_budget pairs.
FiniteRv convolve_finite(const std::vector<FiniteRv>& rvs,
                         std::size_t pair_budget = 10'000'000,
                         double merge_tol = 1e-12);

// Truncated Poisson(lambda) law with tail_mass <= eps.  Weights follow the
// stable ratio recurrence p(j+1) = p(j) * lambda / (j+1).
LatticePmf poisson_pmf(double lambda, double eps = 1e-12);

// Total-variation distance bracket between two lattice laws, in the
// (1/2) sum |p - q| convention.  The point value over the union of stored
// windows (implicit zeros outside) is exact up to the truncated tails;
// the bracket charges half of (tail_P + tail_Q) on each side.
DistanceInterval tv_distance(const LatticePmf& P, const LatticePmf& Q);

// Standard normal distribution function, absolute error below 1e-12.
// Evaluates 0.5 * erfc(-x / sqrt(2)); saturates exactly at |x| >= 40.
double std_normal_cdf(double x);

// Exact sup_z |F_W(z) - Phi(z)|, attained at an atom from the left or the
// right.  Requires at least one atom.
double kolmogorov_distance_to_normal(const FiniteRv& w);

// Nodes and weights for E f(Z), Z standard normal, as a quadrature rule
// exact for polynomials of degree <= 2*degree - 1.
struct GaussHermiteRule {
  std::vector<double> nodes;    // already scaled to the N(0,1) variable
  std::vector<double> weights;  // sum to 1
};
GaussHermiteRule gauss_hermite_rule(int degree);

// Quadrature estimate of E f(Z) for Z ~ N(0,1); degree in [2, 200].
double gauss_hermite_expect(const std::function<double(double)>& f,
                            int degree);

}  // namespace stein

#endif  // STEINKIT_DIST_CORE_HPP_
