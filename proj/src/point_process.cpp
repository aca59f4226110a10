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

#include "steinkit/point_process.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace stein {

namespace {

std::size_t checked_states(int site_count, int cap, std::size_t budget) {
  if (site_count < 1) throw std::invalid_argument("ground space is empty");
  if (cap < 0) throw std::invalid_argument("negative per-site cap");
  std::size_t s = 1;
  for (int i = 0; i < site_count; ++i) {
    if (s > budget / static_cast<std::size_t>(cap + 1))
      throw resource_error("process state space exceeds budget");
    s *= static_cast<std::size_t>(cap + 1);
  }
  return s;
}

// Per-site truncated Poisson weights on {0..cap} plus the site tail.
std::pair<std::vector<double>, double> site_poisson(double lambda, int cap) {
  std::vector<double> w(static_cast<std::size_t>(cap) + 1, 0.0);
  if (lambda == 0.0) {
    w[0] = 1.0;
    return {w, 0.0};
  }
  w[0] = std::exp(-lambda);
  long double mass = w[0];
  for (int k = 1; k <= cap; ++k) {
    w[static_cast<std::size_t>(k)] =
        w[static_cast<std::size_t>(k - 1)] * lambda / static_cast<double>(k);
    mass += w[static_cast<std::size_t>(k)];
  }
  return {w, std::max(0.0, static_cast<double>(1.0L - mass))};
}

}  // namespace

std::size_t ProcessLaw::index(const CountingMeasure& counts) const {
  if (counts.size() != static_cast<std::size_t>(site_count))
    throw std::invalid_argument("ProcessLaw: wrong number of sites");
  std::size_t idx = 0, radix = 1;
  for (int i = 0; i < site_count; ++i) {
    const int c = counts[static_cast<std::size_t>(i)];
    if (c < 0 || c > cap)
      throw std::out_of_range("ProcessLaw: count outside stored box");
    idx += static_cast<std::size_t>(c) * radix;
    radix *= static_cast<std::size_t>(cap + 1);
  }
  return idx;
}

CountingMeasure ProcessLaw::counts_of(std::size_t index) const {
  CountingMeasure counts(static_cast<std::size_t>(site_count));
  for (int i = 0; i < site_count; ++i) {
    counts[static_cast<std::size_t>(i)] =
        static_cast<int>(index % static_cast<std::size_t>(cap + 1));
    index /= static_cast<std::size_t>(cap + 1);
  }
  return counts;
}

double ProcessLaw::prob(const CountingMeasure& counts) const {
  for (int c : counts)
    if (c > cap) return 0.0;  // outside the stored box
  return pmf[index(counts)];
}

void ProcessLaw::validate(double tol) const {
  if (pmf.size() != checked_states(site_count, cap, SIZE_MAX))
    throw std::logic_error("ProcessLaw: pmf size mismatch");
  long double total = 0.0L;
  for (double q : pmf) {
    if (!(q >= 0.0)) throw std::logic_error("ProcessLaw: negative mass");
    total += q;
  }
  if (std::abs(static_cast<double>(total) + tail_mass - 1.0) > tol)
    throw std::logic_error("ProcessLaw: mass balance failed");
}

ProcessLaw bernoulli_process_law(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  if (n < 1 || n > 20)
    throw resource_error("bernoulli_process_law: requires 1 <= n <= 20");
  for (double pi : p)
    if (!(pi >= 0.0 && pi <= 1.0))
      throw std::domain_error("bernoulli_process_law: p outside [0,1]");
  ProcessLaw law;
  law.site_count = n;
  law.cap = 1;
  law.pmf.assign(std::size_t{1} << n, 0.0);
  for (std::size_t mask = 0; mask < law.pmf.size(); ++mask) {
    double q = 1.0;
    for (int i = 0; i < n; ++i)
      q *= (mask >> i & 1) ? p[static_cast<std::size_t>(i)]
                           : 1.0 - p[static_cast<std::size_t>(i)];
    law.pmf[mask] = q;
  }
  law.tail_mass = 0.0;
  return law;
}

int poisson_site_cap(const std::vector<double>& lambda, double tail_tol) {
  for (int cap = 1; cap <= 400; ++cap) {
    long double tail = 0.0L;
    for (double l : lambda) tail += site_poisson(l, cap).second;
    if (static_cast<double>(tail) <= tail_tol) return cap;
  }
  throw resource_error("poisson_site_cap: no cap below 400 meets tolerance");
}

ProcessLaw product_poisson_law(const std::vector<double>& lambda, int cap,
                               double tail_tol, std::size_t state_budget) {
  const int n = static_cast<int>(lambda.size());
  for (double l : lambda)
    if (!(l >= 0.0))
      throw std::domain_error("product_poisson_law: negative intensity");
  const std::size_t states = checked_states(n, cap, state_budget);

  std::vector<std::vector<double>> site(static_cast<std::size_t>(n));
  long double stored = 1.0L;
  for (int i = 0; i < n; ++i) {
    auto [w, tail] = site_poisson(lambda[static_cast<std::size_t>(i)], cap);
    site[static_cast<std::size_t>(i)] = std::move(w);
    stored *= (1.0L - tail);
  }
  const double tail_mass = std::max(0.0, static_cast<double>(1.0L - stored));
  if (tail_mass > tail_tol)
    throw std::invalid_argument(
        "product_poisson_law: aggregate tail " + std::to_string(tail_mass) +
        " exceeds tolerance; raise cap");

  ProcessLaw law;
  law.site_count = n;
  law.cap = cap;
  law.pmf.assign(states, 0.0);
  for (std::size_t idx = 0; idx < states; ++idx) {
    std::size_t rest = idx;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
      q *= site[static_cast<std::size_t>(i)]
               [rest % static_cast<std::size_t>(cap + 1)];
      rest /= static_cast<std::size_t>(cap + 1);
    }
    law.pmf[idx] = q;
  }
  law.tail_mass = tail_mass;
  return law;
}

ProcessLaw ensemble_process_law(const BernoulliEnsemble& e) {
  e.validate();
  if (!e.joint) return bernoulli_process_law(e.p);
  ProcessLaw law;
  law.site_count = static_cast<int>(e.p.size());
  law.cap = 1;
  law.pmf = *e.joint;  // bitmask layout coincides with mixed radix, cap 1
  law.tail_mass = 0.0;
  return law;
}

DistanceInterval process_tv(const ProcessLaw& P, const ProcessLaw& Q) {
  if (P.site_count != Q.site_count)
    throw std::invalid_argument("process_tv: mismatched ground spaces");
  const ProcessLaw& big = P.cap >= Q.cap ? P : Q;
  const ProcessLaw& small = P.cap >= Q.cap ? Q : P;
  long double l1 = 0.0L;
  for (std::size_t idx = 0; idx < big.states(); ++idx) {
    const CountingMeasure counts = big.counts_of(idx);
    bool in_small = true;
    for (int c : counts)
      if (c > small.cap) in_small = false;
    // Outside the smaller box the smaller law is exactly zero when its
    // tail is zero; otherwise the tail slack below covers the difference.
    const double qs = in_small ? small.pmf[small.index(counts)] : 0.0;
    l1 += std::abs(big.pmf[idx] - qs);
  }
  const double point = 0.5 * static_cast<double>(l1);
  const double slack = 0.5 * (P.tail_mass + Q.tail_mass);
  DistanceInterval d;
  d.lo = std::max(0.0, point - slack);
  d.hi = point + slack;
  return d;
}

double spatial_generator_apply(const MeasureFunction& f,
                               const CountingMeasure& xi,
                               const std::vector<double>& lambda) {
  if (xi.size() != lambda.size())
    throw std::invalid_argument("spatial_generator_apply: size mismatch");
  for (int c : xi)
    if (c < 0)
      throw std::domain_error("spatial_generator_apply: negative count");
  const double fxi = f(xi);
  long double s = 0.0L;
  CountingMeasure nb = xi;
  for (std::size_t u = 0; u < xi.size(); ++u) {
    nb[u] = xi[u] + 1;
    s += static_cast<long double>(lambda[u]) * (f(nb) - fxi);
    if (xi[u] > 0) {
      nb[u] = xi[u] - 1;
      s += static_cast<long double>(xi[u]) * (f(nb) - fxi);
    }
    nb[u] = xi[u];
  }
  return static_cast<double>(s);
}

std::size_t ProcessSteinSolution::index(const CountingMeasure& counts) const {
  std::size_t idx = 0, radix = 1;
  for (int i = 0; i < site_count; ++i) {
    const int c = counts[static_cast<std::size_t>(i)];
    if (c < 0 || c > cap)
      throw std::out_of_range("ProcessSteinSolution: count outside box");
    idx += static_cast<std::size_t>(c) * radix;
    radix *= static_cast<std::size_t>(cap + 1);
  }
  return idx;
}

double ProcessSteinSolution::value(const CountingMeasure& counts) const {
  return values[index(counts)];
}

ProcessSteinSolution solve_process_stein(const MeasureFunction& h,
                                         const std::vector<double>& lambda,
                                         int cap, std::size_t state_budget) {
  const int n = static_cast<int>(lambda.size());
  const std::size_t states = checked_states(n, cap, state_budget);

  ProcessSteinSolution sol;
  sol.site_count = n;
  sol.cap = cap;

  // Exact stationary law of the reflected box: product of renormalized
  // truncated Poissons (detailed balance holds sitewise).
  std::vector<std::vector<double>> site(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto [w, tail] = site_poisson(lambda[static_cast<std::size_t>(i)], cap);
    long double mass = 0.0L;
    for (double q : w) mass += q;
    for (double& q : w) q = static_cast<double>(q / mass);
    site[static_cast<std::size_t>(i)] = std::move(w);
  }
  sol.pi.assign(states, 0.0);
  std::vector<double> hv(states);
  long double pih = 0.0L;
  for (std::size_t idx = 0; idx < states; ++idx) {
    std::size_t rest = idx;
    double q = 1.0;
    CountingMeasure counts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      counts[static_cast<std::size_t>(i)] =
          static_cast<int>(rest % static_cast<std::size_t>(cap + 1));
      q *= site[static_cast<std::size_t>(i)]
               [static_cast<std::size_t>(counts[static_cast<std::size_t>(i)])];
      rest /= static_cast<std::size_t>(cap + 1);
    }
    sol.pi[idx] = q;
    hv[idx] = h(counts);
    pih += q * hv[idx];
  }
  sol.expected_h = static_cast<double>(pih);

  // Sparse truncated generator; solve L f = h - pi h with f grounded at
  // the empty configuration, then shift to pi f = 0.  Grounding makes the
  // reduced matrix nonsingular for this irreducible chain, and the dropped
  // equation holds automatically because pi (h - pi h) = 0.
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  trips.reserve(states * static_cast<std::size_t>(2 * n + 1));
  const auto m = static_cast<Eigen::Index>(states - 1);
  Eigen::VectorXd rhs(m);
  std::vector<std::size_t> radix(static_cast<std::size_t>(n));
  radix[0] = 1;
  for (int i = 1; i < n; ++i)
    radix[static_cast<std::size_t>(i)] =
        radix[static_cast<std::size_t>(i - 1)] *
        static_cast<std::size_t>(cap + 1);

  for (std::size_t idx = 1; idx < states; ++idx) {
    const Eigen::Index row = static_cast<Eigen::Index>(idx - 1);
    double diag = 0.0;
    std::size_t rest = idx;
    for (int i = 0; i < n; ++i) {
      const int c = static_cast<int>(rest % static_cast<std::size_t>(cap + 1));
      rest /= static_cast<std::size_t>(cap + 1);
      const double l = lambda[static_cast<std::size_t>(i)];
      if (c < cap && l > 0.0) {
        const std::size_t up = idx + radix[static_cast<std::size_t>(i)];
        trips.emplace_back(row, static_cast<Eigen::Index>(up - 1), l);
        diag -= l;
      }
      if (c > 0) {
        const std::size_t down = idx - radix[static_cast<std::size_t>(i)];
        if (down != 0)
          trips.emplace_back(row, static_cast<Eigen::Index>(down - 1),
                             static_cast<double>(c));
        diag -= static_cast<double>(c);
      }
    }
    trips.emplace_back(row, row, diag);
    rhs(row) = hv[idx] - sol.expected_h;
  }
  Eigen::SparseMatrix<double> L(m, m);
  L.setFromTriplets(trips.begin(), trips.end());
  L.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(L);
  lu.factorize(L);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_process_stein: factorization failed");
  const Eigen::VectorXd g = lu.solve(rhs);

  sol.values.assign(states, 0.0);
  for (std::size_t idx = 1; idx < states; ++idx)
    sol.values[idx] = g(static_cast<Eigen::Index>(idx - 1));
  long double shift = 0.0L;
  for (std::size_t idx = 0; idx < states; ++idx)
    shift += static_cast<long double>(sol.pi[idx]) * sol.values[idx];
  for (double& v : sol.values) v -= static_cast<double>(shift);
  return sol;
}

double generator_identity_residual(const std::vector<double>& p,
                                   const MeasureFunction& f) {
  const int n = static_cast<int>(p.size());
  if (n < 1 || n > 12)
    throw resource_error("generator_identity_residual: requires n <= 12");
  const ProcessLaw law = bernoulli_process_law(p);

  long double lhs = 0.0L, rhs = 0.0L;
  for (std::size_t mask = 0; mask < law.states(); ++mask) {
    const double q = law.pmf[mask];
    if (q == 0.0) continue;
    CountingMeasure xi = law.counts_of(mask);
    lhs += static_cast<long double>(q) * spatial_generator_apply(f, xi, p);
    for (int i = 0; i < n; ++i) {
      const int original = xi[static_cast<std::size_t>(i)];
      const auto eval = [&](int c) {
        xi[static_cast<std::size_t>(i)] = c;
        const double v = f(xi);
        xi[static_cast<std::size_t>(i)] = original;
        return v;
      };
      // Second difference across adding the compensating point at i.
      rhs += static_cast<long double>(q) * p[static_cast<std::size_t>(i)] *
             (eval(original + 1) - eval(original) - eval(1) + eval(0));
    }
  }
  return std::abs(static_cast<double>(lhs - rhs));
}

BoundCertificate independent_process_bound(const std::vector<double>& p,
                                           double tail_tol) {
  BoundCertificate cert;
  cert.theorem = "process_independent";
  long double sumsq = 0.0L, lam = 0.0L;
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0))
      throw std::domain_error("independent_process_bound: p outside [0,1]");
    sumsq += static_cast<long double>(pi) * pi;
    lam += pi;
  }
  cert.bound = static_cast<double>(sumsq);
  if (static_cast<double>(lam) == 0.0) {
    cert.exact = {0.0, 0.0};
    cert.margin = 0.0;
    cert.components = {{"bound_expectation_scale", 0.0}, {"lambda", 0.0}};
    return cert;
  }
  const int cap = poisson_site_cap(p, tail_tol);
  cert.exact = process_tv(bernoulli_process_law(p),
                          product_poisson_law(p, cap, tail_tol));
  cert.margin = cert.bound - cert.exact.hi;
  cert.components = {
      {"bound_expectation_scale", 2.0 * static_cast<double>(sumsq)},
      {"lambda", static_cast<double>(lam)}};
  return cert;
}

BoundCertificate dependent_process_bound(const BernoulliEnsemble& e,
                                         double tail_tol) {
  if (!e.joint)
    throw std::invalid_argument("dependent_process_bound: joint law required");
  if (!e.neighborhoods)
    throw std::invalid_argument(
        "dependent_process_bound: neighborhoods required");
  e.validate();
  const std::size_t n = e.p.size();
  if (n > 12)
    throw resource_error("dependent_process_bound: requires n <= 12");
  const std::vector<double>& joint = *e.joint;

  BoundCertificate cert;
  cert.theorem = "process_dependent";
  const double lambda = e.lambda();
  if (!(lambda > 0.0)) {
    cert.bound = 0.0;
    cert.exact = {0.0, 0.0};
    cert.margin = 0.0;
    cert.components = {{"bound_tv_scale", 0.0},
                       {"moment_term", 0.0},
                       {"coupling_term", 0.0}};
    return cert;
  }

  long double moment_term = 0.0L, coupling_term = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t nbhd_mask = 0;
    for (int j : (*e.neighborhoods)[i]) {
      if (j < 0 || static_cast<std::size_t>(j) >= n)
        throw std::invalid_argument("dependent_process_bound: bad neighborhood");
      nbhd_mask |= std::size_t{1} << j;
    }
    nbhd_mask |= std::size_t{1} << i;
    const std::size_t y_mask = nbhd_mask & ~(std::size_t{1} << i);

    std::vector<int> rest_bits;
    for (std::size_t j = 0; j < n; ++j)
      if (!(nbhd_mask >> j & 1)) rest_bits.push_back(static_cast<int>(j));
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
      coupling_term += std::abs(
          rest_xi[k] - static_cast<long double>(e.p[i]) * rest_prob[k]);
  }

  // Both solution norms of the process equation are capped by 2 for
  // ||h|| <= 1, independent of lambda.
  cert.bound = 2.0 * static_cast<double>(moment_term) +
               2.0 * static_cast<double>(coupling_term);
  const int cap = poisson_site_cap(e.p, tail_tol);
  const DistanceInterval tv = process_tv(
      ensemble_process_law(e), product_poisson_law(e.p, cap, tail_tol));
  cert.exact = {2.0 * tv.lo, 2.0 * tv.hi};  // expectation scale
  cert.margin = cert.bound - cert.exact.hi;
  cert.components = {{"bound_tv_scale", 0.5 * cert.bound},
                     {"tv_hi", tv.hi},
                     {"moment_term", static_cast<double>(moment_term)},
                     {"coupling_term", static_cast<double>(coupling_term)}};
  return cert;
}

}  // namespace stein
