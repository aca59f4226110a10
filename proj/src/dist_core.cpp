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

#include "steinkit/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stein {

namespace {

double kahan_sum(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s);
}

}  // namespace

double LatticePmf::prob(std::int64_t k) const {
  if (k < origin || k > last()) return 0.0;
  return weights[static_cast<std::size_t>(k - origin)];
}

double LatticePmf::mean() const {
  long double m = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i)
    m += static_cast<long double>(origin + static_cast<std::int64_t>(i)) *
         weights[i];
  return static_cast<double>(m);
}

double LatticePmf::variance() const {
  const long double m = mean();
  long double v = 0.0L;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long double d =
        static_cast<long double>(origin + static_cast<std::int64_t>(i)) - m;
    v += d * d * weights[i];
  }
  return static_cast<double>(v);
}

void LatticePmf::validate(double tol) const {
  for (double w : weights)
    if (!(w >= 0.0))
      throw std::logic_error("LatticePmf: negative or NaN weight");
  if (!(tail_mass >= 0.0 && tail_mass <= 1.0))
    throw std::logic_error("LatticePmf: tail_mass outside [0,1]");
  const double total = kahan_sum(weights) + tail_mass;
  if (std::abs(total - 1.0) > tol)
    throw std::logic_error("LatticePmf: mass balance off by " +
                           std::to_string(total - 1.0));
}

FiniteRv FiniteRv::from_atoms(std::vector<Atom> raw, double merge_tol) {
  std::sort(raw.begin(), raw.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  FiniteRv rv;
  for (const Atom& a : raw) {
    if (!(a.prob >= 0.0))
      throw std::domain_error("FiniteRv: negative or NaN probability");
    if (!std::isfinite(a.value))
      throw std::domain_error("FiniteRv: non-finite atom value");
    if (a.prob == 0.0) continue;
    if (!rv.atoms.empty() && a.value - rv.atoms.back().value <= merge_tol) {
      // Merge into the running cluster, keeping the probability-weighted
      // mean so merged lattice points stay put.
      Atom& last = rv.atoms.back();
      const double p = last.prob + a.prob;
      last.value = (last.value * last.prob + a.value * a.prob) / p;
      last.prob = p;
    } else {
      rv.atoms.push_back(a);
    }
  }
  rv.validate();
  return rv;
}

FiniteRv FiniteRv::two_point(double a, double pa, double b, double pb) {
  return from_atoms({{a, pa}, {b, pb}});
}

FiniteRv FiniteRv::symmetric(double a) { return two_point(-a, 0.5, a, 0.5); }

FiniteRv FiniteRv::point_mass(double v) { return from_atoms({{v, 1.0}}); }

double FiniteRv::mean() const {
  long double m = 0.0L;
  for (const Atom& a : atoms) m += static_cast<long double>(a.value) * a.prob;
  return static_cast<double>(m);
}

double FiniteRv::variance() const {
  const long double m = mean();
  long double v = 0.0L;
  for (const Atom& a : atoms) {
    const long double d = a.value - m;
    v += d * d * a.prob;
  }
  return static_cast<double>(v);
}

double FiniteRv::abs_moment(int k, double center) const {
  long double m = 0.0L;
  for (const Atom& a : atoms)
    m += std::pow(std::abs(static_cast<long double>(a.value) - center), k) *
         a.prob;
  return static_cast<double>(m);
}

double FiniteRv::moment(int k) const {
  long double m = 0.0L;
  for (const Atom& a : atoms)
    m += std::pow(static_cast<long double>(a.value), k) * a.prob;
  return static_cast<double>(m);
}

double FiniteRv::cdf(double x) const {
  long double c = 0.0L;
  for (const Atom& a : atoms) {
    if (a.value > x) break;
    c += a.prob;
  }
  return static_cast<double>(c);
}

void FiniteRv::validate(double tol) const {
  if (atoms.empty()) throw std::domain_error("FiniteRv: no atoms");
  long double total = 0.0L;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].prob >= 0.0))
      throw std::domain_error("FiniteRv: negative probability");
    if (i > 0 && !(atoms[i].value > atoms[i - 1].value))
      throw std::domain_error("FiniteRv: atom values not strictly increasing");
    total += atoms[i].prob;
  }
  if (std::abs(static_cast<double>(total) - 1.0) > tol)
    throw std::domain_error("FiniteRv: probabilities sum to " +
                            std::to_string(static_cast<double>(total)));
}

LatticePmf convolve_bernoulli(const std::vector<double>& p) {
  for (double pi : p)
    if (!(pi >= 0.0 && pi <= 1.0))
      throw std::domain_error("convolve_bernoulli: p outside [0,1]");
  LatticePmf out;
  out.weights.assign(1, 1.0);
  for (double pi : p) {
    std::vector<double> next(out.weights.size() + 1, 0.0);
    for (std::size_t k = 0; k < out.weights.size(); ++k) {
      next[k] += out.weights[k] * (1.0 - pi);
      next[k + 1] += out.weights[k] * pi;
    }
    out.weights = std::move(next);
  }
  out.origin = 0;
  out.tail_mass = 0.0;
  return out;
}

FiniteRv convolve_finite(const std::vector<FiniteRv>& rvs,
                         std::size_t pair_budget, double merge_tol) {
  if (rvs.empty())
    throw std::invalid_argument("convolve_finite: empty list");
  FiniteRv acc = rvs.front();
  acc.validate();
  for (std::size_t r = 1; r < rvs.size(); ++r) {
    const FiniteRv& next = rvs[r];
    next.validate();
    const std::size_t pairs = acc.atoms.size() * next.atoms.size();
    if (pairs > pair_budget)
      throw resource_error(
          "convolve_finite: atom-pair budget exceeded (" +
          std::to_string(pairs) + " > " + std::to_string(pair_budget) +
          "); use a sampled approximation instead");
    std::vector<FiniteRv::Atom> sums;
    sums.reserve(pairs);
    for (const auto& a : acc.atoms)
      for (const auto& b : next.atoms)
        sums.push_back({a.value + b.value, a.prob * b.prob});
    acc = FiniteRv::from_atoms(std::move(sums), merge_tol);
  }
  return acc;
}

LatticePmf poisson_pmf(double lambda, double eps) {
  if (!(lambda > 0.0))
    throw std::domain_error("poisson_pmf: lambda must be positive");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::domain_error("poisson_pmf: eps must lie in (0,1)");
  LatticePmf out;
  out.origin = 0;
  // Ratio recurrence from p(0) = e^{-lambda}.  For very large rates the
  // leading term underflows, so the window is seeded at the mode from the
  // log-space formula instead; the same ratio recurrence then runs both ways.
  if (lambda <= 500.0) {
    double pj = std::exp(-lambda);
    long double cum = 0.0L;
    std::size_t j = 0;
    for (;;) {
      out.weights.push_back(pj);
      cum += pj;
      if (1.0L - cum <= eps && j >= static_cast<std::size_t>(lambda)) break;
      pj *= lambda / static_cast<double>(j + 1);
      ++j;
      if (j > 100'000'000)
        throw resource_error("poisson_pmf: window did not close");
    }
    out.tail_mass = std::max(0.0, static_cast<double>(1.0L - cum));
  } else {
    const std::int64_t mode = static_cast<std::int64_t>(lambda);
    const double log_pmode =
        mode * std::log(lambda) - lambda - std::lgamma(mode + 1.0);
    std::vector<double> down, up;
    double pj = std::exp(log_pmode);
    long double cum = 0.0L;
    // Downward from the mode until negligible.
    double q = pj;
    for (std::int64_t j = mode; j >= 0; --j) {
      down.push_back(q);
      cum += q;
      if (q < eps * 1e-3 && j < mode) break;
      q *= static_cast<double>(j) / lambda;
    }
    // Upward from the mode until the remaining mass fits in eps.
    q = pj * lambda / static_cast<double>(mode + 1);
    for (std::int64_t j = mode + 1;; ++j) {
      up.push_back(q);
      cum += q;
      if (1.0L - cum <= eps) break;
      q *= lambda / static_cast<double>(j + 1);
    }
    out.origin = mode - static_cast<std::int64_t>(down.size()) + 1;
    out.weights.assign(down.rbegin(), down.rend());
    out.weights.insert(out.weights.end(), up.begin(), up.end());
    out.tail_mass = std::max(0.0, static_cast<double>(1.0L - cum));
  }
  return out;
}

DistanceInterval tv_distance(const LatticePmf& P, const LatticePmf& Q) {
  const std::int64_t lo = std::min(P.origin, Q.origin);
  const std::int64_t hi = std::max(P.last(), Q.last());
  long double l1 = 0.0L;
  for (std::int64_t k = lo; k <= hi; ++k)
    l1 += std::abs(P.prob(k) - Q.prob(k));
  const double point = 0.5 * static_cast<double>(l1);
  const double slack = 0.5 * (P.tail_mass + Q.tail_mass);
  DistanceInterval d;
  d.lo = std::max(0.0, point - slack);
  d.hi = point + slack;
  return d;
}

double std_normal_cdf(double x) {
  if (x >= 40.0) return 1.0;
  if (x <= -40.0) return 0.0;
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double kolmogorov_distance_to_normal(const FiniteRv& w) {
  if (w.atoms.empty())
    throw std::invalid_argument("kolmogorov_distance_to_normal: no atoms");
  long double cum = 0.0L;
  double sup = 0.0;
  for (const auto& a : w.atoms) {
    const double phi = std_normal_cdf(a.value);
    // Left limit just below the atom, then the value at the atom.
    sup = std::max(sup, std::abs(static_cast<double>(cum) - phi));
    cum += a.prob;
    sup = std::max(sup, std::abs(static_cast<double>(cum) - phi));
  }
  return sup;
}

GaussHermiteRule gauss_hermite_rule(int degree) {
  if (degree < 2 || degree > 200)
    throw std::invalid_argument("gauss_hermite_rule: degree must be in [2,200]");
  // Golub-Welsch on the Jacobi matrix of the Hermite weight e^{-t^2};
  // nodes scale by sqrt(2) to the unit-variance Gaussian and weights
  // normalize by sqrt(pi).
  const int n = degree;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(i / 2.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double sqrt2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = sqrt2 * es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;  // already sums to 1 after normalization
  }
  return rule;
}

double gauss_hermite_expect(const std::function<double(double)>& f,
                            int degree) {
  const GaussHermiteRule rule = gauss_hermite_rule(degree);
  long double s = 0.0L;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += static_cast<long double>(rule.weights[i]) * f(rule.nodes[i]);
  return static_cast<double>(s);
}

}  // namespace stein
