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

#include "steinkit/generator_method.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stein {

namespace {

Eigen::MatrixXd to_eigen(const CtmcGenerator& Q) {
  const auto n = static_cast<Eigen::Index>(Q.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = Q.rates[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

// Strong connectivity of the positive-rate digraph.
bool irreducible(const CtmcGenerator& Q) {
  const std::size_t n = Q.size();
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const double r = transpose ? Q.rates[v][u] : Q.rates[u][v];
        if (u != v && r > 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
  };
  return n > 0 && reach(false) && reach(true);
}

// Enumerates the product of atom supports, invoking fn(config, prob).
template <typename Fn>
void for_each_config(const std::vector<FiniteRv>& rvs, Fn&& fn) {
  const std::size_t n = rvs.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> z(n);
  for (;;) {
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = rvs[i].atoms[idx[i]].value;
      prob *= rvs[i].atoms[idx[i]].prob;
    }
    fn(z, prob);
    std::size_t i = 0;
    while (i < n && ++idx[i] == rvs[i].atoms.size()) idx[i++] = 0;
    if (i == n) break;
  }
}

std::size_t config_count(const std::vector<FiniteRv>& rvs) {
  std::size_t c = 1;
  for (const auto& rv : rvs) {
    if (c > 1'000'000'000 / std::max<std::size_t>(1, rv.atoms.size()))
      return SIZE_MAX;
    c *= rv.atoms.size();
  }
  return c;
}

void require_standardized(const std::vector<FiniteRv>& rvs, double tol) {
  long double var = 0.0L;
  for (const auto& rv : rvs) {
    if (std::abs(rv.mean()) > tol)
      throw std::invalid_argument("coordinates must be centered");
    var += rv.variance();
  }
  if (std::abs(static_cast<double>(var) - 1.0) > tol)
    throw std::invalid_argument("coordinate variances must sum to 1");
}

}  // namespace

void CtmcGenerator::validate(double tol) const {
  if (states.size() != rates.size())
    throw std::invalid_argument("CtmcGenerator: label/rate size mismatch");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i].size() != states.size())
      throw std::invalid_argument("CtmcGenerator: rate matrix not square");
    long double row = 0.0L;
    for (std::size_t j = 0; j < rates[i].size(); ++j) {
      if (i != j && !(rates[i][j] >= 0.0))
        throw std::invalid_argument("CtmcGenerator: negative off-diagonal");
      row += rates[i][j];
    }
    if (std::abs(static_cast<double>(row)) > tol)
      throw std::invalid_argument("CtmcGenerator: row sum nonzero at state " +
                                  std::to_string(states[i]));
  }
}

std::vector<double> CtmcGenerator::apply(const std::vector<double>& f) const {
  if (f.size() != size())
    throw std::invalid_argument("CtmcGenerator::apply: size mismatch");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < size(); ++j) s += rates[i][j] * f[j];
    out[i] = static_cast<double>(s);
  }
  return out;
}

void CoordinateChainSpec::validate() const {
  if (coords.empty())
    throw std::invalid_argument("CoordinateChainSpec: no coordinates");
  for (const auto& rv : coords) rv.validate();
}

double coordinate_generator_apply(const CoordinateChainSpec& spec,
                                  const ConfigFunction& f,
                                  const std::vector<double>& z) {
  spec.validate();
  const std::size_t n = spec.n();
  if (z.size() != n)
    throw std::invalid_argument("coordinate_generator_apply: config size");
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (const auto& a : spec.coords[i].atoms)
      if (std::abs(a.value - z[i]) <= 1e-12) found = true;
    if (!found)
      throw std::domain_error(
          "coordinate_generator_apply: z[" + std::to_string(i) +
          "] is not an atom of coordinate " + std::to_string(i));
  }
  const double fz = f(z);
  long double total = 0.0L;
  std::vector<double> zi = z;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& a : spec.coords[i].atoms) {
      zi[i] = a.value;
      total += static_cast<long double>(a.prob) * (f(zi) - fz);
    }
    zi[i] = z[i];
  }
  return static_cast<double>(total) / static_cast<double>(n);
}

ProjectionExpansion projection_expansion(
    const CoordinateChainSpec& spec, const std::function<double(double)>& f,
    const std::function<double(double)>& fprime,
    const std::function<double(double)>& fsecond,
    const std::vector<double>& z) {
  spec.validate();
  require_standardized(spec.coords, 1e-10);
  const std::size_t n = spec.n();
  const ConfigFunction composed = [&](const std::vector<double>& cfg) {
    long double s = 0.0L;
    for (double v : cfg) s += v;
    return f(static_cast<double>(s));
  };

  ProjectionExpansion out;
  out.lhs =
      static_cast<double>(n) * coordinate_generator_apply(spec, composed, z);

  long double w = 0.0L, sumsq = 0.0L;
  for (double v : z) {
    w += v;
    sumsq += static_cast<long double>(v) * v;
  }
  const double gz = static_cast<double>(w);
  const double f1 = fprime(gz), f2 = fsecond(gz);

  long double rem = 0.0L;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& a : spec.coords[i].atoms) {
      const double d = a.value - z[i];
      rem += static_cast<long double>(a.prob) *
             (f(gz + d) - f(gz) - d * f1 - 0.5 * d * d * f2);
    }
  out.remainder = static_cast<double>(rem);
  out.rhs = -gz * f1 +
            0.5 * (1.0 + static_cast<double>(sumsq)) * f2 + out.remainder;
  if (std::abs(out.lhs - out.rhs) > 1e-10)
    throw std::logic_error("projection_expansion: expansion identity failed");
  return out;
}

double sum_projection_identity_residual(
    const std::vector<FiniteRv>& rvs, const std::function<double(double)>& f,
    const std::function<double(double)>& fprime,
    const std::function<double(double)>& fsecond,
    std::size_t enumeration_budget) {
  if (rvs.empty()) throw std::invalid_argument("empty coordinate list");
  require_standardized(rvs, 1e-10);
  if (config_count(rvs) > enumeration_budget)
    throw resource_error("sum_projection_identity_residual: budget exceeded");

  long double lhs = 0.0L, defect = 0.0L, remainder = 0.0L;
  for_each_config(rvs, [&](const std::vector<double>& z, double prob) {
    long double w = 0.0L, sumsq = 0.0L;
    for (double v : z) {
      w += v;
      sumsq += static_cast<long double>(v) * v;
    }
    const double gz = static_cast<double>(w);
    const double f1 = fprime(gz), f2 = fsecond(gz);
    lhs += static_cast<long double>(prob) * (gz * f1 - f2);
    defect += static_cast<long double>(prob) * (sumsq - 1.0L) * 0.5L * f2;
    long double rem = 0.0L;
    for (std::size_t i = 0; i < rvs.size(); ++i)
      for (const auto& a : rvs[i].atoms) {
        const double d = a.value - z[i];
        rem += static_cast<long double>(a.prob) *
               (f(gz + d) - f(gz) - d * f1 - 0.5 * d * d * f2);
      }
    remainder += static_cast<long double>(prob) * rem;
  });
  return std::abs(static_cast<double>(lhs - (defect + remainder)));
}

ProjectionErrorTerms projection_error_terms(
    const std::vector<FiniteRv>& rvs, const std::function<double(double)>& f,
    const std::function<double(double)>& fprime,
    const std::function<double(double)>& fsecond,
    std::size_t enumeration_budget) {
  if (rvs.empty()) throw std::invalid_argument("empty coordinate list");
  if (config_count(rvs) > enumeration_budget)
    throw resource_error("projection_error_terms: budget exceeded");
  long double defect = 0.0L, abs_rem = 0.0L;
  for_each_config(rvs, [&](const std::vector<double>& z, double prob) {
    long double w = 0.0L, sumsq = 0.0L;
    for (double v : z) {
      w += v;
      sumsq += static_cast<long double>(v) * v;
    }
    const double gz = static_cast<double>(w);
    const double f1 = fprime(gz), f2 = fsecond(gz);
    long double rem = 0.0L;
    for (std::size_t i = 0; i < rvs.size(); ++i)
      for (const auto& a : rvs[i].atoms) {
        const double d = a.value - z[i];
        rem += static_cast<long double>(a.prob) *
               (f(gz + d) - f(gz) - d * f1 - 0.5 * d * d * f2);
      }
    defect += prob * std::abs(static_cast<double>(sumsq) - 1.0);
    abs_rem += prob * std::abs(static_cast<double>(rem));
  });
  return {static_cast<double>(defect), static_cast<double>(abs_rem)};
}

CtmcGenerator immigration_death_generator(double lambda, std::int64_t N) {
  if (!(lambda > 0.0))
    throw std::domain_error("immigration_death_generator: lambda > 0 required");
  if (static_cast<double>(N) < std::ceil(lambda) + 10.0 * std::sqrt(lambda))
    throw std::invalid_argument(
        "immigration_death_generator: N must be at least ceil(lambda) + "
        "10 sqrt(lambda)");
  const std::size_t size = static_cast<std::size_t>(N) + 1;
  CtmcGenerator Q;
  Q.states.resize(size);
  Q.rates.assign(size, std::vector<double>(size, 0.0));
  for (std::size_t w = 0; w < size; ++w) {
    Q.states[w] = static_cast<std::int64_t>(w);
    double out = 0.0;
    if (w + 1 < size) {
      Q.rates[w][w + 1] = lambda;
      out += lambda;
    }
    if (w > 0) {
      Q.rates[w][w - 1] = static_cast<double>(w);
      out += static_cast<double>(w);
    }
    Q.rates[w][w] = -out;
  }
  return Q;
}

std::vector<double> stationary_law(const CtmcGenerator& Q) {
  Q.validate();
  if (!irreducible(Q))
    throw std::invalid_argument("stationary_law: generator not irreducible");
  const auto n = static_cast<Eigen::Index>(Q.size());
  // Least squares on Q^T pi = 0 stacked with the normalization row.
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = to_eigen(Q).transpose();
  A.row(n) = Eigen::RowVectorXd::Ones(n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1.0;
  Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
  std::vector<double> out(Q.size());
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = pi(i);
  return out;
}

std::vector<double> solve_poisson_equation(const CtmcGenerator& Q,
                                           const std::vector<double>& h) {
  Q.validate();
  if (h.size() != Q.size())
    throw std::invalid_argument("solve_poisson_equation: h size mismatch");
  if (!irreducible(Q))
    throw std::invalid_argument(
        "solve_poisson_equation: generator not irreducible");
  const std::vector<double> pi = stationary_law(Q);
  long double mean = 0.0L;
  for (std::size_t i = 0; i < h.size(); ++i) mean += pi[i] * h[i];

  const auto n = static_cast<Eigen::Index>(Q.size());
  Eigen::MatrixXd A(n + 1, n);
  A.topRows(n) = to_eigen(Q);
  Eigen::VectorXd b(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(n, i) = pi[static_cast<std::size_t>(i)];
    b(i) = -(h[static_cast<std::size_t>(i)] - static_cast<double>(mean));
  }
  b(n) = 0.0;
  Eigen::VectorXd f = A.colPivHouseholderQr().solve(b);
  std::vector<double> out(Q.size());
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
  return out;
}

double stationarity_check(const CtmcGenerator& Q,
                          const std::vector<double>& f) {
  const std::vector<double> pi = stationary_law(Q);
  const std::vector<double> qf = Q.apply(f);
  long double s = 0.0L;
  for (std::size_t i = 0; i < Q.size(); ++i) s += pi[i] * qf[i];
  return std::abs(static_cast<double>(s));
}

}  // namespace stein
