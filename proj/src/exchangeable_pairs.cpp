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

#include "steinkit/exchangeable_pairs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace stein {

namespace {

// Clusters a sorted list of values at absolute tolerance tol; returns the
// canonical representative per cluster and fills index with the cluster of
// each input position.
std::vector<double> cluster_values(std::vector<double> sorted,
                                   double tol) {
  std::vector<double> reps;
  for (double v : sorted) {
    if (reps.empty() || v - reps.back() > tol)
      reps.push_back(v);
  }
  return reps;
}

std::size_t locate(const std::vector<double>& reps, double v, double tol) {
  const auto it = std::lower_bound(reps.begin(), reps.end(), v - tol);
  if (it == reps.end() || std::abs(*it - v) > tol)
    throw std::logic_error("PairLaw: value escaped its cluster");
  return static_cast<std::size_t>(it - reps.begin());
}

// Sums over groups of entries sharing the same w index.
struct ConditionalRow {
  std::size_t iw = 0;
  double prob = 0.0;        // P(W = v)
  double mean_wp = 0.0;     // E[W' ; W = v]
  double m2 = 0.0;          // E[(W'-W)^2 ; W = v]
};

std::vector<ConditionalRow> conditional_rows(const PairLaw& pl) {
  std::vector<ConditionalRow> rows;
  for (const auto& e : pl.entries) {
    if (rows.empty() || rows.back().iw != e.iw) {
      rows.push_back({e.iw, 0.0, 0.0, 0.0});
    }
    ConditionalRow& r = rows.back();
    const double w = pl.values[e.iw], wp = pl.values[e.iwp];
    r.prob += e.prob;
    r.mean_wp += e.prob * wp;
    r.m2 += e.prob * (wp - w) * (wp - w);
  }
  return rows;
}

}  // namespace

PairLaw PairLaw::from_atoms(const std::vector<Atom>& raw,
                            double lambda_declared, double merge_tol) {
  std::vector<double> coords;
  coords.reserve(raw.size() * 2);
  for (const auto& a : raw) {
    coords.push_back(a.w);
    coords.push_back(a.wp);
  }
  std::sort(coords.begin(), coords.end());
  PairLaw pl;
  pl.lambda_declared = lambda_declared;
  pl.values = cluster_values(std::move(coords), merge_tol);

  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  long double total = 0.0L;
  for (const auto& a : raw) {
    if (!(a.prob >= 0.0))
      throw std::domain_error("PairLaw: negative probability");
    if (a.prob == 0.0) continue;
    cells[{locate(pl.values, a.w, merge_tol),
           locate(pl.values, a.wp, merge_tol)}] += a.prob;
    total += a.prob;
  }
  if (std::abs(static_cast<double>(total) - 1.0) > 1e-12)
    throw std::invalid_argument("PairLaw: probabilities sum to " +
                                std::to_string(static_cast<double>(total)));
  pl.entries.reserve(cells.size());
  for (const auto& [key, prob] : cells)
    pl.entries.push_back({key.first, key.second, prob});
  return pl;
}

double PairLaw::prob(std::size_t iw, std::size_t iwp) const {
  const Entry probe{iw, iwp, 0.0};
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), probe,
      [](const Entry& a, const Entry& b) {
        return a.iw != b.iw ? a.iw < b.iw : a.iwp < b.iwp;
      });
  if (it != entries.end() && it->iw == iw && it->iwp == iwp) return it->prob;
  return 0.0;
}

FiniteRv PairLaw::w_marginal() const {
  std::vector<double> mass(values.size(), 0.0);
  for (const auto& e : entries) mass[e.iw] += e.prob;
  std::vector<FiniteRv::Atom> atoms;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mass[i] > 0.0) atoms.push_back({values[i], mass[i]});
  return FiniteRv::from_atoms(std::move(atoms));
}

double PairLaw::mean_w() const {
  long double m = 0.0L;
  for (const auto& e : entries) m += e.prob * values[e.iw];
  return static_cast<double>(m);
}

double PairLaw::exchangeability_defect() const {
  double worst = 0.0;
  for (const auto& e : entries)
    worst = std::max(worst, std::abs(e.prob - prob(e.iwp, e.iw)));
  return worst;
}

double PairLaw::marginal_defect() const {
  std::vector<double> mw(values.size(), 0.0), mwp(values.size(), 0.0);
  for (const auto& e : entries) {
    mw[e.iw] += e.prob;
    mwp[e.iwp] += e.prob;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    worst = std::max(worst, std::abs(mw[i] - mwp[i]));
  return worst;
}

void PairLaw::validate_exchangeable(double tol) const {
  long double total = 0.0L;
  for (const auto& e : entries) total += e.prob;
  if (std::abs(static_cast<double>(total) - 1.0) > tol)
    throw std::logic_error("PairLaw: mass balance failed");
  if (exchangeability_defect() > tol)
    throw std::logic_error("PairLaw: not exchangeable");
  if (std::abs(mean_w()) > 1e-10)
    throw std::logic_error("PairLaw: E W != 0");
}

PairLaw coordinate_resample_pair(const std::vector<FiniteRv>& rvs,
                                 std::size_t work_budget) {
  if (rvs.empty())
    throw std::invalid_argument("coordinate_resample_pair: no coordinates");
  const std::size_t n = rvs.size();
  std::size_t configs = 1, replacement_atoms = 0;
  for (const auto& rv : rvs) {
    rv.validate();
    if (configs > work_budget / std::max<std::size_t>(1, rv.atoms.size()))
      throw resource_error("coordinate_resample_pair: enumeration budget");
    configs *= rv.atoms.size();
    replacement_atoms += rv.atoms.size();
  }
  if (configs > work_budget / std::max<std::size_t>(1, replacement_atoms))
    throw resource_error("coordinate_resample_pair: enumeration budget");

  std::vector<PairLaw::Atom> atoms;
  atoms.reserve(configs * replacement_atoms);
  std::vector<std::size_t> idx(n, 0);
  const double coord_weight = 1.0 / static_cast<double>(n);
  for (;;) {
    double prob = 1.0;
    long double w = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      prob *= rvs[i].atoms[idx[i]].prob;
      w += rvs[i].atoms[idx[i]].value;
    }
    const double wd = static_cast<double>(w);
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = rvs[i].atoms[idx[i]].value;
      for (const auto& rep : rvs[i].atoms)
        atoms.push_back({wd, wd - zi + rep.value,
                         prob * coord_weight * rep.prob});
    }
    std::size_t i = 0;
    while (i < n && ++idx[i] == rvs[i].atoms.size()) idx[i++] = 0;
    if (i == n) break;
  }
  return PairLaw::from_atoms(atoms, 1.0 / static_cast<double>(n));
}

PairLaw coordinate_resample_pair_iid(const FiniteRv& x, std::int64_t n) {
  if (n < 1)
    throw std::invalid_argument("coordinate_resample_pair_iid: n >= 1");
  x.validate();
  FiniteRv rest = FiniteRv::point_mass(0.0);
  if (n > 1)
    rest = convolve_finite(std::vector<FiniteRv>(static_cast<std::size_t>(n - 1), x));
  // W = rest + X_I, W' = rest + replacement; the uniformly chosen
  // coordinate is interchangeable with the last one by symmetry.
  std::vector<PairLaw::Atom> atoms;
  atoms.reserve(rest.atoms.size() * x.atoms.size() * x.atoms.size());
  for (const auto& r : rest.atoms)
    for (const auto& a : x.atoms)
      for (const auto& b : x.atoms)
        atoms.push_back(
            {r.value + a.value, r.value + b.value, r.prob * a.prob * b.prob});
  return PairLaw::from_atoms(atoms, 1.0 / static_cast<double>(n));
}

PairLaw coordinate_resample_pair_sampled(const std::vector<FiniteRv>& rvs,
                                         std::uint64_t seed,
                                         std::size_t samples) {
  if (rvs.empty() || samples == 0)
    throw std::invalid_argument("coordinate_resample_pair_sampled: bad input");
  const std::size_t n = rvs.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> coord(0, n - 1);
  const auto draw = [&](const FiniteRv& rv) {
    const double u = unif(rng);
    double cum = 0.0;
    for (const auto& a : rv.atoms) {
      cum += a.prob;
      if (u <= cum) return a.value;
    }
    return rv.atoms.back().value;
  };
  std::map<std::pair<double, double>, double> cells;
  const double weight = 1.0 / static_cast<double>(samples);
  std::vector<double> z(n);
  for (std::size_t s = 0; s < samples; ++s) {
    long double w = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = draw(rvs[i]);
      w += z[i];
    }
    const std::size_t i = coord(rng);
    const double wp = static_cast<double>(w) - z[i] + draw(rvs[i]);
    cells[{static_cast<double>(w), wp}] += weight;
  }
  std::vector<PairLaw::Atom> atoms;
  atoms.reserve(cells.size());
  for (const auto& [key, prob] : cells)
    atoms.push_back({key.first, key.second, prob});
  return PairLaw::from_atoms(atoms, 1.0 / static_cast<double>(n));
}

RegressionCheck regression_check(const PairLaw& pl) {
  const auto rows = conditional_rows(pl);
  long double slope_num = 0.0L, slope_mass = 0.0L;
  for (const auto& r : rows) {
    const double w = pl.values[r.iw];
    if (std::abs(w) <= 1e-12 || r.prob <= 0.0) continue;
    slope_num += static_cast<long double>(r.prob) * (r.mean_wp / r.prob) / w;
    slope_mass += r.prob;
  }
  if (slope_mass == 0.0L)
    throw std::invalid_argument("regression_check: all mass at w = 0");
  RegressionCheck out;
  out.lambda_hat =
      1.0 - static_cast<double>(slope_num / slope_mass);
  double dev = 0.0;
  for (const auto& r : rows) {
    if (r.prob <= 0.0) continue;
    const double w = pl.values[r.iw];
    dev = std::max(dev, std::abs(r.mean_wp / r.prob -
                                 (1.0 - out.lambda_hat) * w));
  }
  out.max_dev = dev;
  out.in_range = out.lambda_hat > 0.0 && out.lambda_hat < 1.0;
  return out;
}

BoundCertificate pair_bound(const PairLaw& pl) {
  const RegressionCheck reg = regression_check(pl);
  if (reg.max_dev > 1e-9)
    throw std::invalid_argument(
        "pair_bound: linear regression condition fails (max deviation " +
        std::to_string(reg.max_dev) + ")");
  if (!reg.in_range)
    throw std::invalid_argument("pair_bound: lambda_hat outside (0,1), got " +
                                std::to_string(reg.lambda_hat));
  const double lambda = reg.lambda_hat;

  const auto rows = conditional_rows(pl);
  long double var_defect = 0.0L;
  for (const auto& r : rows) {
    if (r.prob <= 0.0) continue;
    const double d = 1.0 - (r.m2 / r.prob) / (2.0 * lambda);
    var_defect += static_cast<long double>(r.prob) * d * d;
  }
  long double abs3 = 0.0L;
  for (const auto& e : pl.entries) {
    const double d = std::abs(pl.values[e.iw] - pl.values[e.iwp]);
    abs3 += static_cast<long double>(e.prob) * d * d * d;
  }
  const double first = 2.0 * std::sqrt(static_cast<double>(var_defect));
  const double second = std::pow(2.0 * M_PI, -0.25) *
                        std::sqrt(static_cast<double>(abs3) / lambda);

  BoundCertificate cert;
  cert.theorem = "pair_normal";
  cert.bound = first + second;
  const double exact = kolmogorov_distance_to_normal(pl.w_marginal());
  cert.exact = {exact, exact};
  cert.margin = cert.bound - exact;
  cert.components = {{"lambda", lambda},
                     {"first_term", first},
                     {"second_term", second}};
  return cert;
}

double antisymmetry_identity_check(
    const PairLaw& pl, const std::function<double(double, double)>& F) {
  for (const auto& e : pl.entries) {
    const double w = pl.values[e.iw], wp = pl.values[e.iwp];
    if (std::abs(F(w, wp) + F(wp, w)) > 1e-12)
      throw std::invalid_argument(
          "antisymmetry_identity_check: F is not antisymmetric on support");
  }
  long double ef = 0.0L;
  for (const auto& e : pl.entries)
    ef += static_cast<long double>(e.prob) *
          F(pl.values[e.iw], pl.values[e.iwp]);
  return std::abs(static_cast<double>(ef));
}

double remainder_identity_check(const PairLaw& pl,
                                const std::function<double(double)>& f,
                                const std::function<double(double)>& fprime,
                                const std::function<double(double)>& fsecond) {
  const RegressionCheck reg = regression_check(pl);
  if (reg.max_dev > 1e-9)
    throw std::invalid_argument(
        "remainder_identity_check: regression condition fails");
  const double lambda = reg.lambda_hat;

  const auto rows = conditional_rows(pl);
  long double generator_term = 0.0L, defect_term = 0.0L;
  for (const auto& r : rows) {
    if (r.prob <= 0.0) continue;
    const double w = pl.values[r.iw];
    generator_term += static_cast<long double>(r.prob) *
                      (-w * fprime(w) + fsecond(w));
    defect_term += static_cast<long double>(r.prob) *
                   ((r.m2 / r.prob) / (2.0 * lambda) - 1.0) * fsecond(w);
  }
  long double taylor = 0.0L;
  for (const auto& e : pl.entries) {
    const double w = pl.values[e.iw], wp = pl.values[e.iwp];
    const double d = wp - w;
    taylor += static_cast<long double>(e.prob) *
              (f(wp) - f(w) - d * fprime(w) - 0.5 * d * d * fsecond(w));
  }
  const long double total = -lambda * generator_term +
                            lambda * defect_term + taylor;
  return std::abs(static_cast<double>(total));
}

double equal_distribution_identity(const PairLaw& pl,
                                   const std::function<double(double)>& f) {
  if (pl.marginal_defect() > 1e-12)
    throw std::invalid_argument(
        "equal_distribution_identity: marginals differ");
  long double d = 0.0L;
  for (const auto& e : pl.entries)
    d += static_cast<long double>(e.prob) *
         (f(pl.values[e.iwp]) - f(pl.values[e.iw]));
  return std::abs(static_cast<double>(d));
}

}  // namespace stein
