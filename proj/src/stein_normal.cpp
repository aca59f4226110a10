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

#include "steinkit/stein_normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stein {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Fifth-order integral of g over one segment by three-point
// Gauss-Legendre; nodes are strictly interior, so segments split at a
// discontinuity never evaluate g on the wrong side.
long double segment_gauss(const std::function<double(double)>& g, double a,
                          double b) {
  const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  const double off = hw * std::sqrt(0.6);
  return hw / 9.0L *
         (5.0L * g(mid - off) + 8.0L * g(mid) + 5.0L * g(mid + off));
}

// Per-cell integrals of g on the grid.  Cells touched by a listed
// discontinuity are split there first, keeping the quadrature fifth-order
// piecewise.
std::vector<long double> cell_integrals(const std::function<double(double)>& g,
                                        double lo, double step,
                                        std::size_t n_nodes,
                                        const std::vector<double>& jumps) {
  std::vector<long double> cells(n_nodes > 0 ? n_nodes - 1 : 0, 0.0L);
  for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
    const double xl = lo + static_cast<double>(i) * step;
    const double xr = xl + step;
    double split = kNan;
    for (double z : jumps)
      if (z >= xl && z <= xr) split = z;
    if (std::isnan(split)) {
      cells[i] = step / 6.0L *
                 (g(xl) + 4.0L * g(xl + 0.5 * step) + g(xr));
    } else {
      if (split > xl) cells[i] += segment_gauss(g, xl, split);
      if (split < xr) cells[i] += segment_gauss(g, split, xr);
    }
  }
  return cells;
}

bool near_any(double x, const std::vector<double>& pts, double radius) {
  for (double p : pts)
    if (std::abs(x - p) <= radius) return true;
  return false;
}

// Fourth-order five-point first derivative.  offset selects the stencil
// start relative to i: -2 gives the centered stencil, 0/-4 the one-sided
// ones used next to a jump.
double five_point_deriv(const std::vector<double>& v, std::size_t i,
                        int offset, double step) {
  static const double centered[5] = {1, -8, 0, 8, -1};
  static const double forward[5] = {-25, 48, -36, 16, -3};
  static const double backward[5] = {3, -16, 36, -48, 25};
  const double* c = offset == -2 ? centered : (offset == 0 ? forward : backward);
  double num = 0.0;
  for (int k = 0; k < 5; ++k)
    num += c[k] * v[i + static_cast<std::size_t>(offset + k)];
  return num / (12.0 * step);
}

}  // namespace

DensitySpec DensitySpec::standard_normal() {
  DensitySpec d;
  d.log_density = [](double x) { return -0.5 * x * x - 0.9189385332046727; };
  d.psi = [](double x) { return -x; };
  return d;
}

double GridFunction::interpolate(double xv) const {
  if (values.empty()) throw std::logic_error("GridFunction: empty");
  if (xv <= lo) return values.front();
  if (xv >= hi) return values.back();
  const double t = (xv - lo) / step;
  const std::size_t i =
      std::min(static_cast<std::size_t>(t), values.size() - 2);
  const double frac = t - static_cast<double>(i);
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

double general_stein_apply(const DensitySpec& d, double f, double fprime,
                           double x) {
  if (!d.contains(x))
    throw std::domain_error("general_stein_apply: x outside support");
  return fprime + d.psi(x) * f;
}

double normal_stein_apply(double f, double fprime, double w) {
  return fprime - w * f;
}

double ou_generator_apply(double fprime, double fsecond, double w) {
  return -w * fprime + fsecond;
}

NormalSteinSolution solve_stein_normal(const std::function<double(double)>& h,
                                       const DensitySpec& d,
                                       const GridSpec& grid,
                                       std::optional<double> expected_h,
                                       const std::vector<double>& jumps) {
  if (!(grid.step > 0.0) || !(grid.hi > grid.lo))
    throw std::invalid_argument("solve_stein_normal: bad grid");
  const std::size_t n =
      static_cast<std::size_t>(std::llround((grid.hi - grid.lo) / grid.step)) +
      1;

  const auto density = [&](double x) { return std::exp(d.log_density(x)); };

  double eh;
  if (expected_h) {
    eh = *expected_h;
  } else {
    // Grid quadrature of h p normalized by the density mass, so an
    // unnormalized log_density is handled uniformly.  Integrability of h
    // against p is checked through finiteness of the result.
    const auto hp = [&](double x) { return h(x) * density(x); };
    const auto cells_hp = cell_integrals(hp, grid.lo, grid.step, n, jumps);
    const auto cells_p = cell_integrals(density, grid.lo, grid.step, n, {});
    long double int_hp = 0.0L, int_p = 0.0L;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      int_hp += cells_hp[i];
      int_p += cells_p[i];
    }
    if (!(static_cast<double>(int_p) > 0.0))
      throw std::domain_error("solve_stein_normal: density mass vanishes");
    eh = static_cast<double>(int_hp / int_p);
    if (!std::isfinite(eh))
      throw std::domain_error("solve_stein_normal: h not integrable");
  }

  const auto g = [&](double x) { return (h(x) - eh) * density(x); };
  const auto cells = cell_integrals(g, grid.lo, grid.step, n, jumps);

  // Prefix sums from the left and genuine suffix sums from the right; the
  // right form must not be derived from the total, or the far right tail
  // loses all relative accuracy to cancellation.
  std::vector<long double> from_left(n, 0.0L), from_right(n, 0.0L);
  for (std::size_t i = 0; i + 1 < n; ++i)
    from_left[i + 1] = from_left[i] + cells[i];
  for (std::size_t i = n - 1; i-- > 0;)
    from_right[i] = from_right[i + 1] + cells[i];

  NormalSteinSolution sol;
  sol.expected_h = eh;
  sol.f.lo = grid.lo;
  sol.f.hi = grid.lo + static_cast<double>(n - 1) * grid.step;
  sol.f.step = grid.step;
  sol.f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sol.f.x(i);
    const double p = density(x);
    // Left-integral form below zero, complementary right-integral form
    // above, keeping the numerator and p(x) on the same scale.
    const long double integral = x <= 0.0 ? from_left[i] : -from_right[i];
    sol.f.values[i] = static_cast<double>(integral / p);
  }

  // Norm estimates over the trimmed interior.
  const std::size_t first = 2, last = n - 3;
  double sup = 0.0, d1 = 0.0, d2 = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    sup = std::max(sup, std::abs(sol.f.values[i]));
    d1 = std::max(d1, std::abs(five_point_deriv(sol.f.values, i, -2, grid.step)));
    const double second = (sol.f.values[i - 1] - 2.0 * sol.f.values[i] +
                           sol.f.values[i + 1]) /
                          (grid.step * grid.step);
    d2 = std::max(d2, std::abs(second));
  }
  sol.sup_norm = sup;
  sol.deriv_norm = d1;
  sol.deriv2_norm = d2;
  return sol;
}

std::vector<double> equation_residuals(const NormalSteinSolution& sol,
                                       const DensitySpec& d,
                                       const std::function<double(double)>& h,
                                       const std::vector<double>& jumps) {
  const auto& f = sol.f;
  const std::size_t n = f.size();
  std::vector<double> res(n, kNan);
  if (n < 7) return res;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double x = f.x(i);
    // The equation itself is unusable inside the cell containing a jump.
    if (near_any(x, jumps, f.step * (1.0 + 1e-9))) continue;
    int offset = -2;
    if (near_any(x, jumps, 2.5 * f.step)) {
      // Shift to the one-sided stencil pointing away from the jump.
      double nearest = jumps.front();
      for (double j : jumps)
        if (std::abs(j - x) < std::abs(nearest - x)) nearest = j;
      offset = nearest > x ? -4 : 0;
      if ((offset == -4 && i < 4) || (offset == 0 && i + 4 >= n)) continue;
    }
    const double fp = five_point_deriv(f.values, i, offset, f.step);
    res[i] = fp + d.psi(x) * f.values[i] - (h(x) - sol.expected_h);
  }
  return res;
}

double max_equation_residual(const NormalSteinSolution& sol,
                             const DensitySpec& d,
                             const std::function<double(double)>& h,
                             const std::vector<double>& jumps) {
  double worst = 0.0;
  for (double r : equation_residuals(sol, d, h, jumps))
    if (std::isfinite(r)) worst = std::max(worst, std::abs(r));
  return worst;
}

double lyapounov_bound(const std::vector<double>& moments3, double f2norm) {
  if (!(f2norm >= 0.0))
    throw std::invalid_argument("lyapounov_bound: negative norm");
  long double s = 0.0L;
  for (double m : moments3) {
    if (!(m >= 0.0))
      throw std::invalid_argument("lyapounov_bound: negative third moment");
    s += m;
  }
  return 1.5 * static_cast<double>(s) * f2norm;
}

}  // namespace stein
