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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "steinkit/dist_core.hpp"
#include "steinkit/stein_normal.hpp"

using namespace stein;

namespace {

// Test-side composite Simpson, independent of the solver's quadrature.
double simpson(const std::function<double(double)>& g, double lo, double hi,
               int cells) {
  const double s = (hi - lo) / cells;
  long double total = 0.0L;
  for (int i = 0; i < cells; ++i) {
    const double x = lo + i * s;
    total += s / 6.0 * (g(x) + 4.0 * g(x + 0.5 * s) + g(x + s));
  }
  return static_cast<double>(total);
}

}  // namespace

TEST_CASE("characterizing operator pointwise") {
  const DensitySpec normal = DensitySpec::standard_normal();
  CHECK(general_stein_apply(normal, 1.0, 0.0, 2.0) ==
        doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(general_stein_apply(normal, 0.0, 1.0, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-15));

  DensitySpec quartic;
  quartic.log_density = [](double x) { return -std::pow(x, 4); };
  quartic.psi = [](double x) { return -4.0 * std::pow(x, 3); };
  CHECK(general_stein_apply(quartic, 1.0, 0.0, 1.0) ==
        doctest::Approx(-4.0).epsilon(1e-15));

  DensitySpec half;
  half.log_density = [](double x) { return -x; };
  half.psi = [](double) { return -1.0; };
  half.support_lo = 0.0;
  CHECK_THROWS_AS(general_stein_apply(half, 1.0, 0.0, -1.0),
                  std::domain_error);
}

TEST_CASE("normal operator kills gaussian expectations") {
  // f(w) = w: E{1 - Z^2} = 0.
  CHECK(std::abs(gauss_hermite_expect(
            [](double w) { return normal_stein_apply(w, 1.0, w); }, 20)) <
        1e-13);
  // f(w) = w^2: E{2Z - Z^3} = 0.
  CHECK(std::abs(gauss_hermite_expect(
            [](double w) { return normal_stein_apply(w * w, 2.0 * w, w); },
            20)) < 1e-13);
  // constant f.
  CHECK(std::abs(gauss_hermite_expect(
            [](double w) { return normal_stein_apply(3.7, 0.0, w); }, 20)) <
        1e-13);
}

TEST_CASE("second-order operator kills gaussian expectations") {
  CHECK(std::abs(gauss_hermite_expect(
            [](double w) {
              return ou_generator_apply(3.0 * w * w, 6.0 * w, w);
            },
            20)) < 1e-12);
  CHECK(std::abs(gauss_hermite_expect(
            [](double w) {
              return ou_generator_apply(4.0 * w * w * w, 12.0 * w * w, w);
            },
            20)) < 1e-11);
  CHECK(ou_generator_apply(2.0, 2.0, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("characterization holds for random decaying functions") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  const DensitySpec normal = DensitySpec::standard_normal();
  for (int trial = 0; trial < 50; ++trial) {
    double c[5];
    for (double& ci : c) ci = coef(rng);
    const double alpha = 0.25;
    const auto f = [&](double z) {
      const double poly = c[0] + z * (c[1] + z * (c[2] + z * (c[3] + z * c[4])));
      return poly * std::exp(-alpha * z * z);
    };
    const auto fprime = [&](double z) {
      const double poly = c[0] + z * (c[1] + z * (c[2] + z * (c[3] + z * c[4])));
      const double dpoly = c[1] + z * (2 * c[2] + z * (3 * c[3] + z * 4 * c[4]));
      return (dpoly - 2.0 * alpha * z * poly) * std::exp(-alpha * z * z);
    };
    const double defect = gauss_hermite_expect(
        [&](double z) { return general_stein_apply(normal, f(z), fprime(z), z); },
        80);
    CHECK(std::abs(defect) < 1e-8);
  }
}

TEST_CASE("equation solution for constant and linear test functions") {
  const DensitySpec normal = DensitySpec::standard_normal();
  const GridSpec grid;

  const NormalSteinSolution constant =
      solve_stein_normal([](double) { return 3.0; }, normal, grid);
  for (std::size_t i = 2; i + 2 < constant.f.size(); ++i)
    CHECK(std::abs(constant.f.values[i]) < 1e-12);

  // h(x) = x solves with the constant -1; pointwise agreement holds where
  // the dropped tail mass of the defining integral is negligible, and the
  // plugged-in equation residual vanishes everywhere on the interior.
  const NormalSteinSolution linear =
      solve_stein_normal([](double x) { return x; }, normal, grid, 0.0);
  for (std::size_t i = 0; i < linear.f.size(); ++i) {
    if (std::abs(linear.f.x(i)) > 4.5) continue;
    CHECK(linear.f.values[i] == doctest::Approx(-1.0).epsilon(1e-9));
  }
  CHECK(max_equation_residual(linear, normal, [](double x) { return x; }) <
        1e-8);
}

TEST_CASE("equation solution for the half-line indicator") {
  const DensitySpec normal = DensitySpec::standard_normal();
  const auto h = [](double x) { return x <= 0.0 ? 1.0 : 0.0; };
  const NormalSteinSolution sol =
      solve_stein_normal(h, normal, GridSpec{}, 0.5, {0.0});
  CHECK(max_equation_residual(sol, normal, h, {0.0}) < 1e-8);
  CHECK(sol.sup_norm < 2.0);
}

TEST_CASE("equation residuals for lipschitz and smooth test functions") {
  const DensitySpec normal = DensitySpec::standard_normal();
  for (const auto& h : {std::function<double(double)>([](double x) {
         return std::sin(x);
       }),
                        std::function<double(double)>([](double x) {
                          return std::tanh(x);
                        }),
                        std::function<double(double)>([](double x) {
                          return std::cos(2.0 * x) * 0.5;
                        })}) {
    const NormalSteinSolution sol = solve_stein_normal(h, normal, GridSpec{});
    CHECK(max_equation_residual(sol, normal, h) < 1e-8);
  }
  // Bounded Lipschitz sample: kinks at +-1 get the same cell treatment as
  // jumps so the finite-difference stencils stay one sided there.
  const auto clip = [](double x) { return std::min(1.0, std::max(-1.0, x)); };
  const NormalSteinSolution clipped =
      solve_stein_normal(clip, normal, GridSpec{}, std::nullopt, {-1.0, 1.0});
  CHECK(max_equation_residual(clipped, normal, clip, {-1.0, 1.0}) < 1e-8);

  // Indicator away from the origin.
  const auto ind = [](double x) { return x <= 1.3 ? 1.0 : 0.0; };
  const NormalSteinSolution sol = solve_stein_normal(
      ind, normal, GridSpec{}, std_normal_cdf(1.3), {1.3});
  CHECK(max_equation_residual(sol, normal, ind, {1.3}) < 1e-8);
}

TEST_CASE("left- and right-integral constructions agree") {
  const DensitySpec normal = DensitySpec::standard_normal();
  const auto h = [](double x) { return std::sin(x) + 0.3 * x; };
  const double eh = gauss_hermite_expect(h, 100);
  const NormalSteinSolution sol = solve_stein_normal(h, normal, GridSpec{}, eh);

  // Independent left-integral route on the region where the solver used
  // the complementary form.
  const auto phi = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  };
  for (double x : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double left = simpson(
        [&](double t) { return (h(t) - eh) * phi(t); }, -8.0, x,
        static_cast<int>((x + 8.0) * 2000));
    const double f_left = left / phi(x);
    CHECK(std::abs(f_left - sol.f.interpolate(x)) < 1e-9);
  }
}

TEST_CASE("third-moment bound arithmetic") {
  CHECK(lyapounov_bound(std::vector<double>(100, 0.001), 1.0) ==
        doctest::Approx(0.15).epsilon(1e-12));
  CHECK(lyapounov_bound({}, 5.0) == 0.0);
  CHECK(lyapounov_bound(std::vector<double>(8, 0.001), 2.0) ==
        doctest::Approx(0.024).epsilon(1e-12));
  CHECK_THROWS_AS(lyapounov_bound({-1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("third-moment bound dominates the exact error end to end") {
  // h(w) = w^3 solves with f(w) = -(w^2 + 2), so ||f''|| = 2 exactly.
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unif(0.3, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 4);
    // Centered two-point pieces a_i(+q_i), scaled to total variance one.
    std::vector<FiniteRv> parts;
    std::vector<double> raw_var(static_cast<std::size_t>(n));
    double total_var = 0.0;
    std::vector<double> hi(static_cast<std::size_t>(n)),
        phi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      hi[static_cast<std::size_t>(i)] = unif(rng);
      phi[static_cast<std::size_t>(i)] = 0.2 + 0.6 * unif(rng);
      const double a = hi[static_cast<std::size_t>(i)];
      const double p = phi[static_cast<std::size_t>(i)];
      raw_var[static_cast<std::size_t>(i)] = a * a * p / (1.0 - p);
      total_var += raw_var[static_cast<std::size_t>(i)];
    }
    const double scale = 1.0 / std::sqrt(total_var);
    std::vector<double> third;
    for (int i = 0; i < n; ++i) {
      const double p = phi[static_cast<std::size_t>(i)];
      const double up = hi[static_cast<std::size_t>(i)] * scale;
      const double down = -up * p / (1.0 - p);
      parts.push_back(FiniteRv::two_point(down, 1.0 - p, up, p));
      third.push_back(parts.back().abs_moment(3));
    }
    const FiniteRv w = convolve_finite(parts);
    CHECK(std::abs(w.variance() - 1.0) < 1e-10);
    const double exact_error = std::abs(w.moment(3));  // E h(Z) = 0
    CHECK(exact_error <= lyapounov_bound(third, 2.0) + 1e-12);
  }
}
