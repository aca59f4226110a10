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

using namespace stein;

TEST_CASE("bernoulli convolution small cases") {
  const LatticePmf fair = convolve_bernoulli({0.5, 0.5});
  REQUIRE(fair.weights.size() == 3);
  CHECK(fair.weights[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fair.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fair.weights[2] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fair.tail_mass == 0.0);

  const LatticePmf mixed = convolve_bernoulli({0.1, 0.2});
  CHECK(mixed.weights[0] == doctest::Approx(0.72).epsilon(1e-15));
  CHECK(mixed.weights[1] == doctest::Approx(0.26).epsilon(1e-15));
  CHECK(mixed.weights[2] == doctest::Approx(0.02).epsilon(1e-15));

  const LatticePmf empty = convolve_bernoulli({});
  REQUIRE(empty.weights.size() == 1);
  CHECK(empty.weights[0] == 1.0);

  CHECK_THROWS_AS(convolve_bernoulli({0.5, 1.5}), std::domain_error);
  CHECK_THROWS_AS(convolve_bernoulli({-0.1}), std::domain_error);
}

TEST_CASE("bernoulli convolution matches moments on random vectors") {
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, 200);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> p(static_cast<std::size_t>(len(rng)));
    double mean = 0.0, var = 0.0;
    for (double& pi : p) {
      pi = unif(rng);
      mean += pi;
      var += pi * (1.0 - pi);
    }
    const LatticePmf law = convolve_bernoulli(p);
    law.validate();
    CHECK(law.mean() == doctest::Approx(mean).epsilon(1e-10));
    CHECK(law.variance() == doctest::Approx(var).epsilon(1e-10));
  }
}

TEST_CASE("finite convolution exact small sums") {
  const double a = 1.0 / std::sqrt(2.0);
  const FiniteRv x = FiniteRv::symmetric(a);
  const FiniteRv sum = convolve_finite({x, x});
  REQUIRE(sum.atoms.size() == 3);
  CHECK(sum.atoms[0].value == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sum.atoms[0].prob == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sum.atoms[1].value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sum.atoms[1].prob == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sum.atoms[2].prob == doctest::Approx(0.25).epsilon(1e-15));

  const FiniteRv identity = convolve_finite({x});
  REQUIRE(identity.atoms.size() == 2);
  CHECK(identity.atoms[0].value == x.atoms[0].value);
}

TEST_CASE("99-fold two-point sum matches the binomial oracle") {
  const FiniteRv x = FiniteRv::symmetric(0.1);
  const FiniteRv sum =
      convolve_finite(std::vector<FiniteRv>(99, x));
  REQUIRE(sum.atoms.size() == 100);
  const auto weights = oracle::symmetric_binomial(99);
  for (std::size_t k = 0; k < 100; ++k) {
    const double expect_value = (2.0 * static_cast<double>(k) - 99.0) * 0.1;
    CHECK(sum.atoms[k].value ==
          doctest::Approx(expect_value).epsilon(1e-12));
    CHECK(sum.atoms[k].prob ==
          doctest::Approx(static_cast<double>(weights[k])).epsilon(1e-12));
    // Symmetry about zero.
    CHECK(sum.atoms[k].prob ==
          doctest::Approx(sum.atoms[99 - k].prob).epsilon(1e-12));
  }
}

TEST_CASE("finite convolution associativity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto random_rv = [&]() {
      std::vector<FiniteRv::Atom> atoms;
      double total = 0.0;
      const int k = 2 + static_cast<int>(rng() % 3);
      for (int i = 0; i < k; ++i) {
        atoms.push_back({unif(rng), 0.1 + (static_cast<double>(rng() % 100)) / 100.0});
        total += atoms.back().prob;
      }
      for (auto& atom : atoms) atom.prob /= total;
      return FiniteRv::from_atoms(std::move(atoms));
    };
    const FiniteRv A = random_rv(), B = random_rv(), C = random_rv();
    const FiniteRv left = convolve_finite({convolve_finite({A, B}), C});
    const FiniteRv right = convolve_finite({A, convolve_finite({B, C})});
    REQUIRE(left.atoms.size() == right.atoms.size());
    for (std::size_t i = 0; i < left.atoms.size(); ++i) {
      CHECK(left.atoms[i].value ==
            doctest::Approx(right.atoms[i].value).epsilon(1e-10));
      CHECK(left.atoms[i].prob ==
            doctest::Approx(right.atoms[i].prob).epsilon(1e-10));
    }
  }
}

TEST_CASE("finite convolution budget guard") {
  std::vector<FiniteRv::Atom> atoms;
  for (int i = 0; i < 200; ++i)
    atoms.push_back({static_cast<double>(i), 1.0 / 200.0});
  const FiniteRv wide = FiniteRv::from_atoms(std::move(atoms));
  CHECK_THROWS_AS(convolve_finite({wide, wide}, 10'000), resource_error);
}

TEST_CASE("poisson pmf recurrence and truncation") {
  const LatticePmf one = poisson_pmf(1.0);
  CHECK(one.weights[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  one.validate();

  // Truncation point: smallest J with tail below eps, from the long-double
  // recurrence.
  const LatticePmf p25 = poisson_pmf(2.5, 1e-12);
  const auto ref = oracle::poisson_pmf(2.5L, 64);
  long double cum = 0.0L;
  int minimal = 0;
  for (int j = 0; j < 64; ++j) {
    cum += ref[static_cast<std::size_t>(j)];
    if (1.0L - cum <= 1e-12L) {
      minimal = j;
      break;
    }
  }
  CHECK(minimal >= 20);
  CHECK(static_cast<int>(p25.weights.size()) - 1 >= 20);
  CHECK(p25.tail_mass <= 1e-12);
  for (std::size_t j = 0; j < p25.weights.size(); ++j)
    CHECK(p25.weights[j] ==
          doctest::Approx(static_cast<double>(ref[j])).epsilon(1e-13));

  const LatticePmf tenth = poisson_pmf(0.1);
  CHECK(tenth.weights[1] / tenth.weights[0] ==
        doctest::Approx(0.1).epsilon(1e-15));

  CHECK_THROWS_AS(poisson_pmf(0.0), std::domain_error);
  CHECK_THROWS_AS(poisson_pmf(1.0, 2.0), std::domain_error);
}

TEST_CASE("tv distance anchors") {
  const LatticePmf be = convolve_bernoulli({0.1});
  const LatticePmf po = poisson_pmf(0.1);
  const DistanceInterval d = tv_distance(be, po);
  // Three-term enumeration: the two stored points and the upper Poisson
  // tail beyond {0,1}.
  const double e = std::exp(-0.1);
  const double direct =
      0.5 * (std::abs(0.9 - e) + std::abs(0.1 - 0.1 * e) + (1.0 - e - 0.1 * e));
  CHECK(d.width() < 1e-12);
  CHECK(d.lo <= direct);
  CHECK(d.hi >= direct - 1e-15);
  CHECK(d.hi == doctest::Approx(0.0095163).epsilon(1e-4));
  CHECK(std::abs(d.hi - direct) < 1e-12);

  const DistanceInterval self = tv_distance(be, be);
  CHECK(self.lo == 0.0);
  CHECK(self.hi == 0.0);

  std::vector<double> p(50, 0.05);
  const DistanceInterval bi = tv_distance(convolve_bernoulli(p),
                                          poisson_pmf(2.5));
  CHECK(bi.hi <= 0.05);
}

TEST_CASE("tv distance is a metric on exactly supported laws") {
  std::mt19937_64 rng(99);
  auto random_law = [&](int span) {
    LatticePmf law;
    law.origin = static_cast<std::int64_t>(rng() % 4);
    double total = 0.0;
    for (int i = 0; i < span; ++i) {
      law.weights.push_back(1.0 + static_cast<double>(rng() % 1000));
      total += law.weights.back();
    }
    for (double& w : law.weights) w /= total;
    return law;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const LatticePmf P = random_law(5), Q = random_law(6), R = random_law(4);
    const double pq = tv_distance(P, Q).hi;
    const double qp = tv_distance(Q, P).hi;
    const double qr = tv_distance(Q, R).hi;
    const double pr = tv_distance(P, R).hi;
    CHECK(pq == doctest::Approx(qp).epsilon(1e-15));
    CHECK(pr <= pq + qr + 1e-14);
    CHECK(tv_distance(P, P).hi == 0.0);
    if (pq == 0.0) {
      for (std::size_t i = 0; i < P.weights.size(); ++i)
        CHECK(P.prob(P.origin + static_cast<std::int64_t>(i)) ==
              doctest::Approx(Q.prob(P.origin + static_cast<std::int64_t>(i))));
    }
  }
}

TEST_CASE("tv bracket narrows as the poisson window grows") {
  const LatticePmf be = convolve_bernoulli(std::vector<double>(20, 0.1));
  double prev_width = 1.0;
  double prev_lo = -1.0, prev_hi = 2.0;
  for (double eps : {1e-6, 1e-8, 1e-10, 1e-12}) {
    const DistanceInterval d = tv_distance(be, poisson_pmf(2.0, eps));
    CHECK(d.width() <= prev_width + 1e-15);
    CHECK(d.lo >= prev_lo - 1e-15);
    CHECK(d.hi <= prev_hi + 1e-15);
    prev_width = d.width();
    prev_lo = d.lo;
    prev_hi = d.hi;
  }
}

TEST_CASE("standard normal cdf against the series/continued-fraction oracle") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(40.0) == 1.0);
  CHECK(std_normal_cdf(1000.0) == 1.0);
  CHECK(std_normal_cdf(-40.0) == 0.0);
  CHECK(std_normal_cdf(1.0) ==
        doctest::Approx(0.8413447460685429).epsilon(1e-13));
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    const double ref = static_cast<double>(oracle::normal_cdf(x));
    CHECK(std::abs(std_normal_cdf(x) - ref) < 1e-13);
  }
}

TEST_CASE("kolmogorov distance to normal") {
  CHECK(kolmogorov_distance_to_normal(FiniteRv::point_mass(0.0)) ==
        doctest::Approx(0.5).epsilon(1e-15));

  const FiniteRv two = FiniteRv::symmetric(1.0);
  CHECK(kolmogorov_distance_to_normal(two) ==
        doctest::Approx(std_normal_cdf(1.0) - 0.5).epsilon(1e-13));

  const FiniteRv sum =
      convolve_finite(std::vector<FiniteRv>(100, FiniteRv::symmetric(0.1)));
  const double got = kolmogorov_distance_to_normal(sum);
  // Independent route: long-double binomial weights against the oracle cdf.
  const auto w = oracle::symmetric_binomial(100);
  std::vector<long double> xs(101), ws(101);
  for (int k = 0; k <= 100; ++k) {
    xs[static_cast<std::size_t>(k)] = (2.0L * k - 100.0L) * 0.1L;
    ws[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k)];
  }
  const double ref = static_cast<double>(oracle::kolmogorov_vs_normal(xs, ws));
  CHECK(got == doctest::Approx(ref).epsilon(1e-10));
  CHECK(std::abs(got - 0.0398) < 1e-4);
}

TEST_CASE("kolmogorov distance scales like the square root of n") {
  std::vector<double> values;
  for (int n : {25, 100, 400}) {
    const FiniteRv sum = convolve_finite(std::vector<FiniteRv>(
        static_cast<std::size_t>(n),
        FiniteRv::symmetric(1.0 / std::sqrt(static_cast<double>(n)))));
    values.push_back(kolmogorov_distance_to_normal(sum));
  }
  CHECK(values[1] / values[0] > 0.4);
  CHECK(values[1] / values[0] < 0.6);
  CHECK(values[2] / values[1] > 0.4);
  CHECK(values[2] / values[1] < 0.6);
}

TEST_CASE("gauss-hermite expectation") {
  CHECK(gauss_hermite_expect([](double z) { return z * z; }, 10) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gauss_hermite_expect([](double z) { return z * z * z * z; }, 10) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(gauss_hermite_expect([](double z) { return z * z * z; },
                                      10)) < 1e-12);
  CHECK(gauss_hermite_expect([](double z) { return std::pow(z, 6); }, 200) ==
        doctest::Approx(15.0).epsilon(1e-11));
  CHECK_THROWS_AS(gauss_hermite_expect([](double) { return 0.0; }, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite_expect([](double) { return 0.0; }, 201),
                  std::invalid_argument);
}
