//------------------------------------------------------------------------------
//
//   Copyright 2026 The divrange Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "divrange/divergence.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace divrange;

TEST_CASE("distributions are validated, not renormalised")
{
  CHECK_NOTHROW(DiscreteDistribution({0.25, 0.75}));
  CHECK_NOTHROW(DiscreteDistribution({0.0, 1.0, 0.0}));
  CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution({NAN, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<double>{}), std::invalid_argument);
  CHECK(DiscreteDistribution::binary(0.3)[0] == doctest::Approx(0.7));
}

TEST_CASE("triangle points")
{
  CHECK_NOTHROW(TrianglePoint(0.0, 0.0));
  CHECK_NOTHROW(TrianglePoint(0.2, 1.0));
  CHECK_THROWS_AS(TrianglePoint(0.6, 0.5), std::domain_error);
  CHECK_THROWS_AS(TrianglePoint(-0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(TrianglePoint(0.5, 1.5), std::domain_error);
}

TEST_CASE("boundary conventions")
{
  Generator const kl = make_power(1.0);
  Generator const rkl = make_power(0.0);
  Generator const tv = make_total_variation();
  DiscreteDistribution const P({1.0, 0.0});
  DiscreteDistribution const Q({0.5, 0.5});

  // p = 0 < q contributes q f(0); q = 0 < p contributes p f*(0).
  CHECK(divergence(kl, P, Q) == doctest::Approx(std::log(2.0)));
  CHECK(std::isinf(divergence(rkl, P, Q)));
  CHECK(std::isinf(divergence(kl, Q, P)));
  CHECK(divergence(tv, P, Q) == doctest::Approx(1.0));
  CHECK(divergence(tv, DiscreteDistribution({1.0, 0.0}), DiscreteDistribution({0.0, 1.0})) ==
        doctest::Approx(2.0));

  // Atoms empty under both distributions contribute nothing.
  DiscreteDistribution const P3({0.5, 0.5, 0.0});
  DiscreteDistribution const Q3({0.25, 0.75, 0.0});
  CHECK(divergence(kl, P3, Q3) ==
        doctest::Approx(divergence(kl, DiscreteDistribution({0.5, 0.5}),
                                   DiscreteDistribution({0.25, 0.75}))));

  CHECK_THROWS_AS(divergence(kl, P, P3), std::invalid_argument);
}

TEST_CASE("binary_divergence agrees with the general sum")
{
  std::mt19937_64                        rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Generator const                        js = make_jensen_shannon();
  for (int i = 0; i < 200; ++i)
  {
    double const p = u(rng);
    double const q = u(rng);
    CHECK(binary_divergence(js, p, q) ==
          doctest::Approx(divergence(js, DiscreteDistribution::binary(p),
                                     DiscreteDistribution::binary(q))));
  }
  // Masses near one given through their complements.
  Generator const rkl = make_power(0.0);
  double const    tiny = std::ldexp(1.0, -300);
  double const    v = binary_divergence(rkl, {1.0, tiny}, {0.5, 0.5});
  CHECK(v == doctest::Approx(0.5 * std::log(0.5 / tiny) + 0.5 * std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("a distribution is at divergence zero from itself")
{
  std::mt19937_64 rng(2);
  for (auto const &name : catalog_names())
  {
    Generator const f = parse_spec(name);
    for (int i = 0; i < 50; ++i)
    {
      DiscreteDistribution const P(oracle::random_simplex(rng, 6));
      CHECK(std::abs(divergence(f, P, P)) <= 1e-12);
    }
  }
}

TEST_CASE("conjugate generator reverses the arguments")
{
  std::mt19937_64 rng(4);
  for (auto const &name : catalog_names())
  {
    Generator const f = parse_spec(name);
    Generator const c = conjugate(f);
    for (int i = 0; i < 50; ++i)
    {
      DiscreteDistribution const P(oracle::random_simplex(rng, 4));
      DiscreteDistribution const Q(oracle::random_simplex(rng, 4));
      CHECK(oracle::close(divergence(c, P, Q), divergence(f, Q, P), 1e-10));
    }
  }
}

TEST_CASE("block mixtures are linear in the weight")
{
  std::mt19937_64                        rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Generator const                        chi2 = make_power(2.0);
  for (int i = 0; i < 100; ++i)
  {
    DiscreteDistribution const P0(oracle::random_simplex(rng, 2));
    DiscreteDistribution const Q0(oracle::random_simplex(rng, 2));
    DiscreteDistribution const P1(oracle::random_simplex(rng, 3));
    DiscreteDistribution const Q1(oracle::random_simplex(rng, 3));
    double const               a = u(rng);
    auto const [P, Q] = block_mixture(P0, Q0, P1, Q1, a);
    CHECK(P.size() == 5);
    double const expected = (1 - a) * divergence(chi2, P0, Q0) + a * divergence(chi2, P1, Q1);
    CHECK(oracle::close(divergence(chi2, P, Q), expected, 1e-10));
  }
  DiscreteDistribution const B = DiscreteDistribution::binary(0.5);
  CHECK_THROWS_AS(block_mixture(B, B, B, B, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(block_mixture(B, DiscreteDistribution({1.0}), B, B, 0.5),
                  std::invalid_argument);
}
