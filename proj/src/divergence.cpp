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

#include <limits>
#include <stdexcept>
#include <string>

namespace divrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Contribution of one atom.
double atom_term(Generator const &f, double p, double q)
{
  if (q > 0.0)
  {
    if (p == 0.0)
    {
      return q * f.value_at_zero();
    }
    double const ratio = p / q;
    if (std::isinf(ratio))
    {
      return p * f.conjugate_at_zero();
    }
    return q * f.eval(ratio);
  }
  if (p == 0.0)
  {
    return 0.0;
  }
  return p * f.conjugate_at_zero();
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> masses)
  : masses_(std::move(masses))
{
  if (masses_.empty())
  {
    throw std::invalid_argument("distribution must have at least one atom");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i)
  {
    double const m = masses_[i];
    if (!(m >= 0.0) || !std::isfinite(m))
    {
      throw std::invalid_argument("mass " + std::to_string(i) + " is negative or not a number");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance)
  {
    throw std::invalid_argument("masses sum to " + std::to_string(total) + ", not 1");
  }
}

DiscreteDistribution DiscreteDistribution::binary(double p)
{
  return DiscreteDistribution({1.0 - p, p});
}

TrianglePoint::TrianglePoint(double p, double q)
  : p_(p)
  , q_(q)
{
  if (!valid(p, q))
  {
    throw std::domain_error("(" + std::to_string(p) + ", " + std::to_string(q) +
                            ") is outside the triangle 0 <= p <= q <= 1");
  }
}

ExtendedReal divergence(Generator const &f, DiscreteDistribution const &P,
                        DiscreteDistribution const &Q)
{
  if (P.size() != Q.size())
  {
    throw std::invalid_argument("distributions have different lengths (" +
                                std::to_string(P.size()) + " vs " + std::to_string(Q.size()) +
                                ")");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < P.size(); ++j)
  {
    double const term = atom_term(f, P[j], Q[j]);
    if (std::isinf(term))
    {
      return kInf;
    }
    total += term;
  }
  return total < 0.0 ? 0.0 : total;
}

DivergencePoint divergence_pair(Generator const &f, Generator const &g,
                                DiscreteDistribution const &P, DiscreteDistribution const &Q)
{
  return {divergence(f, P, Q), divergence(g, P, Q)};
}

ExtendedReal binary_divergence(Generator const &f, double p, double q)
{
  return binary_divergence(f, {1.0 - p, p}, {1.0 - q, q});
}

ExtendedReal binary_divergence(Generator const &f, std::array<double, 2> P, std::array<double, 2> Q)
{
  double const a = atom_term(f, P[0], Q[0]);
  double const b = atom_term(f, P[1], Q[1]);
  if (std::isinf(a) || std::isinf(b))
  {
    return kInf;
  }
  double const total = a + b;
  return total < 0.0 ? 0.0 : total;
}

DivergencePoint two_point_pair(Generator const &f, Generator const &g, TrianglePoint t)
{
  return {binary_divergence(f, t.p(), t.q()), binary_divergence(g, t.p(), t.q())};
}

std::pair<DiscreteDistribution, DiscreteDistribution> block_mixture(
    DiscreteDistribution const &P0, DiscreteDistribution const &Q0,
    DiscreteDistribution const &P1, DiscreteDistribution const &Q1, double alpha)
{
  if (!(alpha >= 0.0 && alpha <= 1.0))
  {
    throw std::invalid_argument("mixture weight must lie in [0, 1]");
  }
  if (P0.size() != Q0.size() || P1.size() != Q1.size())
  {
    throw std::invalid_argument("mixture blocks must pair distributions of equal length");
  }

  auto assemble = [alpha](DiscreteDistribution const &first, DiscreteDistribution const &second) {
    std::vector<double> masses;
    masses.reserve(first.size() + second.size());
    for (double m : first.masses())
    {
      masses.push_back((1.0 - alpha) * m);
    }
    for (double m : second.masses())
    {
      masses.push_back(alpha * m);
    }
    return DiscreteDistribution(std::move(masses));
  };
  return {assemble(P0, P1), assemble(Q0, Q1)};
}

}  // namespace divrange
