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
#pragma once

#include "divrange/generators.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace divrange {

/// Divergence values are nonnegative doubles where +inf is a legitimate value.
using ExtendedReal = double;

/// Sum-to-one tolerance used when validating probability vectors.
inline constexpr double kNormalizationTolerance = 1e-12;

/**
 * A finite probability vector. Construction validates that every mass is a
 * nonnegative number and that the masses sum to one within
 * kNormalizationTolerance; nothing is renormalised. Zero-mass atoms are kept.
 */
class DiscreteDistribution
{
public:
  explicit DiscreteDistribution(std::vector<double> masses);

  /// (1 - p, p)
  static DiscreteDistribution binary(double p);

  std::span<double const> masses() const noexcept
  {
    return masses_;
  }
  std::size_t size() const noexcept
  {
    return masses_.size();
  }
  double operator[](std::size_t i) const
  {
    return masses_[i];
  }

private:
  std::vector<double> masses_;
};

/// A pair (D_f, D_g).
struct DivergencePoint
{
  ExtendedReal x = 0.0;
  ExtendedReal y = 0.0;

  bool finite() const noexcept
  {
    return std::isfinite(x) && std::isfinite(y);
  }
};

/// (p, q) in the triangle 0 <= p <= q <= 1, standing for the binary pair
/// P = (1 - p, p), Q = (1 - q, q).
class TrianglePoint
{
public:
  /// Throws std::domain_error outside the triangle.
  TrianglePoint(double p, double q);

  static bool valid(double p, double q) noexcept
  {
    return p >= 0.0 && p <= q && q <= 1.0;
  }

  double p() const noexcept
  {
    return p_;
  }
  double q() const noexcept
  {
    return q_;
  }

  friend bool operator==(TrianglePoint const &, TrianglePoint const &) = default;

private:
  double p_;
  double q_;
};

/**
 * D_f(P, Q) = sum_{q_j > 0} q_j f(p_j / q_j) + f*(0) P(q = 0).
 *
 * Conventions: an atom with p_j = q_j = 0 contributes nothing, an atom with
 * q_j > 0 and p_j = 0 contributes q_j f(0), 0 * inf = 0 in the f*(0) term,
 * and any infinite summand makes the result +inf.
 *
 * Throws std::invalid_argument when the lengths differ.
 */
ExtendedReal divergence(Generator const &f, DiscreteDistribution const &P,
                        DiscreteDistribution const &Q);

DivergencePoint divergence_pair(Generator const &f, Generator const &g,
                                DiscreteDistribution const &P, DiscreteDistribution const &Q);

/// D_f((1-p, p), (1-q, q)) without building the vectors. Any p, q in [0, 1].
ExtendedReal binary_divergence(Generator const &f, double p, double q);

/// Two-atom divergence from explicit masses, so that a mass close to one can
/// be given through its tiny complement.
ExtendedReal binary_divergence(Generator const &f, std::array<double, 2> P, std::array<double, 2> Q);

DivergencePoint two_point_pair(Generator const &f, Generator const &g, TrianglePoint t);

/**
 * Places (P0, Q0) and (P1, Q1) on disjoint atom blocks and mixes them with
 * weights (1 - alpha, alpha). The result has size(P0) + size(P1) atoms and
 * satisfies D_f(P_a, Q_a) = (1 - alpha) D_f(P0, Q0) + alpha D_f(P1, Q1).
 *
 * Throws std::invalid_argument when alpha is outside [0, 1] or when P0/Q0
 * (resp. P1/Q1) differ in length.
 */
std::pair<DiscreteDistribution, DiscreteDistribution> block_mixture(
    DiscreteDistribution const &P0, DiscreteDistribution const &Q0,
    DiscreteDistribution const &P1, DiscreteDistribution const &Q1, double alpha);

}  // namespace divrange
