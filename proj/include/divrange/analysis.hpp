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

#include "divrange/divergence.hpp"
#include "divrange/generators.hpp"
#include "divrange/jointrange.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace divrange {

// Differential analysis on the triangle ---------------------------------------

enum class DerivativeMode
{
  automatic,          // closed form when both generators provide deriv1
  finite_difference,  // central differences
  closed_form         // throws std::logic_error if a derivative is missing
};

/// Partial derivatives of (D_f, D_g) at (p, q) for P = (1-p, p), Q = (1-q, q).
struct Partials
{
  double df_dp = 0.0;
  double df_dq = 0.0;
  double dg_dp = 0.0;
  double dg_dq = 0.0;
};

/// Requires 0 < p < q < 1, otherwise std::domain_error. The central
/// difference step is min(h, half the distance to the triangle's boundary).
Partials two_point_partials(Generator const &f, Generator const &g, TrianglePoint t,
                            double h = 1e-6, DerivativeMode mode = DerivativeMode::automatic);

/// df_dp * dg_dq - dg_dp * df_dq
double jacobian_det(Generator const &f, Generator const &g, TrianglePoint t, double h = 1e-6,
                    DerivativeMode mode = DerivativeMode::automatic);

struct SingularPoint
{
  TrianglePoint at;
  int           component = 0;
};

/**
 * Zero set of the Jacobian determinant in the open triangle.
 *
 * The determinant is sampled on an n x n interior grid; every grid edge
 * with a sign change is bisected until the bracket is narrower than tol.
 * Points are tagged by connected component of the grid cells they came from.
 */
std::vector<SingularPoint> singular_locus(Generator const &f, Generator const &g, int n,
                                          double tol = 1e-10);

// Asymptotics -----------------------------------------------------------------

/// Tail estimates of liminf/limsup of g(t)/f(t) as t -> 0 and t -> inf.
/// A value of +inf means the ratio diverges; 0 means it vanishes.
struct LimitRatios
{
  double beta0_at_zero = 0.0;
  double beta0_at_inf = 0.0;
  double gamma0_at_zero = 0.0;
  double gamma0_at_inf = 0.0;

  bool f_zero_infinite = false;
  bool f_conj_infinite = false;
  bool g_zero_infinite = false;
  bool g_conj_infinite = false;

  /// Too few usable samples at that end (f vanishing in the tail).
  bool indeterminate_at_zero = false;
  bool indeterminate_at_inf = false;
};

/**
 * Samples g/f at t = 2^-k and t = 2^k for k = 1..60 and summarises the last
 * ten usable samples. A strictly monotone tail is declared divergent when it
 * passes 1e12 or its steps stop shrinking (last step >= 0.9 x first step),
 * which catches logarithmic growth; the same test on the reciprocal detects
 * a ratio tending to zero.
 */
LimitRatios limit_ratios(Generator const &f, Generator const &g);

/// Extreme rays of the recession cone certified by the limit ratios: an end
/// contributes the slopes of its ratio limit points when f or g is infinite
/// there.
std::vector<Ray> recession_rays(LimitRatios const &ratios);

/// A beta > 0 with D_g >= beta D_f for all P, Q when both tail liminfs are
/// positive, otherwise empty. Throws std::domain_error when f or g is not
/// twice differentiable with positive curvature at 1.
std::optional<double> ratio_bound_exists(Generator const &f, Generator const &g);

/// Binary pair maximising D_g - gamma D_f over a grid whose coordinates reach
/// 2^-1022 from both 0 and 1. Coordinates near 1 are carried by their
/// complement, so P and Q hold the exact masses while `at` is their rounding.
struct ExcessWitness
{
  TrianglePoint        at{0.0, 0.0};
  DiscreteDistribution P{std::vector<double>{1.0, 0.0}};
  DiscreteDistribution Q{std::vector<double>{1.0, 0.0}};
  DivergencePoint      value;
  double               excess = 0.0;
};

ExcessWitness excess_witness(Generator const &f, Generator const &g, double gamma);

// Constructive achievability --------------------------------------------------

/// Two binary pairs and a weight whose block mixture realises a target.
struct MixturePair
{
  TrianglePoint        t1{0.0, 0.0};
  TrianglePoint        t2{0.0, 0.0};
  double               alpha = 1.0;  // weight of t1
  DiscreteDistribution P{std::vector<double>{1.0}};
  DiscreteDistribution Q{std::vector<double>{1.0}};
  DivergencePoint      achieved;
  double               residual = 0.0;
};

class AchieveError : public std::runtime_error
{
public:
  AchieveError(std::string const &what, double best_residual);

  double best_residual() const noexcept
  {
    return best_residual_;
  }

private:
  double best_residual_;
};

/**
 * Finds t1, t2 in the triangle and alpha in [0, 1] such that
 * alpha F(t1) + (1 - alpha) F(t2) is within tol of target, then assembles
 * the 4-atom pair and re-evaluates it directly.
 *
 * Throws std::invalid_argument when target is not finite or not inside the
 * region, and AchieveError when the residual cannot be brought below tol.
 */
MixturePair achieve(Generator const &f, Generator const &g, RangeResult const &range,
                    DivergencePoint target, double tol);

// Monte Carlo verification ----------------------------------------------------

/// Uniform point of the (d-1)-simplex from normalised unit exponentials,
/// drawn from the substream (seed, stream).
DiscreteDistribution sample_simplex(std::size_t d, std::uint64_t seed, std::uint64_t stream);

struct MembershipReport
{
  std::size_t inside = 0;
  std::size_t outside = 0;
  std::size_t unknown = 0;
  std::size_t infinite = 0;
  /// Largest margin among finite pairs inside 0.9 * window (positive means
  /// beyond the region); -inf when there is none.
  double worst_margin = 0.0;
};

/// Draws trials pairs (P, Q) on d atoms and classifies their divergence
/// pairs against region. Trial i uses substreams (seed, 2i) and (seed, 2i+1).
MembershipReport verify_membership(Generator const &f, Generator const &g,
                                   ConvexRegion const &region, std::size_t d,
                                   std::size_t trials, std::uint64_t seed, double tol);

}  // namespace divrange
