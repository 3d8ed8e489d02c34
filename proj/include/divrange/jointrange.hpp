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

#include <cstddef>
#include <span>
#include <vector>

namespace divrange {

/// Box [0, x_max] x [0, y_max] inside which a hull is certified.
struct Window
{
  double x_max = 20.0;
  double y_max = 20.0;
};

/// Unit recession direction.
struct Ray
{
  double dx = 0.0;
  double dy = 0.0;
};

struct LedgerEntry
{
  TrianglePoint   at;
  DivergencePoint value;
};

/// Sampled triangle points whose divergence pair has an infinite coordinate.
struct InfiniteLedger
{
  std::size_t              x_only = 0;  // D_f infinite, D_g finite
  std::size_t              y_only = 0;  // D_g infinite, D_f finite
  std::size_t              both = 0;
  std::vector<LedgerEntry> entries;

  std::size_t total() const noexcept
  {
    return x_only + y_only + both;
  }
};

/// Images of sampled triangle points. params[i] is the preimage of
/// finite_points[i].
struct PointCloud
{
  std::vector<DivergencePoint> finite_points;
  std::vector<TrianglePoint>   params;
  InfiniteLedger               ledger;
};

enum class Membership
{
  inside,
  outside,
  unknown
};

char const *to_string(Membership m) noexcept;

/**
 * Convex polygon (counterclockwise, starting at the lexicographic minimum)
 * plus a recession cone spanned by at most two unit rays. The represented
 * set is hull + cone. Immutable after construction.
 */
class ConvexRegion
{
public:
  ConvexRegion(std::vector<DivergencePoint> hull, std::vector<TrianglePoint> hull_params,
               std::vector<Ray> rays, Window window);

  std::vector<DivergencePoint> const &hull() const noexcept
  {
    return hull_;
  }
  /// Preimage of each hull vertex in the triangle.
  std::vector<TrianglePoint> const &hull_params() const noexcept
  {
    return hull_params_;
  }
  /// Extreme rays of the recession cone, ordered by angle.
  std::vector<Ray> const &rays() const noexcept
  {
    return rays_;
  }
  Window window() const noexcept
  {
    return window_;
  }

  /// Largest signed distance of pt beyond the bounding half-planes of
  /// hull + cone. Nonpositive inside.
  double margin(DivergencePoint pt) const noexcept;

  /// True when the direction (dx, dy) lies in the recession cone.
  bool cone_contains(double dx, double dy) const noexcept;

  double hull_x_min() const noexcept;
  double hull_x_max() const noexcept;

private:
  struct Facet
  {
    double nx;
    double ny;
    double c;
  };

  std::vector<DivergencePoint> hull_;
  std::vector<TrianglePoint>   hull_params_;
  std::vector<Ray>             rays_;
  Window                       window_;
  std::vector<Facet>           facets_;
};

/// Lattice {(i/n, j/n): i <= j} plus points at distance 2^-k (k <= 40) from
/// each edge of the triangle and from its corners.
std::vector<TrianglePoint> sample_triangle(int n);

PointCloud cloud_2achievable(Generator const &f, Generator const &g,
                             std::span<TrianglePoint const> pts);

/// Indices of the convex hull vertices, counterclockwise from the
/// lexicographic minimum. Points within 1e-12 cross product of a hull edge
/// are dropped. Throws std::invalid_argument on empty input.
std::vector<std::size_t> hull_indices(std::span<DivergencePoint const> points);

std::vector<DivergencePoint> hull(std::span<DivergencePoint const> points);

struct RangeOptions
{
  int    grid = 512;
  Window window{};
  /// Adds support points along hull edges until every edge is within
  /// refine_tolerance of the true boundary.
  bool   refine_boundary = true;
  /// Nonpositive selects 1e-8 * max(window).
  double refine_tolerance = 0.0;
  int    max_refine_rounds = 12;
};

struct RangeResult
{
  PointCloud   cloud;
  ConvexRegion region;
};

/// Samples the triangle, hulls the finite images inside the window and
/// attaches recession rays from the limit-ratio analysis.
RangeResult compute_range(Generator const &f, Generator const &g, RangeOptions const &options = {});

ConvexRegion joint_range(Generator const &f, Generator const &g, int n, Window window = {});

struct Envelope
{
  std::vector<double> xs;
  std::vector<double> y_lower;
  std::vector<double> y_upper;  // +inf where the vertical ray applies
};

/// Reads both hull chains at every x. Throws std::out_of_range for x
/// outside the hull's x-extent.
Envelope envelope(ConvexRegion const &region, std::span<double const> xs);

std::vector<double> lower_envelope(ConvexRegion const &region, std::span<double const> xs);
std::vector<double> upper_envelope(ConvexRegion const &region, std::span<double const> xs);

/**
 * Membership of pt in the region.
 *
 * Points within tol of hull + cone are inside. Finite points strictly inside
 * 0.9 * window that fail that test are outside; elsewhere the answer is
 * unknown. Points with an infinite coordinate are inside only when the cone
 * covers that direction.
 */
Membership contains(ConvexRegion const &region, DivergencePoint pt, double tol);

}  // namespace divrange
