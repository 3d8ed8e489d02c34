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

#include "divrange/jointrange.hpp"

#include "divrange/analysis.hpp"
#include "divrange/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace divrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCrossTolerance = 1e-12;
constexpr double kConeTolerance = 1e-12;
constexpr int    kEdgeRefinementDepth = 40;

double cross(DivergencePoint o, DivergencePoint a, DivergencePoint b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Collinearity is judged by the sine of the turn so tiny edges near the
// corners of the range keep their vertices.
bool turns_left(DivergencePoint o, DivergencePoint a, DivergencePoint b)
{
  double const scale = std::hypot(a.x - o.x, a.y - o.y) * std::hypot(b.x - o.x, b.y - o.y);
  return cross(o, a, b) > kCrossTolerance * scale;
}

bool lex_less(DivergencePoint a, DivergencePoint b)
{
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace

char const *to_string(Membership m) noexcept
{
  switch (m)
  {
  case Membership::inside:
    return "inside";
  case Membership::outside:
    return "outside";
  case Membership::unknown:
    return "unknown";
  }
  return "unknown";
}

// ConvexRegion ----------------------------------------------------------------

ConvexRegion::ConvexRegion(std::vector<DivergencePoint> hull, std::vector<TrianglePoint> hull_params,
                           std::vector<Ray> rays, Window window)
  : hull_(std::move(hull))
  , hull_params_(std::move(hull_params))
  , rays_(std::move(rays))
  , window_(window)
{
  if (hull_.empty())
  {
    throw std::invalid_argument("a region needs at least one hull vertex");
  }
  if (hull_params_.size() != hull_.size())
  {
    throw std::invalid_argument("every hull vertex needs a preimage");
  }
  if (rays_.size() > 2)
  {
    throw std::invalid_argument("a recession cone is spanned by at most two rays");
  }
  std::sort(rays_.begin(), rays_.end(), [](Ray a, Ray b) {
    return std::atan2(a.dy, a.dx) < std::atan2(b.dy, b.dx);
  });

  std::vector<Facet> candidates;
  std::size_t const  n = hull_.size();
  if (n >= 3)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      DivergencePoint const a = hull_[i];
      DivergencePoint const b = hull_[(i + 1) % n];
      double const          dx = b.x - a.x;
      double const          dy = b.y - a.y;
      double const          len = std::hypot(dx, dy);
      double const          nx = dy / len;
      double const          ny = -dx / len;
      candidates.push_back({nx, ny, nx * a.x + ny * a.y});
    }
  }
  else if (n == 2)
  {
    DivergencePoint const a = hull_[0];
    DivergencePoint const b = hull_[1];
    double const          len = std::hypot(b.x - a.x, b.y - a.y);
    double const          ux = (b.x - a.x) / len;
    double const          uy = (b.y - a.y) / len;
    candidates.push_back({uy, -ux, uy * a.x - ux * a.y});
    candidates.push_back({-uy, ux, -uy * a.x + ux * a.y});
    candidates.push_back({ux, uy, ux * b.x + uy * b.y});
    candidates.push_back({-ux, -uy, -ux * a.x - uy * a.y});
  }
  else
  {
    DivergencePoint const v = hull_[0];
    candidates.push_back({1.0, 0.0, v.x});
    candidates.push_back({-1.0, 0.0, -v.x});
    candidates.push_back({0.0, 1.0, v.y});
    candidates.push_back({0.0, -1.0, -v.y});
  }

  // hull + cone is cut out by the hull facets whose normals lie in the polar
  // cone, plus the polar cone's boundary normals at their support values.
  auto in_polar = [this](double nx, double ny) {
    return std::all_of(rays_.begin(), rays_.end(),
                       [&](Ray r) { return nx * r.dx + ny * r.dy <= kConeTolerance; });
  };
  for (Facet const &facet : candidates)
  {
    if (in_polar(facet.nx, facet.ny))
    {
      facets_.push_back(facet);
    }
  }
  for (Ray const &r : rays_)
  {
    for (double sign : {1.0, -1.0})
    {
      double const nx = sign * r.dy;
      double const ny = -sign * r.dx;
      if (!in_polar(nx, ny))
      {
        continue;
      }
      double support = -kInf;
      for (DivergencePoint const &v : hull_)
      {
        support = std::max(support, nx * v.x + ny * v.y);
      }
      facets_.push_back({nx, ny, support});
    }
  }
}

double ConvexRegion::margin(DivergencePoint pt) const noexcept
{
  double worst = -kInf;
  for (Facet const &facet : facets_)
  {
    worst = std::max(worst, facet.nx * pt.x + facet.ny * pt.y - facet.c);
  }
  return worst;
}

bool ConvexRegion::cone_contains(double dx, double dy) const noexcept
{
  if (rays_.empty())
  {
    return false;
  }
  double const angle = std::atan2(dy, dx);
  double const lo = std::atan2(rays_.front().dy, rays_.front().dx);
  double const hi = std::atan2(rays_.back().dy, rays_.back().dx);
  return angle >= lo - kConeTolerance && angle <= hi + kConeTolerance;
}

double ConvexRegion::hull_x_min() const noexcept
{
  double lo = kInf;
  for (auto const &v : hull_)
  {
    lo = std::min(lo, v.x);
  }
  return lo;
}

double ConvexRegion::hull_x_max() const noexcept
{
  double hi = -kInf;
  for (auto const &v : hull_)
  {
    hi = std::max(hi, v.x);
  }
  return hi;
}

// Sampling --------------------------------------------------------------------

std::vector<TrianglePoint> sample_triangle(int n)
{
  if (n < 2)
  {
    throw std::invalid_argument("triangle grid needs n >= 2");
  }
  auto const                 size = static_cast<std::size_t>(n);
  std::vector<TrianglePoint> pts;
  pts.reserve((size + 1) * (size + 2) / 2 + 3 * kEdgeRefinementDepth * (size + 1) +
              3 * kEdgeRefinementDepth * kEdgeRefinementDepth);

  auto coord = [n](int j) { return static_cast<double>(j) / n; };

  for (int j = 0; j <= n; ++j)
  {
    for (int i = 0; i <= j; ++i)
    {
      pts.emplace_back(coord(i), coord(j));
    }
  }

  for (int k = 1; k <= kEdgeRefinementDepth; ++k)
  {
    double const eps = std::ldexp(1.0, -k);
    for (int j = 0; j <= n; ++j)
    {
      double const c = coord(j);
      if (eps <= c)
      {
        pts.emplace_back(eps, c);  // near p = 0
      }
      if (c <= 1.0 - eps)
      {
        pts.emplace_back(c, 1.0 - eps);  // near q = 1
        pts.emplace_back(c, c + eps);    // near p = q
      }
    }
    // On the edges themselves, close to the corners.
    pts.emplace_back(0.0, eps);
    pts.emplace_back(1.0 - eps, 1.0);
  }

  // Corner refinement: both coordinates geometrically close to a corner.
  for (int k = 1; k <= kEdgeRefinementDepth; ++k)
  {
    double const a = std::ldexp(1.0, -k);
    for (int m = 1; m <= kEdgeRefinementDepth; ++m)
    {
      double const b = std::ldexp(1.0, -m);
      pts.emplace_back(a, 1.0 - b);  // corner (0, 1)
      if (m < k)
      {
        pts.emplace_back(a, b);              // corner (0, 0)
        pts.emplace_back(1.0 - b, 1.0 - a);  // corner (1, 1)
      }
    }
  }
  return pts;
}

PointCloud cloud_2achievable(Generator const &f, Generator const &g,
                             std::span<TrianglePoint const> pts)
{
  std::vector<DivergencePoint> values(pts.size());
  parallel_for(pts.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
    {
      values[i] = two_point_pair(f, g, pts[i]);
    }
  });

  PointCloud cloud;
  cloud.finite_points.reserve(pts.size());
  cloud.params.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
  {
    DivergencePoint const v = values[i];
    if (v.finite())
    {
      cloud.finite_points.push_back(v);
      cloud.params.push_back(pts[i]);
      continue;
    }
    bool const xi = std::isinf(v.x);
    bool const yi = std::isinf(v.y);
    if (xi && yi)
    {
      ++cloud.ledger.both;
    }
    else if (xi)
    {
      ++cloud.ledger.x_only;
    }
    else
    {
      ++cloud.ledger.y_only;
    }
    cloud.ledger.entries.push_back({pts[i], v});
  }
  return cloud;
}

// Hull ------------------------------------------------------------------------

std::vector<std::size_t> hull_indices(std::span<DivergencePoint const> points)
{
  if (points.empty())
  {
    throw std::invalid_argument("hull of an empty point set");
  }
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i)
  {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(points[a], points[b]) || (!lex_less(points[b], points[a]) && a < b);
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return points[a].x == points[b].x && points[a].y == points[b].y;
                          }),
              order.end());

  if (order.size() == 1)
  {
    return order;
  }

  std::vector<std::size_t> chain(2 * order.size());
  std::size_t              k = 0;
  for (std::size_t i : order)
  {
    while (k >= 2 && !turns_left(points[chain[k - 2]], points[chain[k - 1]], points[i]))
    {
      --k;
    }
    chain[k++] = i;
  }
  std::size_t const lower_size = k + 1;
  for (auto it = order.rbegin() + 1; it != order.rend(); ++it)
  {
    while (k >= lower_size &&
           !turns_left(points[chain[k - 2]], points[chain[k - 1]], points[*it]))
    {
      --k;
    }
    chain[k++] = *it;
  }
  chain.resize(k - 1);
  if (chain.size() == 2 && points[chain[0]].x == points[chain[1]].x &&
      points[chain[0]].y == points[chain[1]].y)
  {
    chain.resize(1);
  }
  return chain;
}

std::vector<DivergencePoint> hull(std::span<DivergencePoint const> points)
{
  std::vector<DivergencePoint> out;
  for (std::size_t i : hull_indices(points))
  {
    out.push_back(points[i]);
  }
  return out;
}

// Boundary refinement ---------------------------------------------------------

namespace {

struct Probe
{
  double          value = -kInf;
  double          p = 0.0;
  double          q = 0.0;
  DivergencePoint point;
};

void project_to_triangle(double &p, double &q)
{
  p = std::clamp(p, 0.0, 1.0);
  q = std::clamp(q, 0.0, 1.0);
  if (p > q)
  {
    double const m = 0.5 * (p + q);
    p = m;
    q = m;
  }
}

// Compass search for the maximum of n . F(p, q) over the triangle, restricted
// to images inside the window, starting near the preimages of an edge.
Probe support_search(Generator const &f, Generator const &g, double nx, double ny,
                     TrianglePoint a, TrianglePoint b, Window window)
{
  auto evaluate = [&](double p, double q) {
    Probe probe;
    probe.p = p;
    probe.q = q;
    probe.point = {binary_divergence(f, p, q), binary_divergence(g, p, q)};
    if (probe.point.finite() && probe.point.x <= window.x_max && probe.point.y <= window.y_max)
    {
      probe.value = nx * probe.point.x + ny * probe.point.y;
    }
    return probe;
  };

  Probe best = evaluate(a.p(), a.q());
  for (double w : {0.25, 0.5, 0.75, 1.0})
  {
    double p = a.p() + w * (b.p() - a.p());
    double q = a.q() + w * (b.q() - a.q());
    project_to_triangle(p, q);
    Probe const probe = evaluate(p, q);
    if (probe.value > best.value)
    {
      best = probe;
    }
  }
  if (!std::isfinite(best.value))
  {
    return best;
  }

  static constexpr double kDiag = std::numbers::sqrt2 / 2.0;
  static constexpr std::array<std::array<double, 2>, 8> kDirections{{{1.0, 0.0},
                                                                      {-1.0, 0.0},
                                                                      {0.0, 1.0},
                                                                      {0.0, -1.0},
                                                                      {kDiag, kDiag},
                                                                      {-kDiag, -kDiag},
                                                                      {kDiag, -kDiag},
                                                                      {-kDiag, kDiag}}};

  double step = std::clamp(std::hypot(a.p() - b.p(), a.q() - b.q()), 1e-9, 0.25);
  int    evaluations = 0;
  while (step > 1e-16 && evaluations < 4000)
  {
    bool moved = false;
    for (auto const &d : kDirections)
    {
      double p = best.p + step * d[0];
      double q = best.q + step * d[1];
      project_to_triangle(p, q);
      ++evaluations;
      Probe const probe = evaluate(p, q);
      if (probe.value > best.value)
      {
        best = probe;
        moved = true;
        break;
      }
    }
    if (!moved)
    {
      step *= 0.5;
    }
  }
  return best;
}

using EdgeKey = std::array<double, 4>;

}  // namespace

RangeResult compute_range(Generator const &f, Generator const &g, RangeOptions const &options)
{
  Window const window = options.window;
  if (!(window.x_max > 0.0) || !(window.y_max > 0.0))
  {
    throw std::invalid_argument("window must be positive");
  }

  std::vector<TrianglePoint> const samples = sample_triangle(options.grid);
  PointCloud                       cloud = cloud_2achievable(f, g, samples);

  std::vector<DivergencePoint> work;
  std::vector<TrianglePoint>   work_params;
  for (std::size_t i = 0; i < cloud.finite_points.size(); ++i)
  {
    DivergencePoint const v = cloud.finite_points[i];
    if (v.x <= window.x_max && v.y <= window.y_max)
    {
      work.push_back(v);
      work_params.push_back(cloud.params[i]);
    }
  }
  if (work.empty())
  {
    throw std::runtime_error("no finite divergence pair inside the window");
  }

  std::vector<std::size_t> idx = hull_indices(work);

  if (options.refine_boundary)
  {
    double const tolerance = options.refine_tolerance > 0.0
                                 ? options.refine_tolerance
                                 : 1e-8 * std::max(window.x_max, window.y_max);
    std::set<EdgeKey> checked;

    for (int round = 0; round < options.max_refine_rounds && idx.size() >= 3; ++round)
    {
      // Later rounds only need the current vertices plus new points.
      std::vector<DivergencePoint> verts;
      std::vector<TrianglePoint>   vert_params;
      for (std::size_t i : idx)
      {
        verts.push_back(work[i]);
        vert_params.push_back(work_params[i]);
      }
      work = std::move(verts);
      work_params = std::move(vert_params);

      struct Job
      {
        std::size_t a;
        std::size_t b;
      };
      std::vector<Job> jobs;
      std::size_t const n = work.size();
      for (std::size_t i = 0; i < n; ++i)
      {
        std::size_t const j = (i + 1) % n;
        EdgeKey const     key{work_params[i].p(), work_params[i].q(), work_params[j].p(),
                          work_params[j].q()};
        if (checked.insert(key).second)
        {
          jobs.push_back({i, j});
        }
      }
      if (jobs.empty())
      {
        break;
      }

      std::vector<Probe> found(jobs.size());
      std::vector<char>  accept(jobs.size(), 0);
      parallel_for(jobs.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
        {
          DivergencePoint const a = work[jobs[k].a];
          DivergencePoint const b = work[jobs[k].b];
          double const          len = std::hypot(b.x - a.x, b.y - a.y);
          if (len == 0.0)
          {
            continue;
          }
          double const nx = (b.y - a.y) / len;
          double const ny = -(b.x - a.x) / len;
          Probe const  probe = support_search(f, g, nx, ny, work_params[jobs[k].a],
                                              work_params[jobs[k].b], window);
          if (probe.value - (nx * a.x + ny * a.y) > tolerance)
          {
            found[k] = probe;
            accept[k] = 1;
          }
        }
      });

      bool added = false;
      for (std::size_t k = 0; k < jobs.size(); ++k)
      {
        if (accept[k])
        {
          work.push_back(found[k].point);
          work_params.emplace_back(found[k].p, found[k].q);
          cloud.finite_points.push_back(found[k].point);
          cloud.params.emplace_back(found[k].p, found[k].q);
          added = true;
        }
      }
      idx = hull_indices(work);
      if (!added)
      {
        break;
      }
    }
  }

  std::vector<DivergencePoint> hull_points;
  std::vector<TrianglePoint>   hull_params;
  for (std::size_t i : idx)
  {
    hull_points.push_back(work[i]);
    hull_params.push_back(work_params[i]);
  }

  std::vector<Ray> rays = recession_rays(limit_ratios(f, g));
  return {std::move(cloud),
          ConvexRegion(std::move(hull_points), std::move(hull_params), std::move(rays), window)};
}

ConvexRegion joint_range(Generator const &f, Generator const &g, int n, Window window)
{
  RangeOptions options;
  options.grid = n;
  options.window = window;
  return compute_range(f, g, options).region;
}

// Envelopes -------------------------------------------------------------------

namespace {

// Minimum and maximum of the hull's vertical section at x.
std::pair<double, double> section(ConvexRegion const &region, double x)
{
  auto const &h = region.hull();
  double const slack = 1e-12 * std::max(1.0, std::abs(x));
  double       lo = kInf;
  double       hi = -kInf;

  auto visit = [&](DivergencePoint a, DivergencePoint b) {
    double const left = std::min(a.x, b.x);
    double const right = std::max(a.x, b.x);
    if (x < left - slack || x > right + slack)
    {
      return;
    }
    if (right - left <= slack)
    {
      lo = std::min({lo, a.y, b.y});
      hi = std::max({hi, a.y, b.y});
      return;
    }
    double const xc = std::clamp(x, left, right);
    double const y = a.y + (xc - a.x) * (b.y - a.y) / (b.x - a.x);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  };

  if (h.size() == 1)
  {
    visit(h[0], h[0]);
  }
  else
  {
    for (std::size_t i = 0; i < h.size(); ++i)
    {
      visit(h[i], h[(i + 1) % h.size()]);
    }
  }
  if (lo > hi)
  {
    throw std::out_of_range("x = " + std::to_string(x) + " is outside the hull's x-extent");
  }
  return {lo, hi};
}

}  // namespace

Envelope envelope(ConvexRegion const &region, std::span<double const> xs)
{
  Envelope   env;
  bool const vertical = region.cone_contains(0.0, 1.0);
  for (double x : xs)
  {
    auto const [lo, hi] = section(region, x);
    env.xs.push_back(x);
    env.y_lower.push_back(lo);
    env.y_upper.push_back(vertical ? kInf : hi);
  }
  return env;
}

std::vector<double> lower_envelope(ConvexRegion const &region, std::span<double const> xs)
{
  return envelope(region, xs).y_lower;
}

std::vector<double> upper_envelope(ConvexRegion const &region, std::span<double const> xs)
{
  return envelope(region, xs).y_upper;
}

// Membership ------------------------------------------------------------------

Membership contains(ConvexRegion const &region, DivergencePoint pt, double tol)
{
  if (std::isnan(pt.x) || std::isnan(pt.y))
  {
    return Membership::unknown;
  }
  bool const x_inf = std::isinf(pt.x);
  bool const y_inf = std::isinf(pt.y);

  if (x_inf && y_inf)
  {
    // Needs a cone direction strictly inside the open quadrant.
    auto const &rays = region.rays();
    if (rays.empty())
    {
      return Membership::unknown;
    }
    double const lo = std::atan2(rays.front().dy, rays.front().dx);
    double const hi = std::atan2(rays.back().dy, rays.back().dx);
    bool const   open = hi > kConeTolerance && lo < std::numbers::pi / 2 - kConeTolerance &&
                      (hi - lo > kConeTolerance || (lo > kConeTolerance &&
                                                    lo < std::numbers::pi / 2 - kConeTolerance));
    return open ? Membership::inside : Membership::unknown;
  }
  if (y_inf)
  {
    if (!region.cone_contains(0.0, 1.0))
    {
      return Membership::unknown;
    }
    double const x_hi = region.cone_contains(1.0, 1e-9) || region.cone_contains(1.0, 0.0)
                            ? kInf
                            : region.hull_x_max();
    bool const   covered = pt.x >= region.hull_x_min() - tol && pt.x <= x_hi + tol;
    return covered ? Membership::inside : Membership::unknown;
  }
  if (x_inf)
  {
    if (!region.cone_contains(1.0, 0.0))
    {
      return Membership::unknown;
    }
    double y_lo = kInf;
    double y_hi = -kInf;
    for (auto const &v : region.hull())
    {
      y_lo = std::min(y_lo, v.y);
      y_hi = std::max(y_hi, v.y);
    }
    if (region.cone_contains(1e-9, 1.0) || region.cone_contains(0.0, 1.0))
    {
      y_hi = kInf;
    }
    bool const covered = pt.y >= y_lo - tol && pt.y <= y_hi + tol;
    return covered ? Membership::inside : Membership::unknown;
  }

  if (region.margin(pt) <= tol)
  {
    return Membership::inside;
  }
  Window const w = region.window();
  if (pt.x < 0.9 * w.x_max && pt.y < 0.9 * w.y_max)
  {
    return Membership::outside;
  }
  return Membership::unknown;
}

}  // namespace divrange
