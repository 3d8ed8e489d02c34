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

#include "doctest.h"

#include <cmath>
#include <limits>

using namespace divrange;

namespace {

double const kInf = std::numeric_limits<double>::infinity();

RangeResult range_of(char const *f, char const *g, int n = 256, Window w = {})
{
  RangeOptions options;
  options.grid = n;
  options.window = w;
  return compute_range(parse_spec(f), parse_spec(g), options);
}

}  // namespace

TEST_CASE("monotone chain hull")
{
  std::vector<DivergencePoint> const pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5},
                                         {0.5, 0}, {1, 1}, {0.2, 0.7}};
  auto const h = hull(pts);
  REQUIRE(h.size() == 4);
  // Counterclockwise from the lexicographic minimum; collinear (0.5, 0) dropped.
  CHECK(h[0].x == 0.0);
  CHECK(h[0].y == 0.0);
  CHECK(h[1].x == 1.0);
  CHECK(h[1].y == 0.0);
  CHECK(h[2].x == 1.0);
  CHECK(h[2].y == 1.0);
  CHECK(h[3].x == 0.0);
  CHECK(h[3].y == 1.0);

  CHECK(hull(std::vector<DivergencePoint>{{2, 3}, {2, 3}}).size() == 1);
  CHECK(hull(std::vector<DivergencePoint>{{0, 0}, {1, 1}, {2, 2}}).size() == 2);
  CHECK_THROWS_AS(hull(std::vector<DivergencePoint>{}), std::invalid_argument);
}

TEST_CASE("triangle sampling stays inside the triangle and reaches its edges")
{
  auto const pts = sample_triangle(16);
  CHECK(pts.size() >= 17 * 18 / 2);
  double min_p = 1;
  double max_q_gap = 1;
  for (TrianglePoint const &t : pts)
  {
    REQUIRE(TrianglePoint::valid(t.p(), t.q()));
    if (t.p() > 0)
    {
      min_p = std::min(min_p, t.p());
    }
    if (t.q() < 1)
    {
      max_q_gap = std::min(max_q_gap, 1 - t.q());
    }
  }
  CHECK(min_p == std::ldexp(1.0, -40));
  CHECK(max_q_gap == std::ldexp(1.0, -40));
  CHECK_THROWS_AS(sample_triangle(1), std::invalid_argument);
}

TEST_CASE("infinite images go to the ledger")
{
  Generator const kl = make_power(1.0);
  Generator const tv = make_total_variation();
  std::vector<TrianglePoint> const pts{{0.0, 0.5}, {0.5, 1.0}, {0.2, 0.4}};
  PointCloud const cloud = cloud_2achievable(tv, kl, pts);
  // KL((1,0) || (.5,.5)) is finite; KL((.5,.5) || (0,1)) is not.
  CHECK(cloud.finite_points.size() == 2);
  CHECK(cloud.ledger.y_only == 1);
  CHECK(cloud.ledger.total() == 1);
  CHECK(cloud.ledger.entries.front().at == TrianglePoint(0.5, 1.0));
}

TEST_CASE("the region of (tv, lecam) has lower boundary V^2/8 and upper boundary V/4")
{
  RangeResult const r = range_of("tv", "lecam");
  CHECK(r.region.rays().empty());
  std::vector<double> const xs{0.0, 0.5, 1.0, 1.5, 2.0};
  Envelope const            env = envelope(r.region, xs);
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    CAPTURE(xs[i]);
    CHECK(env.y_lower[i] == doctest::Approx(xs[i] * xs[i] / 8).epsilon(1e-6));
    CHECK(env.y_upper[i] == doctest::Approx(xs[i] / 4).epsilon(1e-6));
  }
  CHECK_THROWS_AS(envelope(r.region, std::vector<double>{2.5}), std::out_of_range);
  CHECK_THROWS_AS(envelope(r.region, std::vector<double>{-0.1}), std::out_of_range);
}

TEST_CASE("envelope of (tv, chi2)")
{
  RangeResult const r = range_of("tv", "chi2");
  REQUIRE(r.region.rays().size() == 1);
  CHECK(r.region.rays()[0].dx == 0.0);
  CHECK(r.region.rays()[0].dy == 1.0);
  std::vector<double> const xs{0.0, 1.0};
  Envelope const            env = envelope(r.region, xs);
  CHECK(env.y_lower[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(env.y_lower[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(env.y_upper[1] == kInf);
}

TEST_CASE("membership classification for (tv, chi2)")
{
  RangeResult const r = range_of("tv", "chi2");
  CHECK(contains(r.region, {0.0, 0.0}, 1e-6) == Membership::inside);
  CHECK(contains(r.region, {1.0, 0.4}, 1e-6) == Membership::outside);
  CHECK(r.region.margin({1.0, 0.4}) > 1e-6);
  CHECK(contains(r.region, {1.0, 0.6}, 1e-6) == Membership::inside);
  CHECK(contains(r.region, {1.0, 1e6}, 1e-6) == Membership::inside);  // above a hull point
  CHECK(contains(r.region, {2.5, 1e6}, 1e-6) == Membership::unknown);  // beyond the window
  CHECK(contains(r.region, {1.0, kInf}, 1e-6) == Membership::inside);  // vertical ray
  CHECK(contains(r.region, {kInf, 1.0}, 1e-6) == Membership::unknown);
  CHECK(contains(r.region, {2.5, 1.0}, 1e-6) == Membership::outside);  // V <= 2
}

TEST_CASE("membership with both axis rays")
{
  RangeResult const r = range_of("kl", "rkl", 128);
  CHECK(r.region.rays().size() == 2);
  CHECK(contains(r.region, {3.0, 0.5}, 1e-6) == Membership::inside);
  CHECK(contains(r.region, {kInf, 1.0}, 1e-6) == Membership::inside);
  CHECK(contains(r.region, {1.0, kInf}, 1e-6) == Membership::inside);
  CHECK(contains(r.region, {kInf, kInf}, 1e-6) == Membership::inside);
}

TEST_CASE("every cloud point lies inside its own hull")
{
  for (auto [f, g] : {std::pair{"tv", "js"}, std::pair{"chi2", "power:3"}, std::pair{"hellinger", "kl"}})
  {
    CAPTURE(f);
    CAPTURE(g);
    RangeResult const r = range_of(f, g, 128);
    Window const      w = r.region.window();
    double            worst = -kInf;
    for (DivergencePoint const &v : r.cloud.finite_points)
    {
      if (v.x <= w.x_max && v.y <= w.y_max)
      {
        worst = std::max(worst, r.region.margin(v));
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("lower boundary is convex")
{
  RangeResult const   r = range_of("chi2", "power:3", 128);
  std::vector<double> xs;
  for (int k = 0; k <= 400; ++k)
  {
    xs.push_back(4.0 * k / 400);
  }
  auto const y = lower_envelope(r.region, xs);
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
  {
    CHECK(y[i - 1] - 2 * y[i] + y[i + 1] >= -1e-9 * std::max(1.0, y[i]));
  }
}

TEST_CASE("finer sampling never shrinks the region")
{
  for (auto [f, g] : {std::pair{"tv", "js"}, std::pair{"tv", "chi2"}})
  {
    RangeResult const coarse = range_of(f, g, 64);
    RangeResult const fine = range_of(f, g, 192);
    for (DivergencePoint const &v : coarse.region.hull())
    {
      CHECK(fine.region.margin(v) <= 1e-6);
    }
  }
}

TEST_CASE("a generator paired with itself gives a hull on the diagonal")
{
  for (char const *f : {"tv", "kl", "js", "power:-1"})
  {
    CAPTURE(f);
    RangeResult const r = range_of(f, f, 128);
    for (DivergencePoint const &v : r.region.hull())
    {
      CHECK(std::abs(v.x - v.y) <= 1e-12);
    }
    CHECK(r.region.hull().size() <= 2);
  }
}

TEST_CASE("refinement closes the gap between chords and the curved boundary")
{
  RangeOptions raw;
  raw.grid = 64;
  raw.refine_boundary = false;
  RangeOptions refined = raw;
  refined.refine_boundary = true;
  Generator const tv = make_total_variation();
  Generator const chi2 = make_power(2.0);
  auto const      a = compute_range(tv, chi2, raw);
  auto const      b = compute_range(tv, chi2, refined);
  // V^2/2 at V = 0.3 + 1/128 is strictly between coarse lattice abscissae.
  double const v = 0.3 + 1.0 / 128;
  double const truth = v * v / 2;
  double const ya = lower_envelope(a.region, std::vector<double>{v})[0];
  double const yb = lower_envelope(b.region, std::vector<double>{v})[0];
  CHECK(ya - truth > 1e-6);
  CHECK(std::abs(yb - truth) < 1e-6);
}

TEST_CASE("range options are validated")
{
  RangeOptions bad;
  bad.window = {0.0, 1.0};
  CHECK_THROWS_AS(compute_range(make_total_variation(), make_lecam(), bad), std::invalid_argument);
}
