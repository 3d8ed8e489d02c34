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

#include "divrange/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace divrange::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 48.0;
constexpr std::size_t kMaxCloudMarkers = 4000;

std::string px(double v)
{
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

double tick_step(double extent)
{
  double step = std::pow(10.0, std::floor(std::log10(extent)));
  if (extent / step < 4.0)
  {
    step /= 2.0;
  }
  return step;
}

// Fixed mapping of the box [0, x_max] x [0, y_max] onto the canvas.
class Canvas
{
public:
  Canvas(double x_max, double y_max)
    : x_max_(x_max)
    , y_max_(y_max)
  {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
             px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + ' ' + px(kHeight) + "\">\n";
    body_ +=
        "<defs><marker id=\"dot\" markerWidth=\"2\" markerHeight=\"2\" refX=\"1\" refY=\"1\">"
        "<circle cx=\"1\" cy=\"1\" r=\"1\" fill=\"#7a9cc6\"/></marker></defs>\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + px(kWidth) + "\" height=\"" + px(kHeight) +
             "\" fill=\"white\"/>\n";
    axes();
  }

  double sx(double x) const
  {
    return kMargin + (kWidth - 2 * kMargin) * x / x_max_;
  }
  double sy(double y) const
  {
    return kHeight - kMargin - (kHeight - 2 * kMargin) * y / y_max_;
  }

  bool visible(DivergencePoint v) const
  {
    return v.finite() && v.x >= 0.0 && v.x <= x_max_ && v.y >= 0.0 && v.y <= y_max_;
  }

  void polyline(std::string const &id, std::vector<DivergencePoint> const &pts,
                std::string const &style, bool closed = false)
  {
    std::string points;
    for (DivergencePoint const &v : pts)
    {
      if (!visible(v))
      {
        continue;
      }
      points += px(sx(v.x)) + ',' + px(sy(v.y)) + ' ';
    }
    if (closed && !pts.empty() && visible(pts.front()))
    {
      points += px(sx(pts.front().x)) + ',' + px(sy(pts.front().y));
    }
    body_ += "<polyline id=\"" + id + "\" points=\"" + points + "\" " + style + "/>\n";
  }

  std::string finish()
  {
    return body_ + "</svg>\n";
  }

private:
  void axes()
  {
    double const x0 = sx(0.0);
    double const y0 = sy(0.0);
    body_ += "<g stroke=\"#333\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"10\">\n";
    body_ += "<line x1=\"" + px(x0) + "\" y1=\"" + px(y0) + "\" x2=\"" + px(sx(x_max_)) +
             "\" y2=\"" + px(y0) + "\"/>\n";
    body_ += "<line x1=\"" + px(x0) + "\" y1=\"" + px(y0) + "\" x2=\"" + px(x0) + "\" y2=\"" +
             px(sy(y_max_)) + "\"/>\n";
    double const xs = tick_step(x_max_);
    for (int k = 0; k * xs <= x_max_ * (1 + 1e-12); ++k)
    {
      double const x = sx(k * xs);
      body_ += "<line x1=\"" + px(x) + "\" y1=\"" + px(y0) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(y0 + 4) + "\"/><text x=\"" + px(x) + "\" y=\"" + px(y0 + 16) +
               "\" text-anchor=\"middle\" stroke=\"none\">" + format_number(k * xs) + "</text>\n";
    }
    double const ys = tick_step(y_max_);
    for (int k = 0; k * ys <= y_max_ * (1 + 1e-12); ++k)
    {
      double const y = sy(k * ys);
      body_ += "<line x1=\"" + px(x0 - 4) + "\" y1=\"" + px(y) + "\" x2=\"" + px(x0) + "\" y2=\"" +
               px(y) + "\"/><text x=\"" + px(x0 - 6) + "\" y=\"" + px(y + 3) +
               "\" text-anchor=\"end\" stroke=\"none\">" + format_number(k * ys) + "</text>\n";
    }
    body_ += "</g>\n";
  }

  double      x_max_;
  double      y_max_;
  std::string body_;
};

// Reference lower curves for pairs whose boundary is known in closed form.
std::function<double(double)> reference_curve(std::string const &f, std::string const &g)
{
  std::string const chi2 = make_power(2.0).name();
  std::string const cube = make_power(3.0).name();
  std::string const tv = make_total_variation().name();
  std::string const lecam = make_lecam().name();
  if (f == chi2 && g == cube)
  {
    return [](double x) { return 2.0 / 3.0 * x * (x + 1.0); };
  }
  if (f == tv && g == chi2)
  {
    return [](double v) { return v <= 1.0 ? 0.5 * v * v : v / (2.0 * (2.0 - v)); };
  }
  if (f == tv && g == lecam)
  {
    return [](double v) { return v * v / 8.0; };
  }
  return {};
}

// Tight view box around the data, capped by the certified window.
std::pair<double, double> view_extent(ConvexRegion const &region)
{
  double x_hi = 0.0;
  double y_hi = 0.0;
  for (DivergencePoint const &v : region.hull())
  {
    x_hi = std::max(x_hi, v.x);
    y_hi = std::max(y_hi, v.y);
  }
  Window const w = region.window();
  x_hi = x_hi > 0.0 ? std::min(w.x_max, 1.05 * x_hi) : w.x_max;
  y_hi = y_hi > 0.0 ? std::min(w.y_max, 1.05 * y_hi) : w.y_max;
  return {x_hi, y_hi};
}

}  // namespace

std::string range_svg(std::string const &f_name, std::string const &g_name, RangeResult const &range)
{
  auto const [x_hi, y_hi] = view_extent(range.region);
  Canvas canvas(x_hi, y_hi);

  auto const                  &cloud = range.cloud.finite_points;
  std::size_t const            stride = std::max<std::size_t>(1, cloud.size() / kMaxCloudMarkers);
  std::vector<DivergencePoint> sampled;
  for (std::size_t i = 0; i < cloud.size(); i += stride)
  {
    sampled.push_back(cloud[i]);
  }
  canvas.polyline("cloud", sampled,
                  "fill=\"none\" stroke=\"none\" marker-start=\"url(#dot)\" "
                  "marker-mid=\"url(#dot)\" marker-end=\"url(#dot)\"");
  canvas.polyline("hull", range.region.hull(),
                  "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"", true);

  if (auto curve = reference_curve(f_name, g_name))
  {
    std::vector<DivergencePoint> pts;
    double const                 x_lo = range.region.hull_x_min();
    double const                 x_top = range.region.hull_x_max();
    for (int k = 0; k <= 400; ++k)
    {
      double const x = x_lo + (x_top - x_lo) * k / 400.0;
      pts.push_back({x, curve(x)});
    }
    canvas.polyline("reference", pts,
                    "fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
  }
  return canvas.finish();
}

std::string envelope_svg(ConvexRegion const &region, Envelope const &env)
{
  auto const [x_hi, y_hi] = view_extent(region);
  Canvas                       canvas(x_hi, y_hi);
  std::vector<DivergencePoint> lower;
  std::vector<DivergencePoint> upper;
  for (std::size_t i = 0; i < env.xs.size(); ++i)
  {
    lower.push_back({env.xs[i], env.y_lower[i]});
    upper.push_back({env.xs[i], env.y_upper[i]});
  }
  canvas.polyline("lower", lower, "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"");
  canvas.polyline("upper", upper, "fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1.5\"");
  return canvas.finish();
}

}  // namespace divrange::cli
