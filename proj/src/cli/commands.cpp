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

#include "divrange/analysis.hpp"

#include "json.hpp"

#include <cmath>

namespace divrange::cli {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v)
{
  if (std::isfinite(v))
  {
    return v;
  }
  return format_number(v);
}

Json point(DivergencePoint v)
{
  return Json::array({number(v.x), number(v.y)});
}

Json masses(DiscreteDistribution const &d)
{
  Json out = Json::array();
  for (double m : d.masses())
  {
    out.push_back(number(m));
  }
  return out;
}

Json rays_json(ConvexRegion const &region)
{
  Json out = Json::array();
  for (Ray const &r : region.rays())
  {
    out.push_back(Json::array({number(r.dx), number(r.dy)}));
  }
  return out;
}

struct Pair
{
  Generator f;
  Generator g;
};

Pair parse_pair(RunConfig const &config)
{
  return {parse_spec(config.f_spec), parse_spec(config.g_spec)};
}

RangeResult range_for(Pair const &pair, RunConfig const &config)
{
  RangeOptions options;
  options.grid = config.grid;
  options.window = config.window;
  return compute_range(pair.f, pair.g, options);
}

void emit(std::string const &path, std::string const &content, std::ostream &out)
{
  if (path.empty())
  {
    out << content;
  }
  else
  {
    write_atomic(path, content);
  }
}

std::string dump(Json const &j)
{
  return j.dump(2) + '\n';
}

}  // namespace

int cmd_range(RunConfig const &config, std::ostream &out, std::ostream &)
{
  Pair const        pair = parse_pair(config);
  RangeResult const range = range_for(pair, config);

  Json rays = Json::object();
  rays["f"] = pair.f.name();
  rays["g"] = pair.g.name();
  rays["rays"] = rays_json(range.region);

  if (!config.out.empty())
  {
    write_atomic(config.out + "_cloud.csv", cloud_csv(range.cloud));
    write_atomic(config.out + "_hull.csv", hull_csv(range.region));
    write_atomic(config.out + "_rays.json", dump(rays));
    if (config.format == Format::svg)
    {
      write_atomic(config.out + ".svg", range_svg(pair.f.name(), pair.g.name(), range));
    }
  }
  else if (config.format == Format::svg)
  {
    out << range_svg(pair.f.name(), pair.g.name(), range);
    return kExitOk;
  }

  Json summary = Json::object();
  summary["f"] = pair.f.name();
  summary["g"] = pair.g.name();
  summary["grid"] = config.grid;
  summary["window"] = Json::array({number(config.window.x_max), number(config.window.y_max)});
  summary["finite_points"] = range.cloud.finite_points.size();
  summary["infinite"] = {{"x_only", range.cloud.ledger.x_only},
                         {"y_only", range.cloud.ledger.y_only},
                         {"both", range.cloud.ledger.both}};
  Json hull = Json::array();
  for (DivergencePoint const &v : range.region.hull())
  {
    hull.push_back(point(v));
  }
  summary["hull"] = std::move(hull);
  summary["rays"] = rays_json(range.region);
  out << dump(summary);
  return kExitOk;
}

int cmd_envelope(RunConfig const &config, std::ostream &out, std::ostream &)
{
  Pair const        pair = parse_pair(config);
  RangeResult const range = range_for(pair, config);

  std::vector<double> xs = config.xs;
  if (xs.empty())
  {
    double const lo = range.region.hull_x_min();
    double const hi = range.region.hull_x_max();
    for (long k = static_cast<long>(std::ceil(lo * 100.0)); k / 100.0 <= hi; ++k)
    {
      xs.push_back(k / 100.0);
    }
  }
  Envelope const env = envelope(range.region, xs);
  emit(config.out,
       config.format == Format::svg ? envelope_svg(range.region, env) : envelope_csv(env), out);
  return kExitOk;
}

int cmd_singular(RunConfig const &config, std::ostream &out, std::ostream &)
{
  Pair const                       pair = parse_pair(config);
  std::vector<SingularPoint> const locus = singular_locus(pair.f, pair.g, config.grid);
  std::string                      csv = "p,q,component\n";
  for (SingularPoint const &s : locus)
  {
    csv += format_number(s.at.p()) + ',' + format_number(s.at.q()) + ',' +
           std::to_string(s.component) + '\n';
  }
  emit(config.out, csv, out);
  return kExitOk;
}

int cmd_limits(RunConfig const &config, std::ostream &out, std::ostream &)
{
  Pair const        pair = parse_pair(config);
  LimitRatios const r = limit_ratios(pair.f, pair.g);

  Json j = Json::object();
  j["f"] = pair.f.name();
  j["g"] = pair.g.name();
  j["beta0_at_zero"] = number(r.beta0_at_zero);
  j["beta0_at_inf"] = number(r.beta0_at_inf);
  j["gamma0_at_zero"] = number(r.gamma0_at_zero);
  j["gamma0_at_inf"] = number(r.gamma0_at_inf);
  j["f_zero_infinite"] = r.f_zero_infinite;
  j["f_conj_infinite"] = r.f_conj_infinite;
  j["g_zero_infinite"] = r.g_zero_infinite;
  j["g_conj_infinite"] = r.g_conj_infinite;
  j["indeterminate_at_zero"] = r.indeterminate_at_zero;
  j["indeterminate_at_inf"] = r.indeterminate_at_inf;
  Json rays = Json::array();
  for (Ray const &ray : recession_rays(r))
  {
    rays.push_back(Json::array({number(ray.dx), number(ray.dy)}));
  }
  j["rays"] = std::move(rays);
  try
  {
    std::optional<double> const beta = ratio_bound_exists(pair.f, pair.g);
    j["ratio_bound"] = beta ? number(*beta) : Json(nullptr);
  }
  catch (std::domain_error const &e)
  {
    j["ratio_bound"] = nullptr;
    j["ratio_bound_error"] = e.what();
  }
  emit(config.out, dump(j), out);
  return kExitOk;
}

int cmd_achieve(RunConfig const &config, std::ostream &out, std::ostream &err)
{
  if (!config.target)
  {
    err << "achieve: --target X,Y is required\n";
    return kExitUsage;
  }
  Pair const        pair = parse_pair(config);
  RangeResult const range = range_for(pair, config);
  DivergencePoint const target = *config.target;

  Json j = Json::object();
  j["target"] = point(target);
  try
  {
    MixturePair const m = achieve(pair.f, pair.g, range, target, config.tol);
    j["t1"] = Json::array({number(m.t1.p()), number(m.t1.q())});
    j["t2"] = Json::array({number(m.t2.p()), number(m.t2.q())});
    j["alpha"] = number(m.alpha);
    j["P"] = masses(m.P);
    j["Q"] = masses(m.Q);
    j["achieved"] = point(m.achieved);
    j["residual"] = number(m.residual);
  }
  catch (AchieveError const &e)
  {
    err << "achieve: " << e.what() << '\n';
    j["error"] = e.what();
    j["best_residual"] = number(e.best_residual());
    emit(config.out, dump(j), out);
    return kExitAchieve;
  }
  catch (std::invalid_argument const &e)
  {
    err << "achieve: " << e.what() << '\n';
    j["error"] = e.what();
    emit(config.out, dump(j), out);
    return kExitAchieve;
  }
  emit(config.out, dump(j), out);
  return kExitOk;
}

int cmd_verify(RunConfig const &config, std::ostream &out, std::ostream &)
{
  Pair const             pair = parse_pair(config);
  RangeResult const      range = range_for(pair, config);
  MembershipReport const report =
      verify_membership(pair.f, pair.g, range.region, config.dim, config.trials, config.seed,
                        config.tol);
  Json j = Json::object();
  j["inside"] = report.inside;
  j["outside"] = report.outside;
  j["unknown"] = report.unknown;
  j["infinite"] = report.infinite;
  j["worst_margin"] = number(report.worst_margin);
  emit(config.out, dump(j), out);
  return report.outside > 0 ? kExitOutside : kExitOk;
}

int run(RunConfig const &config, std::ostream &out, std::ostream &err)
{
  try
  {
    if (config.command == "range")
    {
      return cmd_range(config, out, err);
    }
    if (config.command == "envelope")
    {
      return cmd_envelope(config, out, err);
    }
    if (config.command == "singular")
    {
      return cmd_singular(config, out, err);
    }
    if (config.command == "limits")
    {
      return cmd_limits(config, out, err);
    }
    if (config.command == "achieve")
    {
      return cmd_achieve(config, out, err);
    }
    if (config.command == "verify")
    {
      return cmd_verify(config, out, err);
    }
    err << "unknown command '" << config.command << "'\n";
    return kExitUsage;
  }
  catch (SpecError const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (IoError const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  catch (std::out_of_range const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace divrange::cli
