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

#include "doctest.h"
#include "json.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace divrange;
using namespace divrange::cli;

namespace {

struct Outcome
{
  int         code;
  std::string out;
  std::string err;
};

Outcome invoke(RunConfig const &config)
{
  std::ostringstream out;
  std::ostringstream err;
  int const          code = run(config, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(char const *command, char const *f, char const *g, int grid = 96)
{
  RunConfig c;
  c.command = command;
  c.f_spec = f;
  c.g_spec = g;
  c.grid = grid;
  return c;
}

std::string slurp(std::filesystem::path const &p)
{
  std::ifstream      in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(std::string const &text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream                    in(text);
  std::string                           line;
  while (std::getline(in, line))
  {
    std::vector<std::string> cells;
    std::istringstream       cs(line);
    std::string              cell;
    while (std::getline(cs, cell, ','))
    {
      cells.push_back(cell);
    }
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path scratch(char const *name)
{
  auto dir = std::filesystem::temp_directory_path() / "divrange_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::size_t count(std::string const &hay, std::string const &needle)
{
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
  {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("numbers round-trip through their shortest text")
{
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10000; ++i)
  {
    std::uint64_t bits = rng();
    double        v;
    std::memcpy(&v, &bits, sizeof v);
    if (std::isnan(v))
    {
      continue;
    }
    std::string const text = format_number(v);
    CHECK(text.size() <= 24);
    CHECK(parse_number(text) == v);
  }
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(0.5) == "0.5");
  CHECK_THROWS_AS(parse_number("1.0x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_number(""), std::invalid_argument);
}

TEST_CASE("envelope CSV has the documented columns and known values")
{
  RunConfig c = make("envelope", "tv", "chi2", 128);
  c.xs = {0.0, 1.0};
  Outcome const o = invoke(c);
  REQUIRE(o.code == kExitOk);
  auto const rows = parse_csv(o.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"x", "y_lower", "y_upper_or_inf"});
  CHECK(parse_number(rows[1][1]) == doctest::Approx(0.0).scale(1e-12));
  CHECK(parse_number(rows[2][1]) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rows[2][2] == "inf");

  RunConfig l = make("envelope", "tv", "lecam", 128);
  l.xs = {2.0};
  auto const lrows = parse_csv(invoke(l).out);
  CHECK(parse_number(lrows[1][1]) == doctest::Approx(0.5).epsilon(1e-9));

  RunConfig bad = make("envelope", "tv", "lecam", 64);
  bad.xs = {3.0};
  CHECK(invoke(bad).code == kExitUsage);
}

TEST_CASE("range writes cloud, hull, rays and SVG files deterministically")
{
  auto const base = scratch("klrkl").string();
  RunConfig  c = make("range", "kl", "rkl", 64);
  c.out = base;
  c.format = Format::svg;
  Outcome const first = invoke(c);
  REQUIRE(first.code == kExitOk);
  std::string const cloud = slurp(base + "_cloud.csv");
  std::string const hull = slurp(base + "_hull.csv");
  std::string const rays = slurp(base + "_rays.json");
  std::string const svg = slurp(base + ".svg");

  Outcome const second = invoke(c);
  CHECK(second.out == first.out);
  CHECK(slurp(base + "_cloud.csv") == cloud);
  CHECK(slurp(base + "_hull.csv") == hull);
  CHECK(slurp(base + "_rays.json") == rays);
  CHECK(slurp(base + ".svg") == svg);

  auto const json = nlohmann::json::parse(rays);
  REQUIRE(json["rays"].size() == 2);
  CHECK(json["rays"][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(json["rays"][1][1].get<double>() == doctest::Approx(1.0));

  // Cloud rows parse back exactly; the infinite ones are flagged.
  auto const rows = parse_csv(cloud);
  REQUIRE(rows[0] == std::vector<std::string>{"p", "q", "x", "y", "finite_flag"});
  std::size_t infinite = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    REQUIRE(rows[i].size() == 5);
    double const p = parse_number(rows[i][0]);
    double const q = parse_number(rows[i][1]);
    CHECK(format_number(p) == rows[i][0]);
    CHECK(p <= q);
    if (rows[i][4] == "0")
    {
      ++infinite;
      CHECK((rows[i][2] == "inf" || rows[i][3] == "inf"));
    }
  }
  CHECK(infinite > 0);
  CHECK(cloud.find('\r') == std::string::npos);

  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "<polyline") == 2);  // no reference curve for this pair
  CHECK(count(svg, "<svg") == count(svg, "</svg>"));
  CHECK(count(svg, "<g") == count(svg, "</g>"));
}

TEST_CASE("range SVG adds the reference curve for known pairs")
{
  RunConfig c = make("range", "chi2", "power:3", 64);
  c.format = Format::svg;
  Outcome const o = invoke(c);
  REQUIRE(o.code == kExitOk);
  CHECK(count(o.out, "<polyline") == 3);
  CHECK(o.out.find("id=\"reference\"") != std::string::npos);
}

TEST_CASE("range summary for a degenerate pair")
{
  Outcome const o = invoke(make("range", "tv", "tv", 64));
  REQUIRE(o.code == kExitOk);
  auto const j = nlohmann::json::parse(o.out);
  for (auto const &v : j["hull"])
  {
    CHECK(v[0].get<double>() == doctest::Approx(v[1].get<double>()).epsilon(1e-12));
  }
}

TEST_CASE("singular, limits, achieve and verify commands")
{
  Outcome const s = invoke(make("singular", "tv", "chi2", 64));
  REQUIRE(s.code == kExitOk);
  auto const rows = parse_csv(s.out);
  CHECK(rows[0] == std::vector<std::string>{"p", "q", "component"});
  REQUIRE(rows.size() > 1);
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    CHECK(std::abs(parse_number(rows[i][1]) - 0.5) < 1e-8);
  }

  Outcome const l = invoke(make("limits", "kl", "rkl"));
  REQUIRE(l.code == kExitOk);
  auto const lj = nlohmann::json::parse(l.out);
  CHECK(lj["beta0_at_zero"] == "inf");
  CHECK(lj["ratio_bound"].is_null());

  RunConfig a = make("achieve", "tv", "chi2", 128);
  a.target = DivergencePoint{1.0, 0.5};
  Outcome const ao = invoke(a);
  REQUIRE(ao.code == kExitOk);
  auto const aj = nlohmann::json::parse(ao.out);
  CHECK(aj["residual"].get<double>() <= 1e-6);
  CHECK(aj["P"].size() == 4);

  a.target = DivergencePoint{1.0, 0.4};
  CHECK(invoke(a).code == kExitAchieve);
  a.target.reset();
  CHECK(invoke(a).code == kExitUsage);

  RunConfig v = make("verify", "tv", "js", 128);
  v.dim = 4;
  v.trials = 2000;
  Outcome const vo = invoke(v);
  CHECK(vo.code == kExitOk);
  auto const vj = nlohmann::json::parse(vo.out);
  CHECK(vj["outside"] == 0);
  // Keys appear in the documented order.
  CHECK(vo.out.find("\"inside\"") < vo.out.find("\"outside\""));
  CHECK(vo.out.find("\"unknown\"") < vo.out.find("\"infinite\""));
}

TEST_CASE("exit codes for bad input")
{
  CHECK(invoke(make("limits", "conj(tv", "tv")).code == kExitUsage);
  CHECK(invoke(make("nonsense", "tv", "tv")).code == kExitUsage);
  RunConfig c = make("envelope", "tv", "lecam", 32);
  c.out = "/nonexistent-dir/out.csv";
  CHECK(invoke(c).code == kExitIo);
}
