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

// divrange: joint ranges of pairs of f-divergences.

#include "divrange/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <utility>
#include <sstream>

namespace {

using divrange::cli::parse_number;

// "X,Y" -> (X, Y)
std::pair<double, double> parse_xy(std::string const &text)
{
  auto const comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
  {
    throw std::invalid_argument("expected X,Y but got '" + text + "'");
  }
  return {parse_number(text.substr(0, comma)), parse_number(text.substr(comma + 1))};
}

std::vector<double> parse_list(std::string const &text)
{
  std::vector<double> out;
  std::stringstream   stream(text);
  std::string         item;
  while (std::getline(stream, item, ','))
  {
    out.push_back(parse_number(item));
  }
  return out;
}

}  // namespace

int main(int argc, char **argv)
{
  namespace cli = divrange::cli;

  CLI::App app{"Joint ranges of pairs of f-divergences"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string    window_text = "20,20";
  std::string    target_text;
  std::string    xs_text;
  std::string    format_text = "csv";

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--f", config.f_spec, "generator spec for the x axis")->required();
    sub->add_option("--g", config.g_spec, "generator spec for the y axis")->required();
    sub->add_option("--grid", config.grid, "triangle grid size")->check(CLI::PositiveNumber);
    sub->add_option("--window", window_text, "certified window X,Y");
    sub->add_option("--tol", config.tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--dim", config.dim, "atoms per distribution")->check(CLI::PositiveNumber);
    sub->add_option("--trials", config.trials, "Monte Carlo trials");
    sub->add_option("--target", target_text, "target point X,Y");
    sub->add_option("--out", config.out, "output path");
    sub->add_option("--format", format_text, "output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
  };

  std::pair<char const *, char const *> const commands[]{
      {"range", "sample the joint range and report its hull and rays"},
      {"envelope", "lower and upper boundary of the range at given x"},
      {"singular", "points where the two-point Jacobian vanishes"},
      {"limits", "limit ratios g/f at 0 and infinity, rays, ratio bound"},
      {"achieve", "build a 4-atom pair hitting a target point"},
      {"verify", "check random distributions land inside the range"},
  };
  for (auto [name, help] : commands)
  {
    CLI::App *sub = app.add_subcommand(name, help);
    add_common(sub);
    if (std::string(name) == "envelope")
    {
      sub->add_option("--xs", xs_text, "comma-separated abscissae");
    }
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e);
    return cli::kExitUsage;
  }

  try
  {
    config.command = app.get_subcommands().front()->get_name();
    auto const [wx, wy] = parse_xy(window_text);
    if (!(wx > 0.0) || !(wy > 0.0))
    {
      throw std::invalid_argument("window must be positive");
    }
    config.window = {wx, wy};
    if (!target_text.empty())
    {
      auto const [tx, ty] = parse_xy(target_text);
      config.target = divrange::DivergencePoint{tx, ty};
    }
    if (!xs_text.empty())
    {
      config.xs = parse_list(xs_text);
    }
    config.format = format_text == "json"  ? cli::Format::json
                    : format_text == "svg" ? cli::Format::svg
                                           : cli::Format::csv;
  }
  catch (std::invalid_argument const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }

  return cli::run(config, std::cout, std::cerr);
}
