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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <system_error>

namespace divrange::cli {

std::string format_number(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  char buffer[32];
  auto const [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  if (ec != std::errc{})
  {
    throw std::logic_error("number formatting failed");
  }
  return std::string(buffer, end);
}

double parse_number(std::string const &text)
{
  if (text == "inf" || text == "+inf")
  {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf")
  {
    return -std::numeric_limits<double>::infinity();
  }
  if (text == "nan")
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  char const *first = text.data();
  char const *last = text.data() + text.size();
  if (first != last && *first == '+')
  {
    ++first;
  }
  double value = 0.0;
  auto const [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
  {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return value;
}

void write_atomic(std::string const &path, std::string const &content)
{
  namespace fs = std::filesystem;
  fs::path const target(path);
  fs::path       temp = target;
  temp += ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file)
    {
      throw IoError("cannot open '" + temp.string() + "' for writing");
    }
    file << content;
    file.flush();
    if (!file)
    {
      throw IoError("cannot write '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec)
  {
    fs::remove(temp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::string cloud_csv(PointCloud const &cloud)
{
  std::string csv = "p,q,x,y,finite_flag\n";
  auto        row = [&](TrianglePoint t, DivergencePoint v, bool finite) {
    csv += format_number(t.p()) + ',' + format_number(t.q()) + ',' + format_number(v.x) + ',' +
           format_number(v.y) + ',' + (finite ? "1" : "0") + '\n';
  };
  for (std::size_t i = 0; i < cloud.finite_points.size(); ++i)
  {
    row(cloud.params[i], cloud.finite_points[i], true);
  }
  for (LedgerEntry const &e : cloud.ledger.entries)
  {
    row(e.at, e.value, false);
  }
  return csv;
}

std::string hull_csv(ConvexRegion const &region)
{
  std::string csv = "x,y\n";
  for (DivergencePoint const &v : region.hull())
  {
    csv += format_number(v.x) + ',' + format_number(v.y) + '\n';
  }
  return csv;
}

std::string envelope_csv(Envelope const &env)
{
  std::string csv = "x,y_lower,y_upper_or_inf\n";
  for (std::size_t i = 0; i < env.xs.size(); ++i)
  {
    csv += format_number(env.xs[i]) + ',' + format_number(env.y_lower[i]) + ',' +
           format_number(env.y_upper[i]) + '\n';
  }
  return csv;
}

}  // namespace divrange::cli
