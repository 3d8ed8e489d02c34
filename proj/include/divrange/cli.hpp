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
#include "divrange/jointrange.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace divrange::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOutside = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitAchieve = 4;

enum class Format
{
  csv,
  json,
  svg
};

struct RunConfig
{
  std::string                    command;
  std::string                    f_spec = "tv";
  std::string                    g_spec = "tv";
  int                            grid = 512;
  Window                         window{};
  double                         tol = 1e-6;
  std::uint64_t                  seed = 1;
  std::size_t                    dim = 8;
  std::size_t                    trials = 10000;
  std::optional<DivergencePoint> target;
  std::string                    out;
  Format                         format = Format::csv;
  std::vector<double>            xs;  // envelope abscissae; empty selects a default grid
};

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Formatting ------------------------------------------------------------------

/// Shortest decimal that parses back to the same double; "inf", "-inf",
/// "nan" for the non-finite values.
std::string format_number(double v);

/// Inverse of format_number. Throws std::invalid_argument.
double parse_number(std::string const &text);

/// Writes content to path through a temporary file and a rename. Throws IoError.
void write_atomic(std::string const &path, std::string const &content);

std::string cloud_csv(PointCloud const &cloud);
std::string hull_csv(ConvexRegion const &region);
std::string envelope_csv(Envelope const &env);

/// Static plot of the cloud, hull and a reference curve for known pairs.
std::string range_svg(std::string const &f_name, std::string const &g_name, RangeResult const &range);
std::string envelope_svg(ConvexRegion const &region, Envelope const &env);

// Commands --------------------------------------------------------------------

int cmd_range(RunConfig const &config, std::ostream &out, std::ostream &err);
int cmd_envelope(RunConfig const &config, std::ostream &out, std::ostream &err);
int cmd_singular(RunConfig const &config, std::ostream &out, std::ostream &err);
int cmd_limits(RunConfig const &config, std::ostream &out, std::ostream &err);
int cmd_achieve(RunConfig const &config, std::ostream &out, std::ostream &err);
int cmd_verify(RunConfig const &config, std::ostream &out, std::ostream &err);

/// Dispatches on config.command. Unknown commands exit with kExitUsage.
int run(RunConfig const &config, std::ostream &out, std::ostream &err);

}  // namespace divrange::cli
