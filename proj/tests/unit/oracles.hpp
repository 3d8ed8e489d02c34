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

// Reference formulas written directly from the textbook definitions of each
// divergence, independent of the generator machinery under test.

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

inline double total_variation(std::vector<double> const &P, std::vector<double> const &Q)
{
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
  {
    s += std::abs(P[i] - Q[i]);
  }
  return s;
}

inline double kl(std::vector<double> const &P, std::vector<double> const &Q)
{
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
  {
    if (P[i] > 0.0)
    {
      s += P[i] * std::log(P[i] / Q[i]);
    }
  }
  return s;
}

// Neyman-style chi-square with the 1/2 normalisation of the power family.
inline double half_chi2(std::vector<double> const &P, std::vector<double> const &Q)
{
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
  {
    s += (P[i] - Q[i]) * (P[i] - Q[i]) / Q[i];
  }
  return 0.5 * s;
}

inline double hellinger(std::vector<double> const &P, std::vector<double> const &Q)
{
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
  {
    double const d = std::sqrt(P[i]) - std::sqrt(Q[i]);
    s += d * d;
  }
  return 2.0 * s;
}

// Triangular discrimination / 4.
inline double lecam(std::vector<double> const &P, std::vector<double> const &Q)
{
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
  {
    if (P[i] + Q[i] > 0.0)
    {
      s += (P[i] - Q[i]) * (P[i] - Q[i]) / (P[i] + Q[i]);
    }
  }
  return 0.25 * s;
}

// (KL(P||M) + KL(Q||M)) / 2 with M the average.
inline double jensen_shannon(std::vector<double> const &P, std::vector<double> const &Q)
{
  std::vector<double> M(P.size());
  for (std::size_t i = 0; i < P.size(); ++i)
  {
    M[i] = 0.5 * (P[i] + Q[i]);
  }
  return 0.5 * (kl(P, M) + kl(Q, M));
}

// sum q (t^a - a(t-1) - 1) / (a(a-1)) evaluated as sum p^a q^(1-a) - 1.
inline double power(double a, std::vector<double> const &P, std::vector<double> const &Q)
{
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
  {
    s += std::pow(P[i], a) * std::pow(Q[i], 1.0 - a);
  }
  return (s - 1.0) / (a * (a - 1.0));
}

inline std::vector<double> random_simplex(std::mt19937_64 &rng, std::size_t d)
{
  std::exponential_distribution<double> e(1.0);
  std::vector<double>                   m(d);
  double                                total = 0.0;
  for (double &x : m)
  {
    x = e(rng);
    total += x;
  }
  for (double &x : m)
  {
    x /= total;
  }
  return m;
}

inline bool close(double a, double b, double tol)
{
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace oracle
