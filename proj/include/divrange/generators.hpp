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

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace divrange {

/**
 * A generator of an f-divergence: a convex function f on (0, inf) with
 * f(1) = 0, together with its two boundary limits
 *
 *   f(0)  = lim_{t->0}   f(t)
 *   f*(0) = lim_{t->inf} f(t) / t
 *
 * The limits are stored analytically for every catalog entry. Either may be
 * +inf. Evaluation that overflows saturates to +inf (a convex function with
 * f(1) = 0 cannot run off to -inf).
 *
 * Generators are immutable values; copies share nothing mutable.
 */
class Generator
{
public:
  using Function = std::function<double(double)>;

  Generator(std::string name, Function eval, double value_at_zero, double conjugate_at_zero,
            Function deriv1 = {}, Function deriv2 = {});

  std::string const &name() const noexcept
  {
    return name_;
  }

  /// f(t) for t > 0. t == 0 returns f(0); an indeterminate intermediate
  /// result (inf - inf) saturates to +inf.
  double eval(double t) const;

  double operator()(double t) const
  {
    return eval(t);
  }

  double value_at_zero() const noexcept
  {
    return value_at_zero_;
  }
  double conjugate_at_zero() const noexcept
  {
    return conjugate_at_zero_;
  }

  bool has_deriv1() const noexcept
  {
    return static_cast<bool>(deriv1_);
  }
  bool has_deriv2() const noexcept
  {
    return static_cast<bool>(deriv2_);
  }

  /// Closed-form derivatives. Calling these when absent throws std::logic_error.
  double deriv1(double t) const;
  double deriv2(double t) const;

private:
  std::string name_;
  Function    eval_;
  double      value_at_zero_;
  double      conjugate_at_zero_;
  Function    deriv1_;
  Function    deriv2_;
};

// Catalog ---------------------------------------------------------------------

/// Power generator phi_alpha(t) = (t^a - a(t-1) - 1) / (a(a-1)), with the
/// limits -ln t + t - 1 (a = 0) and t ln t - t + 1 (a = 1).
Generator make_power(double alpha);

/// |t - 1|, giving the L1 distance.
Generator make_total_variation();

/// (t-1)^2 / (4(t+1)), the symmetrised chi-square divergence.
Generator make_lecam();

/// (t ln t - (t+1) ln((t+1)/2)) / 2, the Jensen-Shannon divergence.
Generator make_jensen_shannon();

/// f*(t) = t f(1/t). The boundary limits swap roles.
Generator conjugate(Generator const &g);

// Spec strings ----------------------------------------------------------------

/// Raised by parse_spec; offset is the byte position of the problem.
class SpecError : public std::invalid_argument
{
public:
  SpecError(std::string const &what, std::size_t offset);

  std::size_t offset() const noexcept
  {
    return offset_;
  }

private:
  std::size_t offset_;
};

/**
 * Parses a generator spec:
 *
 *   spec := atom | "conj(" spec ")"
 *   atom := "power:" NUMBER | "tv" | "kl" | "rkl" | "hellinger" | "chi2"
 *         | "lecam" | "js"
 *
 * Names are case sensitive. kl, rkl, hellinger and chi2 are the power
 * generators of order 1, 0, 1/2 and 2.
 */
Generator parse_spec(std::string_view spec);

/// Named atoms accepted by parse_spec (without "power:").
std::vector<std::string> catalog_names();

}  // namespace divrange
