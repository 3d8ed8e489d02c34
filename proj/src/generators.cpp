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

#include "divrange/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace divrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_alpha(double alpha)
{
  std::ostringstream os;
  os.precision(17);
  os << alpha;
  return os.str();
}

}  // namespace

Generator::Generator(std::string name, Function eval, double value_at_zero,
                     double conjugate_at_zero, Function deriv1, Function deriv2)
  : name_(std::move(name))
  , eval_(std::move(eval))
  , value_at_zero_(value_at_zero)
  , conjugate_at_zero_(conjugate_at_zero)
  , deriv1_(std::move(deriv1))
  , deriv2_(std::move(deriv2))
{
  if (!eval_)
  {
    throw std::invalid_argument("generator '" + name_ + "' has no evaluation rule");
  }
}

double Generator::eval(double t) const
{
  if (t == 0.0)
  {
    return value_at_zero_;
  }
  double const v = eval_(t);
  return std::isnan(v) ? kInf : v;
}

double Generator::deriv1(double t) const
{
  if (!deriv1_)
  {
    throw std::logic_error("generator '" + name_ + "' has no closed-form first derivative");
  }
  return deriv1_(t);
}

double Generator::deriv2(double t) const
{
  if (!deriv2_)
  {
    throw std::logic_error("generator '" + name_ + "' has no closed-form second derivative");
  }
  return deriv2_(t);
}

Generator make_power(double alpha)
{
  if (!std::isfinite(alpha))
  {
    throw std::invalid_argument("power generator order must be finite");
  }

  std::string name = "power:" + format_alpha(alpha);

  double const at_zero = alpha > 0.0 ? 1.0 / alpha : kInf;
  double const conj_at_zero = alpha < 1.0 ? 1.0 / (1.0 - alpha) : kInf;

  // f'(t) = (t^(a-1) - 1)/(a-1) is also correct for a = 0.
  auto d1 = [alpha](double t) {
    if (alpha == 1.0)
    {
      return std::log(t);
    }
    return std::expm1((alpha - 1.0) * std::log(t)) / (alpha - 1.0);
  };
  auto d2 = [alpha](double t) { return std::pow(t, alpha - 2.0); };

  if (alpha == 0.0)
  {
    return {std::move(name), [](double t) { return std::max(0.0, -std::log(t) + (t - 1.0)); }, at_zero,
            conj_at_zero, d1, d2};
  }
  if (alpha == 1.0)
  {
    return {std::move(name), [](double t) { return std::max(0.0, t * std::log(t) - (t - 1.0)); }, at_zero,
            conj_at_zero, d1, d2};
  }

  double const denom = alpha * (alpha - 1.0);
  auto         f = [alpha, denom](double t) {
    double const v = (std::expm1(alpha * std::log(t)) - alpha * (t - 1.0)) / denom;
    // Rounding near t = 1 can leave a tiny negative value.
    return v < 0.0 ? 0.0 : v;
  };
  return {std::move(name), f, at_zero, conj_at_zero, d1, d2};
}

Generator make_total_variation()
{
  // deriv1 is the subgradient sign(t - 1); there is no second derivative at 1.
  return {"tv", [](double t) { return std::abs(t - 1.0); }, 1.0, 1.0,
          [](double t) { return t > 1.0 ? 1.0 : (t < 1.0 ? -1.0 : 0.0); }};
}

Generator make_lecam()
{
  auto f = [](double t) {
    double const d = t - 1.0;
    return d * (d / (4.0 * (t + 1.0)));
  };
  // f(t) = (t+1)/4 - 1 + 1/(t+1)
  auto d1 = [](double t) {
    double const s = t + 1.0;
    return 0.25 - 1.0 / (s * s);
  };
  auto d2 = [](double t) {
    double const s = t + 1.0;
    return 2.0 / (s * s * s);
  };
  return {"lecam", f, 0.25, 0.25, d1, d2};
}

Generator make_jensen_shannon()
{
  double const ln2 = std::log(2.0);
  // f(t) = ( t ln(2t/(t+1)) + ln(2/(t+1)) ) / 2, arranged so that neither
  // term overflows for large t.
  auto f = [ln2](double t) {
    double const log_ratio = t > 1.0 ? -std::log1p(1.0 / t) : std::log(t / (1.0 + t));
    double const v = 0.5 * (t * (ln2 + log_ratio) + ln2 - std::log1p(t));
    return v < 0.0 ? 0.0 : v;
  };
  auto d1 = [ln2](double t) {
    double const log_ratio = t > 1.0 ? -std::log1p(1.0 / t) : std::log(t / (1.0 + t));
    return 0.5 * (ln2 + log_ratio);
  };
  auto d2 = [](double t) { return 1.0 / (2.0 * t * (t + 1.0)); };
  return {"js", f, 0.5 * ln2, 0.5 * ln2, d1, d2};
}

Generator conjugate(Generator const &g)
{
  Generator::Function d1;
  Generator::Function d2;
  if (g.has_deriv1())
  {
    d1 = [g](double t) { return g.eval(1.0 / t) - g.deriv1(1.0 / t) / t; };
  }
  if (g.has_deriv2())
  {
    d2 = [g](double t) { return g.deriv2(1.0 / t) / (t * t * t); };
  }
  return {"conj(" + g.name() + ")", [g](double t) { return t * g.eval(1.0 / t); },
          g.conjugate_at_zero(), g.value_at_zero(), d1, d2};
}

// Spec parsing ----------------------------------------------------------------

SpecError::SpecError(std::string const &what, std::size_t offset)
  : std::invalid_argument(what + " at offset " + std::to_string(offset))
  , offset_(offset)
{}

namespace {

class SpecParser
{
public:
  explicit SpecParser(std::string_view text)
    : text_(text)
  {}

  Generator parse()
  {
    Generator g = parse_spec_at();
    if (pos_ != text_.size())
    {
      if (text_[pos_] == ')')
      {
        throw SpecError("unbalanced conjugation: unexpected ')'", pos_);
      }
      throw SpecError("unexpected trailing input", pos_);
    }
    return g;
  }

private:
  static constexpr std::string_view kConj = "conj(";
  static constexpr std::string_view kPower = "power:";

  Generator parse_spec_at()
  {
    if (text_.substr(pos_).starts_with(kConj))
    {
      pos_ += kConj.size();
      Generator inner = parse_spec_at();
      if (pos_ >= text_.size() || text_[pos_] != ')')
      {
        throw SpecError("unbalanced conjugation: expected ')'", pos_);
      }
      ++pos_;
      return conjugate(inner);
    }
    return parse_atom();
  }

  Generator parse_atom()
  {
    std::size_t const start = pos_;
    if (text_.substr(pos_).starts_with(kPower))
    {
      pos_ += kPower.size();
      return make_power(parse_number());
    }

    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ')' && text_[end] != '(')
    {
      ++end;
    }
    std::string_view const name = text_.substr(start, end - start);
    pos_ = end;

    if (name == "tv")
    {
      return make_total_variation();
    }
    if (name == "kl")
    {
      return make_power(1.0);
    }
    if (name == "rkl")
    {
      return make_power(0.0);
    }
    if (name == "hellinger")
    {
      return make_power(0.5);
    }
    if (name == "chi2")
    {
      return make_power(2.0);
    }
    if (name == "lecam")
    {
      return make_lecam();
    }
    if (name == "js")
    {
      return make_jensen_shannon();
    }
    if (name.empty())
    {
      throw SpecError("expected a generator name", start);
    }
    throw SpecError("unknown generator '" + std::string(name) + "'", start);
  }

  // NUMBER: optional sign, digits, optional fraction, optional exponent.
  double parse_number()
  {
    std::size_t const start = pos_;
    std::size_t       end = pos_;
    while (end < text_.size() && text_[end] != ')')
    {
      ++end;
    }
    std::string_view const token = text_.substr(start, end - start);

    bool valid = !token.empty();
    bool seen_digit = false;
    for (std::size_t i = 0; valid && i < token.size(); ++i)
    {
      char const c = token[i];
      if (c >= '0' && c <= '9')
      {
        seen_digit = true;
      }
      else if (!(c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E'))
      {
        valid = false;
      }
    }
    valid = valid && seen_digit;

    double value = 0.0;
    if (valid)
    {
      std::string_view body = token;
      if (body.front() == '+')
      {
        body.remove_prefix(1);
      }
      auto const [ptr, ec] =
          std::from_chars(body.data(), body.data() + body.size(), value,
                          std::chars_format::general);
      valid = ec == std::errc() && ptr == body.data() + body.size() && std::isfinite(value);
    }
    if (!valid)
    {
      throw SpecError("malformed parameter '" + std::string(token) + "'", start);
    }
    pos_ = end;
    return value;
  }

  std::string_view text_;
  std::size_t      pos_ = 0;
};

}  // namespace

Generator parse_spec(std::string_view spec)
{
  return SpecParser(spec).parse();
}

std::vector<std::string> catalog_names()
{
  return {"tv", "kl", "rkl", "hellinger", "chi2", "lecam", "js"};
}

}  // namespace divrange
