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

#include "divrange/analysis.hpp"

#include "divrange/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

namespace divrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool interior(TrianglePoint t)
{
  return t.p() > 0.0 && t.p() < t.q() && t.q() < 1.0;
}

}  // namespace

// Partials --------------------------------------------------------------------

namespace {

Partials closed_form_partials(Generator const &f, Generator const &g, double p, double q)
{
  double const v = p / q;
  double const u = (1.0 - p) / (1.0 - q);
  auto d_dp = [&](Generator const &h) { return h.deriv1(v) - h.deriv1(u); };
  auto d_dq = [&](Generator const &h) {
    return h.eval(v) - v * h.deriv1(v) - h.eval(u) + u * h.deriv1(u);
  };
  return {d_dp(f), d_dq(f), d_dp(g), d_dq(g)};
}

Partials difference_partials(Generator const &f, Generator const &g, double p, double q, double h)
{
  double const step = std::min(h, 0.5 * std::min({p, q - p, 1.0 - q}));
  auto         central = [&](Generator const &k, double p0, double q0, double p1, double q1) {
    double const hi = binary_divergence(k, p1, q1);
    double const lo = binary_divergence(k, p0, q0);
    if (!std::isfinite(hi) || !std::isfinite(lo))
    {
      throw std::domain_error("divergence is not finite on the difference stencil");
    }
    return (hi - lo) / (2.0 * step);
  };
  return {central(f, p - step, q, p + step, q), central(f, p, q - step, p, q + step),
          central(g, p - step, q, p + step, q), central(g, p, q - step, p, q + step)};
}

}  // namespace

Partials two_point_partials(Generator const &f, Generator const &g, TrianglePoint t, double h,
                            DerivativeMode mode)
{
  if (!interior(t))
  {
    throw std::domain_error("partials need 0 < p < q < 1");
  }
  if (!(h > 0.0))
  {
    throw std::invalid_argument("difference step must be positive");
  }
  bool const closed = mode == DerivativeMode::closed_form ||
                      (mode == DerivativeMode::automatic && f.has_deriv1() && g.has_deriv1());
  if (closed)
  {
    return closed_form_partials(f, g, t.p(), t.q());
  }
  return difference_partials(f, g, t.p(), t.q(), h);
}

double jacobian_det(Generator const &f, Generator const &g, TrianglePoint t, double h,
                    DerivativeMode mode)
{
  Partials const d = two_point_partials(f, g, t, h, mode);
  return d.df_dp * d.dg_dq - d.dg_dp * d.df_dq;
}

// Singular locus --------------------------------------------------------------

namespace {

class DisjointSets
{
public:
  explicit DisjointSets(std::size_t n)
    : parent_(n)
  {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x)
  {
    while (parent_[x] != x)
    {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b)
    {
      parent_[std::max(a, b)] = std::min(a, b);
    }
  }

private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<SingularPoint> singular_locus(Generator const &f, Generator const &g, int n, double tol)
{
  if (n < 8)
  {
    throw std::invalid_argument("singular_locus needs n >= 8");
  }
  if (!(tol > 0.0))
  {
    throw std::invalid_argument("bisection tolerance must be positive");
  }
  auto const  N = static_cast<std::size_t>(n);
  auto        coord = [n](std::size_t k) { return (static_cast<double>(k) + 1.0 / 3.0) / n; };
  auto        node = [N](std::size_t i, std::size_t j) { return i * N + j; };
  auto        det_at = [&](double p, double q) { return jacobian_det(f, g, TrianglePoint(p, q)); };

  // Offset nodes keep lines such as q = 1/2 or p + q = 1 off the grid.
  std::vector<double> det(N * N, kNaN);
  parallel_for(N, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j)
    {
      for (std::size_t i = 0; i < j; ++i)
      {
        det[node(i, j)] = det_at(coord(i), coord(j));
      }
    }
  });

  // Feature ids: 2*node for the edge towards +p, 2*node + 1 for the edge
  // towards +q, 2*N*N + node for a node where the determinant is exactly 0.
  std::size_t const         zero_base = 2 * N * N;
  std::vector<char>         active(zero_base + N * N, 0);
  std::vector<TrianglePoint> located(zero_base + N * N, TrianglePoint(0.0, 0.0));

  auto bisect = [&](double lo, double hi, double fixed, bool along_p, double d_lo) {
    while (hi - lo >= tol)
    {
      double const mid = 0.5 * (lo + hi);
      double const d_mid = along_p ? det_at(mid, fixed) : det_at(fixed, mid);
      if (d_mid == 0.0)
      {
        lo = hi = mid;
        break;
      }
      if ((d_mid < 0.0) == (d_lo < 0.0))
      {
        lo = mid;
        d_lo = d_mid;
      }
      else
      {
        hi = mid;
      }
    }
    double const root = 0.5 * (lo + hi);
    return along_p ? TrianglePoint(root, fixed) : TrianglePoint(fixed, root);
  };

  for (std::size_t i = 0; i < N; ++i)
  {
    for (std::size_t j = i + 1; j < N; ++j)
    {
      double const d0 = det[node(i, j)];
      if (d0 == 0.0)
      {
        active[zero_base + node(i, j)] = 1;
        located[zero_base + node(i, j)] = TrianglePoint(coord(i), coord(j));
        continue;
      }
      if (i + 1 < j)
      {
        double const d1 = det[node(i + 1, j)];
        if (d1 != 0.0 && (d0 < 0.0) != (d1 < 0.0))
        {
          active[2 * node(i, j)] = 1;
          located[2 * node(i, j)] = bisect(coord(i), coord(i + 1), coord(j), true, d0);
        }
      }
      if (j + 1 < N)
      {
        double const d1 = det[node(i, j + 1)];
        if (d1 != 0.0 && (d0 < 0.0) != (d1 < 0.0))
        {
          active[2 * node(i, j) + 1] = 1;
          located[2 * node(i, j) + 1] = bisect(coord(j), coord(j + 1), coord(i), false, d0);
        }
      }
    }
  }

  // A cell joins every feature on its boundary.
  DisjointSets sets(active.size());
  auto         join_cell = [&](std::vector<std::size_t> const &features) {
    std::size_t first = active.size();
    for (std::size_t id : features)
    {
      if (!active[id])
      {
        continue;
      }
      if (first == active.size())
      {
        first = id;
      }
      else
      {
        sets.unite(first, id);
      }
    }
  };
  for (std::size_t i = 0; i + 1 < N; ++i)
  {
    for (std::size_t j = i + 1; j + 1 < N; ++j)
    {
      if (i + 1 < j)
      {
        // square (i, j) - (i+1, j+1)
        join_cell({2 * node(i, j), 2 * node(i, j) + 1, 2 * node(i + 1, j) + 1,
                   2 * node(i, j + 1), zero_base + node(i, j), zero_base + node(i + 1, j),
                   zero_base + node(i, j + 1), zero_base + node(i + 1, j + 1)});
      }
      else
      {
        // triangle (i, i+1), (i, i+2), (i+1, i+2) next to the diagonal
        join_cell({2 * node(i, j) + 1, 2 * node(i, j + 1), zero_base + node(i, j),
                   zero_base + node(i, j + 1), zero_base + node(i + 1, j + 1)});
      }
    }
  }

  std::vector<SingularPoint>  out;
  std::vector<std::ptrdiff_t> label(active.size(), -1);
  int                         next = 0;
  for (std::size_t id = 0; id < active.size(); ++id)
  {
    if (!active[id])
    {
      continue;
    }
    std::size_t const root = sets.find(id);
    if (label[root] < 0)
    {
      label[root] = next++;
    }
    out.push_back({located[id], static_cast<int>(label[root])});
  }
  return out;
}

// Limit ratios ----------------------------------------------------------------

namespace {

constexpr int    kTailSamples = 60;
constexpr int    kTailLength = 10;
constexpr double kDivergenceThreshold = 1e12;

struct TailSummary
{
  double lo = kNaN;
  double hi = kNaN;
  bool   indeterminate = false;
};

// Strictly increasing and either huge or not slowing down.
bool diverges(std::vector<double> const &tail)
{
  for (std::size_t i = 1; i < tail.size(); ++i)
  {
    if (!(tail[i] > tail[i - 1]))
    {
      return false;
    }
  }
  double const first_step = tail[1] - tail[0];
  double const last_step = tail.back() - tail[tail.size() - 2];
  return tail.back() > kDivergenceThreshold || last_step >= 0.9 * first_step;
}

TailSummary summarize_tail(Generator const &f, Generator const &g, bool at_zero)
{
  std::vector<double> ratios;
  for (int k = 1; k <= kTailSamples; ++k)
  {
    double const t = std::ldexp(1.0, at_zero ? -k : k);
    double const fv = f.eval(t);
    double const gv = g.eval(t);
    if (!(fv > 0.0) || !std::isfinite(fv) || !std::isfinite(gv))
    {
      continue;
    }
    ratios.push_back(gv / fv);
  }
  TailSummary summary;
  if (ratios.size() < static_cast<std::size_t>(kTailLength))
  {
    summary.indeterminate = true;
    return summary;
  }
  std::vector<double> tail(ratios.end() - kTailLength, ratios.end());

  if (diverges(tail))
  {
    summary.lo = summary.hi = kInf;
    return summary;
  }
  std::vector<double> inverse;
  bool                positive = true;
  for (double r : tail)
  {
    positive = positive && r > 0.0;
    inverse.push_back(1.0 / r);
  }
  if (positive && diverges(inverse))
  {
    summary.lo = summary.hi = 0.0;
    return summary;
  }
  auto const [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  summary.lo = *lo;
  summary.hi = *hi;
  return summary;
}

}  // namespace

LimitRatios limit_ratios(Generator const &f, Generator const &g)
{
  LimitRatios      r;
  TailSummary const zero = summarize_tail(f, g, true);
  TailSummary const inf = summarize_tail(f, g, false);
  r.beta0_at_zero = zero.lo;
  r.gamma0_at_zero = zero.hi;
  r.beta0_at_inf = inf.lo;
  r.gamma0_at_inf = inf.hi;
  r.indeterminate_at_zero = zero.indeterminate;
  r.indeterminate_at_inf = inf.indeterminate;
  r.f_zero_infinite = std::isinf(f.value_at_zero());
  r.f_conj_infinite = std::isinf(f.conjugate_at_zero());
  r.g_zero_infinite = std::isinf(g.value_at_zero());
  r.g_conj_infinite = std::isinf(g.conjugate_at_zero());
  return r;
}

std::vector<Ray> recession_rays(LimitRatios const &ratios)
{
  std::vector<double> slopes;
  auto                take = [&](bool applies, bool indeterminate, double lo, double hi) {
    if (applies && !indeterminate && !std::isnan(lo) && !std::isnan(hi))
    {
      slopes.push_back(lo);
      slopes.push_back(hi);
    }
  };
  take(ratios.f_zero_infinite || ratios.g_zero_infinite, ratios.indeterminate_at_zero,
       ratios.beta0_at_zero, ratios.gamma0_at_zero);
  take(ratios.f_conj_infinite || ratios.g_conj_infinite, ratios.indeterminate_at_inf,
       ratios.beta0_at_inf, ratios.gamma0_at_inf);
  if (slopes.empty())
  {
    return {};
  }
  auto direction = [](double s) {
    if (std::isinf(s))
    {
      return Ray{0.0, 1.0};
    }
    double const len = std::hypot(1.0, s);
    return Ray{1.0 / len, s / len};
  };
  auto const [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
  std::vector<Ray> rays{direction(*lo)};
  if (*hi != *lo)
  {
    rays.push_back(direction(*hi));
  }
  return rays;
}

// Ratio bound -----------------------------------------------------------------

namespace {

double curvature_at_one(Generator const &k)
{
  if (k.has_deriv2())
  {
    return k.deriv2(1.0);
  }
  auto second = [&](double h) { return (k.eval(1.0 + h) - 2.0 * k.eval(1.0) + k.eval(1.0 - h)) / (h * h); };
  double const coarse = second(1e-3);
  double const fine = second(1e-4);
  if (!(std::abs(coarse - fine) <= 0.01 * std::abs(fine)))
  {
    throw std::domain_error("generator '" + k.name() + "' is not twice differentiable at 1");
  }
  return fine;
}

}  // namespace

std::optional<double> ratio_bound_exists(Generator const &f, Generator const &g)
{
  double const cf = curvature_at_one(f);
  double const cg = curvature_at_one(g);
  if (!(cf > 0.0) || !(cg > 0.0))
  {
    throw std::domain_error("second derivative at 1 is not positive");
  }
  LimitRatios const r = limit_ratios(f, g);
  if (!(r.beta0_at_zero > 0.0) || !(r.beta0_at_inf > 0.0))
  {
    return std::nullopt;
  }
  double beta = std::min({cg / cf, r.beta0_at_zero, r.beta0_at_inf});
  for (int k = -480; k <= 480; ++k)
  {
    if (k == 0)
    {
      continue;
    }
    double const t = std::exp2(k / 8.0);
    double const fv = f.eval(t);
    if (fv > 0.0 && std::isfinite(fv))
    {
      beta = std::min(beta, g.eval(t) / fv);
    }
  }
  return beta;
}

// Excess witness --------------------------------------------------------------

namespace {

// A coordinate together with its exact complement.
struct Coordinate
{
  double c;
  double complement;
};

std::vector<Coordinate> witness_grid()
{
  std::vector<Coordinate> grid;
  for (int k = 1; k <= 1022; ++k)
  {
    double const e = std::ldexp(1.0, -k);
    grid.push_back({e, 1.0 - e});
    grid.push_back({1.0 - e, e});
  }
  for (int j = 0; j <= 64; ++j)
  {
    grid.push_back({j / 64.0, (64 - j) / 64.0});
  }
  std::sort(grid.begin(), grid.end(), [](Coordinate a, Coordinate b) {
    return a.c < b.c || (a.c == b.c && a.complement > b.complement);
  });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](Coordinate a, Coordinate b) {
                           return a.c == b.c && a.complement == b.complement;
                         }),
             grid.end());
  return grid;
}

}  // namespace

ExcessWitness excess_witness(Generator const &f, Generator const &g, double gamma)
{
  std::vector<Coordinate> const grid = witness_grid();

  struct Best
  {
    double      excess = -kInf;
    std::size_t i = 0;
    std::size_t j = 0;
  };
  std::mutex lock;
  Best       best;

  parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    Best local;
    for (std::size_t j = begin; j < end; ++j)
    {
      std::array<double, 2> const Q{grid[j].complement, grid[j].c};
      for (std::size_t i = 0; i <= j; ++i)
      {
        std::array<double, 2> const P{grid[i].complement, grid[i].c};
        double const                x = binary_divergence(f, P, Q);
        double const                y = binary_divergence(g, P, Q);
        if (!std::isfinite(x) || !std::isfinite(y))
        {
          continue;
        }
        double const e = y - gamma * x;
        if (e > local.excess)
        {
          local = {e, i, j};
        }
      }
    }
    std::lock_guard<std::mutex> guard(lock);
    if (local.excess > best.excess ||
        (local.excess == best.excess && std::pair(local.j, local.i) < std::pair(best.j, best.i)))
    {
      best = local;
    }
  });

  ExcessWitness w;
  if (!std::isfinite(best.excess))
  {
    w.excess = -kInf;
    return w;
  }
  Coordinate const p = grid[best.i];
  Coordinate const q = grid[best.j];
  w.at = TrianglePoint(p.c, q.c);
  w.P = DiscreteDistribution({p.complement, p.c});
  w.Q = DiscreteDistribution({q.complement, q.c});
  w.value = {binary_divergence(f, {p.complement, p.c}, {q.complement, q.c}),
             binary_divergence(g, {p.complement, p.c}, {q.complement, q.c})};
  w.excess = best.excess;
  return w;
}

// Achieve ---------------------------------------------------------------------

AchieveError::AchieveError(std::string const &what, double best_residual)
  : std::runtime_error(what)
  , best_residual_(best_residual)
{
}

namespace {

struct Params
{
  double p;
  double q;
};

void clamp_to_triangle(Params &t)
{
  t.p = std::clamp(t.p, 0.0, 1.0);
  t.q = std::clamp(t.q, 0.0, 1.0);
  if (t.p > t.q)
  {
    double const m = 0.5 * (t.p + t.q);
    t.p = t.q = m;
  }
}

class PairMap
{
public:
  PairMap(Generator const &f, Generator const &g)
    : f_(f)
    , g_(g)
  {
  }

  DivergencePoint operator()(Params t) const
  {
    return {binary_divergence(f_, t.p, t.q), binary_divergence(g_, t.p, t.q)};
  }

  // One-sided differences that stay inside the triangle. Columns are
  // d/dp and d/dq; a column is zero when no step fits.
  std::array<DivergencePoint, 2> jacobian(Params t, DivergencePoint at) const
  {
    std::array<DivergencePoint, 2> J{};
    for (int axis = 0; axis < 2; ++axis)
    {
      double const x = axis == 0 ? t.p : t.q;
      double const h = 1e-7 * std::max(1e-7, std::min(x, 1.0 - x));
      for (double sign : {1.0, -1.0})
      {
        Params s = t;
        (axis == 0 ? s.p : s.q) += sign * h;
        if (!TrianglePoint::valid(s.p, s.q))
        {
          continue;
        }
        DivergencePoint const v = (*this)(s);
        if (!v.finite())
        {
          continue;
        }
        J[axis] = {sign * (v.x - at.x) / h, sign * (v.y - at.y) / h};
        break;
      }
    }
    return J;
  }

private:
  Generator const &f_;
  Generator const &g_;
};

double distance(DivergencePoint a, DivergencePoint b)
{
  if (!a.finite() || !b.finite())
  {
    return kInf;
  }
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Levenberg-Marquardt on F(t) = target.
Params solve_single(PairMap const &F, Params t, DivergencePoint target, double goal)
{
  DivergencePoint value = F(t);
  double          residual = distance(value, target);
  double          lambda = 1e-3;
  for (int it = 0; it < 200 && residual > goal; ++it)
  {
    auto const   J = F.jacobian(t, value);
    double const rx = value.x - target.x;
    double const ry = value.y - target.y;
    // Normal equations of the 2x2 system.
    double const a = J[0].x * J[0].x + J[0].y * J[0].y;
    double const b = J[0].x * J[1].x + J[0].y * J[1].y;
    double const d = J[1].x * J[1].x + J[1].y * J[1].y;
    double const g0 = J[0].x * rx + J[0].y * ry;
    double const g1 = J[1].x * rx + J[1].y * ry;
    bool         improved = false;
    for (int attempt = 0; attempt < 12 && !improved; ++attempt)
    {
      double const A = a * (1.0 + lambda) + 1e-300;
      double const D = d * (1.0 + lambda) + 1e-300;
      double const det = A * D - b * b;
      if (!(std::abs(det) > 0.0))
      {
        lambda *= 4.0;
        continue;
      }
      Params trial{t.p - (D * g0 - b * g1) / det, t.q - (A * g1 - b * g0) / det};
      clamp_to_triangle(trial);
      DivergencePoint const v = F(trial);
      double const          r = distance(v, target);
      if (r < residual)
      {
        t = trial;
        value = v;
        residual = r;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
      }
      else
      {
        lambda *= 4.0;
      }
    }
    if (!improved)
    {
      break;
    }
  }
  return t;
}

struct Candidate
{
  Params t1{0.0, 0.0};
  Params t2{0.0, 0.0};
  double alpha = 1.0;
  double residual = kInf;
};

double mixture_residual(PairMap const &F, Params t1, Params t2, double alpha, DivergencePoint target)
{
  DivergencePoint const a = F(t1);
  DivergencePoint const b = F(t2);
  if (!a.finite() || !b.finite())
  {
    return kInf;
  }
  return std::hypot(alpha * a.x + (1.0 - alpha) * b.x - target.x,
                    alpha * a.y + (1.0 - alpha) * b.y - target.y);
}

double best_weight(DivergencePoint a, DivergencePoint z, DivergencePoint target)
{
  double const dx = z.x - a.x;
  double const dy = z.y - a.y;
  double const len2 = dx * dx + dy * dy;
  if (!(len2 > 0.0))
  {
    return 1.0;
  }
  return std::clamp(((z.x - target.x) * dx + (z.y - target.y) * dy) / len2, 0.0, 1.0);
}

// Moves t2 onto the line from a through target, beyond target.
Params slide_onto_ray(PairMap const &F, Params t2, DivergencePoint a, DivergencePoint target)
{
  double const ux0 = target.x - a.x;
  double const uy0 = target.y - a.y;
  double const reach = std::hypot(ux0, uy0);
  double const ux = ux0 / reach;
  double const uy = uy0 / reach;
  auto         offset = [&](DivergencePoint z) { return ux * (z.y - a.y) - uy * (z.x - a.x); };
  auto         along = [&](DivergencePoint z) { return ux * (z.x - a.x) + uy * (z.y - a.y); };

  DivergencePoint value = F(t2);
  for (int it = 0; it < 60; ++it)
  {
    double const h = offset(value);
    if (std::abs(h) < 1e-15 * std::max(1.0, reach))
    {
      break;
    }
    auto const   J = F.jacobian(t2, value);
    double const gp = ux * J[0].y - uy * J[0].x;
    double const gq = ux * J[1].y - uy * J[1].x;
    double const norm2 = gp * gp + gq * gq;
    if (!(norm2 > 0.0))
    {
      break;
    }
    bool   moved = false;
    double scale = 1.0;
    for (int attempt = 0; attempt < 30 && !moved; ++attempt, scale *= 0.5)
    {
      Params trial{t2.p - scale * h * gp / norm2, t2.q - scale * h * gq / norm2};
      clamp_to_triangle(trial);
      DivergencePoint const v = F(trial);
      if (v.finite() && along(v) >= reach && std::abs(offset(v)) < std::abs(h))
      {
        t2 = trial;
        value = v;
        moved = true;
      }
    }
    if (!moved)
    {
      break;
    }
  }
  return t2;
}

// Pattern search over (p1, q1, p2, q2, alpha).
Candidate polish(PairMap const &F, Candidate c, DivergencePoint target, double goal)
{
  std::array<double, 5> x{c.t1.p, c.t1.q, c.t2.p, c.t2.q, c.alpha};
  std::array<double, 5> step{1e-3, 1e-3, 1e-3, 1e-3, 1e-3};
  auto                  evaluate = [&](std::array<double, 5> const &v) {
    if (!TrianglePoint::valid(v[0], v[1]) || !TrianglePoint::valid(v[2], v[3]) ||
        !(v[4] >= 0.0 && v[4] <= 1.0))
    {
      return kInf;
    }
    return mixture_residual(F, {v[0], v[1]}, {v[2], v[3]}, v[4], target);
  };
  double residual = evaluate(x);
  for (int it = 0; it < 10000 && residual > goal; ++it)
  {
    bool improved = false;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
      for (double sign : {1.0, -1.0})
      {
        auto trial = x;
        trial[k] += sign * step[k];
        double const r = evaluate(trial);
        if (r < residual)
        {
          x = trial;
          residual = r;
          step[k] *= 2.0;
          improved = true;
          break;
        }
      }
      if (!improved)
      {
        step[k] *= 0.5;
      }
    }
    if (*std::max_element(step.begin(), step.end()) < 1e-17)
    {
      break;
    }
  }
  if (residual < c.residual)
  {
    c = {{x[0], x[1]}, {x[2], x[3]}, x[4], residual};
  }
  return c;
}

std::vector<std::size_t> nearest(std::vector<DivergencePoint> const &points, DivergencePoint target,
                                 std::size_t count)
{
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      double const da = distance(points[a], target);
                      double const db = distance(points[b], target);
                      return da < db || (da == db && a < b);
                    });
  idx.resize(count);
  return idx;
}

}  // namespace

MixturePair achieve(Generator const &f, Generator const &g, RangeResult const &range,
                    DivergencePoint target, double tol)
{
  if (!(tol > 0.0))
  {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (!target.finite())
  {
    throw std::invalid_argument("target must be finite");
  }
  if (contains(range.region, target, tol) != Membership::inside)
  {
    throw std::invalid_argument("target is not inside the computed region");
  }

  PairMap const F(f, g);
  auto const   &cloud = range.cloud.finite_points;
  auto const   &params = range.cloud.params;
  double const  goal = 0.25 * tol;
  Candidate     best;

  auto consider = [&](Candidate c) {
    if (c.residual < best.residual)
    {
      best = c;
    }
  };

  // (i) one binary pair.
  std::vector<std::size_t> const close = nearest(cloud, target, 8);
  for (std::size_t i : close)
  {
    Params const start{params[i].p(), params[i].q()};
    consider({start, start, 1.0, distance(cloud[i], target)});
    if (best.residual <= goal)
    {
      break;
    }
    Params const t = solve_single(F, start, target, goal);
    consider({t, t, 1.0, distance(F(t), target)});
    if (best.residual <= goal)
    {
      break;
    }
  }

  // (ii) a segment between two binary pairs through the target.
  if (best.residual > goal)
  {
    std::vector<std::size_t> anchors(close.begin(), close.end());
    auto const              &hull_params = range.region.hull_params();
    std::size_t const        stride = std::max<std::size_t>(1, hull_params.size() / 512);
    std::vector<Params>      starts;
    for (std::size_t i : anchors)
    {
      starts.push_back({params[i].p(), params[i].q()});
    }
    for (std::size_t i = 0; i < hull_params.size(); i += stride)
    {
      starts.push_back({hull_params[i].p(), hull_params[i].q()});
    }

    for (Params const t1 : starts)
    {
      DivergencePoint const a = F(t1);
      double const          reach = distance(a, target);
      if (!(reach > 0.0) || !std::isfinite(reach))
      {
        continue;
      }
      double const ux = (target.x - a.x) / reach;
      double const uy = (target.y - a.y) / reach;

      std::size_t pick = cloud.size();
      double      pick_offset = kInf;
      for (std::size_t k = 0; k < cloud.size(); ++k)
      {
        double const ax = ux * (cloud[k].x - a.x) + uy * (cloud[k].y - a.y);
        if (ax < reach)
        {
          continue;
        }
        double const off = std::abs(ux * (cloud[k].y - a.y) - uy * (cloud[k].x - a.x));
        if (off < pick_offset)
        {
          pick_offset = off;
          pick = k;
        }
      }
      if (pick == cloud.size())
      {
        continue;
      }
      Params const          t2 = slide_onto_ray(F, {params[pick].p(), params[pick].q()}, a, target);
      DivergencePoint const z = F(t2);
      double const          alpha = best_weight(a, z, target);
      consider({t1, t2, alpha, mixture_residual(F, t1, t2, alpha, target)});
      if (best.residual <= goal)
      {
        break;
      }
    }
  }

  // (iii) local refinement of both endpoints and the weight.
  if (best.residual > goal && std::isfinite(best.residual))
  {
    best = polish(F, best, target, goal);
  }
  if (!std::isfinite(best.residual))
  {
    throw AchieveError("no finite candidate mixture was found", best.residual);
  }

  TrianglePoint const t1(best.t1.p, best.t1.q);
  TrianglePoint const t2(best.t2.p, best.t2.q);
  auto [P, Q] = block_mixture(DiscreteDistribution::binary(t2.p()), DiscreteDistribution::binary(t2.q()),
                              DiscreteDistribution::binary(t1.p()), DiscreteDistribution::binary(t1.q()),
                              best.alpha);
  DivergencePoint const achieved = divergence_pair(f, g, P, Q);
  double const          residual = distance(achieved, target);
  if (!(residual <= tol))
  {
    throw AchieveError("best mixture misses the target by " + std::to_string(residual),
                       std::isfinite(residual) ? std::min(residual, best.residual) : best.residual);
  }
  return {t1, t2, best.alpha, std::move(P), std::move(Q), achieved, residual};
}

// Monte Carlo -----------------------------------------------------------------

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

DiscreteDistribution sample_simplex(std::size_t d, std::uint64_t seed, std::uint64_t stream)
{
  if (d == 0)
  {
    throw std::invalid_argument("simplex dimension must be positive");
  }
  std::uint64_t const key = mix64(seed ^ mix64(stream + kGolden));
  std::vector<double> masses(d);
  double              total = 0.0;
  for (std::size_t k = 0; k < d; ++k)
  {
    std::uint64_t const bits = mix64(key + (k + 1) * kGolden);
    double const        u = std::ldexp(static_cast<double>((bits >> 11) + 1), -53);
    masses[k] = -std::log(u);
    total += masses[k];
  }
  for (double &m : masses)
  {
    m /= total;
  }
  return DiscreteDistribution(std::move(masses));
}

MembershipReport verify_membership(Generator const &f, Generator const &g,
                                   ConvexRegion const &region, std::size_t d,
                                   std::size_t trials, std::uint64_t seed, double tol)
{
  if (d < 2)
  {
    throw std::invalid_argument("verification needs d >= 2");
  }
  Window const     w = region.window();
  MembershipReport total;
  total.worst_margin = -kInf;
  std::mutex lock;

  parallel_for(trials, [&](std::size_t begin, std::size_t end) {
    MembershipReport local;
    local.worst_margin = -kInf;
    for (std::size_t i = begin; i < end; ++i)
    {
      DiscreteDistribution const P = sample_simplex(d, seed, 2 * i);
      DiscreteDistribution const Q = sample_simplex(d, seed, 2 * i + 1);
      DivergencePoint const      pt = divergence_pair(f, g, P, Q);
      if (!pt.finite())
      {
        ++local.infinite;
        continue;
      }
      if (pt.x < 0.9 * w.x_max && pt.y < 0.9 * w.y_max)
      {
        local.worst_margin = std::max(local.worst_margin, region.margin(pt));
      }
      switch (contains(region, pt, tol))
      {
      case Membership::inside:
        ++local.inside;
        break;
      case Membership::outside:
        ++local.outside;
        break;
      case Membership::unknown:
        ++local.unknown;
        break;
      }
    }
    std::lock_guard<std::mutex> guard(lock);
    total.inside += local.inside;
    total.outside += local.outside;
    total.unknown += local.unknown;
    total.infinite += local.infinite;
    total.worst_margin = std::max(total.worst_margin, local.worst_margin);
  });
  return total;
}

}  // namespace divrange
