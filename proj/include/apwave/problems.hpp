#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "apwave/error.hpp"
#include "apwave/grid.hpp"
#include "apwave/spatial.hpp"

namespace apwave
{

// ---------------------------------------------------------------------------
// Physical <-> scaled variables: rho = rho_bar (1 + (eps/a_bar) varrho).
// ---------------------------------------------------------------------------

inline double scaled_density(double rho, const ModelParams& p)
{
  if (!(rho > 0.0))
    throw InputError("physical density must be positive");
  return (rho / p.rho_bar - 1.0) * p.a_bar / p.epsilon;
}

inline double physical_density(double varrho, const ModelParams& p)
{
  return p.rho_bar * (1.0 + p.epsilon / p.a_bar * varrho);
}

/// Multiplier taking a scaled-density difference to a physical-density difference.
inline double density_scale(const ModelParams& p) { return p.rho_bar * p.epsilon / p.a_bar; }

struct PhysicalFields
{
  Field rho;
  std::vector<Field> vel;
};

inline State to_scaled(const PhysicalFields& f, const PeriodicGrid& g, const ModelParams& p)
{
  State s(g);
  if (f.rho.size() != g.size() || f.vel.size() != static_cast<std::size_t>(g.dim()))
    throw InputError("physical fields do not match the grid");
  for (std::size_t k = 0; k < g.size(); ++k)
    s.rho[k] = scaled_density(f.rho[k], p);
  for (int m = 0; m < g.dim(); ++m)
    s.vel[m] = f.vel[m];
  return s;
}

inline PhysicalFields from_scaled(const State& s, const ModelParams& p)
{
  PhysicalFields f{Field(s.grid), s.vel};
  for (std::size_t k = 0; k < s.grid.size(); ++k)
    f.rho[k] = physical_density(s.rho[k], p);
  return f;
}

// ---------------------------------------------------------------------------

using PointData = std::function<StateVector(double x1, double x2)>;
using ExactData = std::function<StateVector(double t, double x1, double x2)>;

/// An experiment: domain, default mesh and parameters, data in scaled variables.
struct ProblemSpec
{
  std::string name;
  int dim = 1;
  std::array<Interval, 2> domain{};
  std::array<int, 2> default_cells{100, 1};
  ModelParams params;
  double cfl = 0.45;
  double t_final = 1.0;
  PointData initial;
  ExactData exact; ///< empty when the problem has no exact/reference solution

  bool has_exact() const { return static_cast<bool>(exact); }

  PeriodicGrid make_grid(std::array<int, 2> n) const
  {
    return dim == 1 ? PeriodicGrid::line(n[0], domain[0])
                    : PeriodicGrid::plane(n, {domain[0], domain[1]});
  }

  PeriodicGrid make_grid() const { return make_grid(default_cells); }

  State initial_state(const PeriodicGrid& g) const { return sample(g, initial); }

  State exact_state(double t, const PeriodicGrid& g) const
  {
    if (!has_exact())
      throw ConfigError("problem " + name + " has no exact solution");
    return sample(g, [&](double x, double y) { return exact(t, x, y); });
  }

private:
  template <typename Fn>
  static State sample(const PeriodicGrid& g, Fn&& f)
  {
    State s(g);
    const int n1 = g.cells(0);
    const int n2 = g.dim() == 2 ? g.cells(1) : 1;
    for (int j = 0; j < n2; ++j) {
      const double y = g.dim() == 2 ? g.center(1, j) : 0.0;
      for (int i = 0; i < n1; ++i) {
        const StateVector v = f(g.center(0, i), y);
        const std::size_t k = g.index(i, j);
        s.rho[k] = v[0];
        for (int m = 0; m < g.dim(); ++m)
          s.vel[m][k] = v[1 + m];
      }
    }
    return s;
  }
};

/// How the cosine-wave final time is chosen.
enum class FinalTimeRule
{
  Literal,     ///< T = 3 * 2 / (u_bar + a_bar/eps)
  DomainCycles ///< T = 3 * |domain| / (u_bar + a_bar/eps): three transits of the fast wave
};

inline FinalTimeRule parse_final_time_rule(std::string_view s)
{
  if (s == "literal")
    return FinalTimeRule::Literal;
  if (s == "domain-cycles")
    return FinalTimeRule::DomainCycles;
  throw ConfigError("unknown t_final_rule '" + std::string(s) +
                    "' (expected literal or domain-cycles)");
}

/**
 * One-dimensional cosine wave on [-1/eps, 1/eps]:
 *   rho(0,x) = 1 + eps^2/1.185 (1 + cos(2 pi eps x)),  u(0,x) = eps (1 + cos(2 pi eps x)),
 * advected with u_bar = 1. The exact solution transports the Riemann invariants
 * w+- = varrho +- u with speeds u_bar +- a_bar/eps.
 */
inline ProblemSpec cosine_wave(double eps, FinalTimeRule rule = FinalTimeRule::Literal)
{
  if (!(eps > 0.0 && eps <= 1.0))
    throw ConfigError("cosine_wave: epsilon must lie in (0, 1]");
  ProblemSpec p;
  p.name = "cosine_wave";
  p.dim = 1;
  p.domain = {Interval{-1.0 / eps, 1.0 / eps}, Interval{0.0, 1.0}};
  p.default_cells = {100, 1};
  p.params.epsilon = eps;
  p.params.a_bar = 1.0;
  p.params.rho_bar = 1.0;
  p.params.u_bar = {1.0, 0.0};
  p.cfl = 0.45;

  const ModelParams mp = p.params;
  const double speed = mp.u_bar[0] + mp.a_bar / eps;
  p.t_final = rule == FinalTimeRule::Literal ? 3.0 * 2.0 / speed
                                             : 3.0 * p.domain[0].length() / speed;

  // perturbations computed directly to avoid cancellation in rho - rho_bar
  auto varrho0 = [mp](double x) {
    const double drho = mp.epsilon * mp.epsilon / 1.185 *
                        (1.0 + std::cos(2.0 * std::numbers::pi * mp.epsilon * x));
    return drho / mp.rho_bar * mp.a_bar / mp.epsilon;
  };
  auto u0 = [mp](double x) {
    return mp.epsilon * (1.0 + std::cos(2.0 * std::numbers::pi * mp.epsilon * x));
  };
  p.initial = [=](double x, double) { return StateVector{varrho0(x), u0(x), 0.0}; };
  p.exact = [=](double t, double x, double) {
    const double cp = mp.u_bar[0] + mp.a_bar / mp.epsilon;
    const double cm = mp.u_bar[0] - mp.a_bar / mp.epsilon;
    const double wp = varrho0(x - cp * t) + u0(x - cp * t);
    const double wm = varrho0(x - cm * t) - u0(x - cm * t);
    return StateVector{0.5 * (wp + wm), 0.5 * (wp - wm), 0.0};
  };
  return p;
}

/// Radial velocity profile of the travelling vortex.
inline double vortex_profile(double r)
{
  if (r < 0.2)
    return 5.0 * r;
  if (r < 0.4)
    return 2.0 - 5.0 * r;
  return 0.0;
}

/// Vortex centred at (0.5, 0.5) on [0,4]x[0,1], advected by u_bar = (1, 0).
inline ProblemSpec travelling_vortex(double eps = 1.0)
{
  ProblemSpec p;
  p.name = "travelling_vortex";
  p.dim = 2;
  p.domain = {Interval{0.0, 4.0}, Interval{0.0, 1.0}};
  p.default_cells = {256, 64};
  p.params.epsilon = eps;
  p.params.u_bar = {1.0, 0.0};
  p.cfl = 0.45;
  p.t_final = 3.0;
  p.initial = [](double x, double y) {
    const double dx = x - 0.5, dy = y - 0.5;
    const double r = std::hypot(dx, dy);
    if (r == 0.0)
      return StateVector{0.0, 0.0, 0.0};
    // -K sin(theta), K cos(theta) with theta the polar angle about the centre
    const double k = vortex_profile(r) / r;
    return StateVector{0.0, -k * dy, k * dx};
  };
  p.params.validate();
  return p;
}

/// Well-prepared data: O(eps^2) density and O(eps) divergence perturbations of a shear flow.
inline ProblemSpec well_prepared_2d(double eps = 1e-4)
{
  if (!(eps > 0.0))
    throw ConfigError("well_prepared_2d: epsilon must be positive");
  ProblemSpec p;
  p.name = "well_prepared_2d";
  p.dim = 2;
  p.domain = {Interval{0.0, 1.0}, Interval{0.0, 1.0}};
  p.default_cells = {40, 40};
  p.params.epsilon = eps;
  p.params.u_bar = {1.0, 1.0};
  p.cfl = 0.45;
  p.t_final = 3.0;
  const ModelParams mp = p.params;
  p.initial = [mp](double x, double y) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double sp = std::sin(two_pi * (x + y));
    const double shear = std::sin(two_pi * (x - y));
    const double drho = mp.epsilon * mp.epsilon * sp * sp;
    return StateVector{drho / mp.rho_bar * mp.a_bar / mp.epsilon,
                       shear + mp.epsilon * sp,
                       shear + mp.epsilon * std::cos(two_pi * (x + y))};
  };
  return p;
}

/**
 * Translating vortex solving the incompressible limit: varrho = 1 and
 *   u1 = 1 - 2 cos(2 pi (x1 - t)) sin(2 pi (x2 - t)),
 *   u2 = 1 + 2 sin(2 pi (x1 - t)) cos(2 pi (x2 - t)).
 * With u_bar = (1, 1) it also solves the linear system for every eps.
 */
inline ProblemSpec schneider_vortex(double eps = 1e-3)
{
  if (!(eps > 0.0))
    throw ConfigError("schneider_vortex: epsilon must be positive");
  ProblemSpec p;
  p.name = "schneider_vortex";
  p.dim = 2;
  p.domain = {Interval{0.0, 1.0}, Interval{0.0, 1.0}};
  p.default_cells = {40, 40};
  p.params.epsilon = eps;
  p.params.u_bar = {1.0, 1.0};
  p.cfl = 0.45;
  p.t_final = 3.0;
  p.exact = [](double t, double x, double y) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double a = two_pi * (x - t), b = two_pi * (y - t);
    return StateVector{1.0, 1.0 - 2.0 * std::cos(a) * std::sin(b),
                       1.0 + 2.0 * std::sin(a) * std::cos(b)};
  };
  auto ex = p.exact;
  p.initial = [ex](double x, double y) { return ex(0.0, x, y); };
  return p;
}

inline constexpr std::array<std::string_view, 4> problem_names{
    "cosine_wave", "travelling_vortex", "well_prepared_2d", "schneider_vortex"};

/// Build a named problem; eps <= 0 selects the problem's default.
inline ProblemSpec make_problem(std::string_view name, double eps = 0.0,
                                FinalTimeRule rule = FinalTimeRule::Literal)
{
  if (name == "cosine_wave")
    return cosine_wave(eps > 0.0 ? eps : 1.0, rule);
  if (name == "travelling_vortex")
    return travelling_vortex(eps > 0.0 ? eps : 1.0);
  if (name == "well_prepared_2d")
    return well_prepared_2d(eps > 0.0 ? eps : 1e-4);
  if (name == "schneider_vortex")
    return schneider_vortex(eps > 0.0 ? eps : 1e-3);
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

} // namespace apwave
