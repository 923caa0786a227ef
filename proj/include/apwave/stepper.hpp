#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apwave/error.hpp"
#include "apwave/grid.hpp"
#include "apwave/implicit_solver.hpp"
#include "apwave/spatial.hpp"
#include "apwave/tableau.hpp"

namespace apwave
{

/**
 * Advective CFL step: dt * max_m |u_bar_m| / dx_m = nu, independent of eps.
 * Without advection the step falls back to nu * min_m dx_m. Clamped to
 * t_remaining.
 */
inline double compute_dt(const PeriodicGrid& g, const ModelParams& p, double nu,
                         double t_remaining)
{
  if (!(nu > 0.0 && nu < 1.0))
    throw ConfigError("CFL number must lie in (0, 1), got " + std::to_string(nu));
  if (!(t_remaining > 0.0))
    throw InputError("non-positive remaining time " + std::to_string(t_remaining));

  double rate = 0.0;
  double min_dx = g.dx(0);
  for (int m = 0; m < g.dim(); ++m) {
    if (p.advection_on)
      rate = std::max(rate, std::abs(p.u_bar[m]) / g.dx(m));
    min_dx = std::min(min_dx, g.dx(m));
  }
  const double dt = rate > 0.0 ? nu / rate : nu * min_dx;
  return std::min(dt, t_remaining);
}

struct StepContext
{
  double dt = 0.0;
  std::array<double, 2> lambda{0.0, 0.0}; ///< dt / dx_m
  const ImexTableau* tableau = nullptr;
  ModelParams params;
  std::vector<std::optional<State>> stage_states;
  std::vector<std::optional<State>> stage_explicit_tend;
  std::vector<std::optional<State>> stage_implicit_tend;
};

/// Validates the tableau type and sizes the per-stage caches.
inline StepContext make_step_context(const ImexTableau& t, const ModelParams& p,
                                     const PeriodicGrid& g, double dt)
{
  if (classify(t) == TableauType::Other)
    throw ConfigError("tableau " + t.name() + " is neither type-A nor type-CK");
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InputError("time step must be positive and finite");
  p.validate();
  StepContext ctx;
  ctx.dt = dt;
  for (int m = 0; m < g.dim(); ++m)
    ctx.lambda[m] = dt / g.dx(m);
  ctx.tableau = &t;
  ctx.params = p;
  const auto s = static_cast<std::size_t>(t.stages());
  ctx.stage_states.resize(s);
  ctx.stage_explicit_tend.resize(s);
  ctx.stage_implicit_tend.resize(s);
  return ctx;
}

namespace detail
{

/// Whether stage k's explicit (resp. implicit) tendency is read by a later stage or the update.
inline bool explicit_tend_used(const ImexTableau& t, int k)
{
  if (t.w_explicit(k) != 0.0)
    return true;
  for (int j = k + 1; j < t.stages(); ++j)
    if (t.a_explicit(j, k) != 0.0)
      return true;
  return false;
}

inline bool implicit_tend_used(const ImexTableau& t, int k)
{
  if (t.w_implicit(k) != 0.0)
    return true;
  for (int j = k + 1; j < t.stages(); ++j)
    if (t.a_implicit(j, k) != 0.0)
      return true;
  return false;
}

} // namespace detail

/**
 * One s-stage IMEX step. Stage k solves
 *   U^k + dt a_kk G(U^k) = U^n - dt sum_{l<k} (at_kl F(U^l) + a_kl G(U^l)),
 * where F, G denote the explicit and implicit flux divergences; a zero
 * diagonal entry makes the stage explicit. The update reuses the cached stage
 * tendencies with weights w_explicit, w_implicit.
 */
inline State imex_step(const State& un, StepContext& ctx, StageSolver& solver)
{
  const ImexTableau& t = *ctx.tableau;
  const ModelParams& p = ctx.params;
  const double dt = ctx.dt;
  const int s = t.stages();
  if (!(solver.grid() == un.grid))
    throw InputError("solver grid does not match the state grid");

  for (int k = 0; k < s; ++k) {
    State rhs = un;
    for (int l = 0; l < k; ++l) {
      if (t.a_explicit(k, l) != 0.0)
        rhs.axpy(-dt * t.a_explicit(k, l), *ctx.stage_explicit_tend[l]);
      if (t.a_implicit(k, l) != 0.0)
        rhs.axpy(-dt * t.a_implicit(k, l), *ctx.stage_implicit_tend[l]);
    }
    if (!rhs.all_finite())
      throw NumericalBlowup("non-finite right-hand side in stage " + std::to_string(k + 1),
                            k + 1);

    const double c = dt * p.acoustic_speed() * t.a_implicit(k, k);
    State uk = c == 0.0 ? std::move(rhs) : solver.solve(StageSystem(c, std::move(rhs)));
    if (!uk.all_finite())
      throw NumericalBlowup("non-finite values in stage " + std::to_string(k + 1), k + 1);

    ctx.stage_explicit_tend[k].reset();
    ctx.stage_implicit_tend[k].reset();
    if (detail::explicit_tend_used(t, k))
      ctx.stage_explicit_tend[k] = explicit_tendency(uk, p);
    if (detail::implicit_tend_used(t, k))
      ctx.stage_implicit_tend[k] = implicit_tendency(uk, p);
    ctx.stage_states[k] = std::move(uk);
  }

  State next = un;
  for (int k = 0; k < s; ++k) {
    if (t.w_explicit(k) != 0.0)
      next.axpy(-dt * t.w_explicit(k), *ctx.stage_explicit_tend[k]);
    if (t.w_implicit(k) != 0.0)
      next.axpy(-dt * t.w_implicit(k), *ctx.stage_implicit_tend[k]);
  }
  if (!next.all_finite())
    throw NumericalBlowup("non-finite values in the final update", s + 1);
  return next;
}

struct StepInfo
{
  int step = 0; ///< 1-based index of the completed step
  double t = 0.0;
  double dt = 0.0;
};

using Observer = std::function<void(const StepInfo&, const State&)>;

struct RunOptions
{
  double cfl = 0.45;
  double t_final = 1.0;
  double solver_tol = 1e-12;
  int observe_every = 1; ///< observers fire every n steps and always after the last
};

struct RunResult
{
  State state;
  int steps = 0;
  double t = 0.0;
};

/// Advance to t_final with CFL steps; the last step is clamped to land on t_final.
inline RunResult run(State initial, const ModelParams& params, const ImexTableau& tableau,
                     const RunOptions& opt, std::span<const Observer> observers = {})
{
  if (!(opt.t_final > 0.0) || !std::isfinite(opt.t_final))
    throw ConfigError("t_final must be positive and finite");
  if (opt.observe_every < 1)
    throw ConfigError("observe_every must be at least 1");
  params.validate();
  initial.validate();

  const PeriodicGrid& g = initial.grid;
  StageSolver solver(g, opt.solver_tol);
  RunResult r{std::move(initial), 0, 0.0};

  while (r.t < opt.t_final) {
    const double remaining = opt.t_final - r.t;
    double dt = compute_dt(g, params, opt.cfl, remaining);
    // absorb a round-off sliver into this step rather than taking a micro-step
    const bool last = remaining - dt <= 1e-10 * dt;
    if (last)
      dt = remaining;

    StepContext ctx = make_step_context(tableau, params, g, dt);
    try {
      r.state = imex_step(r.state, ctx, solver);
    } catch (const SolverFailure& e) {
      throw SolverFailure(std::string(e.what()) + " at step " + std::to_string(r.steps + 1),
                          e.residual());
    } catch (const NumericalBlowup& e) {
      throw NumericalBlowup(std::string(e.what()) + " at step " + std::to_string(r.steps + 1),
                            e.stage());
    }
    ++r.steps;
    r.t = last ? opt.t_final : r.t + dt;

    if (r.steps % opt.observe_every == 0 || last) {
      const StepInfo info{r.steps, r.t, dt};
      for (const auto& obs : observers)
        obs(info, r.state);
    }
  }
  return r;
}

} // namespace apwave
