#pragma once

#include <array>
#include <cmath>

#include "apwave/grid.hpp"

namespace apwave
{

/// Point values (rho, u1, u2); u2 is unused and zero on 1D grids.
using StateVector = std::array<double, 3>;

inline StateVector point(const State& s, std::size_t k)
{
  StateVector v{s.rho[k], 0.0, 0.0};
  for (std::size_t m = 0; m < s.vel.size(); ++m)
    v[1 + m] = s.vel[m][k];
  return v;
}

/// Non-stiff advective flux along `axis`: u_bar_m * (rho, u).
inline StateVector advective_flux(const StateVector& u, int axis, const ModelParams& p)
{
  const double a = p.u_bar[axis];
  return {a * u[0], a * u[1], a * u[2]};
}

/// Stiff acoustic flux along `axis`: (a_bar/eps) * (u_m, rho e_m).
inline StateVector acoustic_flux(const StateVector& u, int axis, const ModelParams& p)
{
  const double k = p.acoustic_speed();
  StateVector f{k * u[1 + axis], 0.0, 0.0};
  f[1 + axis] = k * u[0];
  return f;
}

/// Reconstructed traces at every face (low-side face convention, see grid.hpp).
struct InterfaceStates
{
  Field left;  ///< U^- : trace from the cell below the face
  Field right; ///< U^+ : trace from the cell above the face
};

/// Piecewise-linear recovery with unlimited central slopes.
inline InterfaceStates muscl_reconstruct(const Field& f, const PeriodicGrid& g, int axis)
{
  InterfaceStates s{Field(g), Field(g)};
  for_each_stencil(g, axis, [&](std::size_t k, std::size_t km2, std::size_t km1, std::size_t kp1) {
    // half-cell slope increments: (dx/2) * sigma = (f_{i+1} - f_{i-1}) / 4
    s.left[k] = f[km1] + 0.25 * (f[k] - f[km2]);
    s.right[k] = f[k] - 0.25 * (f[kp1] - f[km1]);
  });
  return s;
}

/// Rusanov flux for the advective part; dissipation uses |u_bar_m|.
inline StateVector rusanov_flux(const StateVector& left, const StateVector& right, int axis,
                                const ModelParams& p)
{
  const StateVector fl = advective_flux(left, axis, p);
  const StateVector fr = advective_flux(right, axis, p);
  const double diss = 0.5 * std::abs(p.u_bar[axis]);
  StateVector out{};
  for (int q = 0; q < 3; ++q)
    out[q] = 0.5 * (fr[q] + fl[q]) - diss * (right[q] - left[q]);
  return out;
}

/// Mean of the stiff physical fluxes of two neighbouring cell averages.
inline StateVector central_flux(const StateVector& ui, const StateVector& uip1, int axis,
                                const ModelParams& p)
{
  const StateVector a = acoustic_flux(ui, axis, p);
  const StateVector b = acoustic_flux(uip1, axis, p);
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
}

/**
 * sum_m (1/dx_m) delta_m F_m(U) with MUSCL traces and Rusanov fluxes. Zero when
 * advection is off. The flux is linear, so rusanov_flux is applied one component
 * at a time on whole face fields.
 */
inline State explicit_tendency(const State& s, const ModelParams& p)
{
  const PeriodicGrid& g = s.grid;
  State out(g);
  if (!p.advection_on)
    return out;

  for (int m = 0; m < g.dim(); ++m) {
    const double a = p.u_bar[m];
    if (a == 0.0)
      continue;
    const double diss = 0.5 * std::abs(a);
    const double inv_dx = 1.0 / g.dx(m);
    for (int q = 0; q < s.components(); ++q) {
      InterfaceStates tr = muscl_reconstruct(s.component(q), g, m);
      Field& flux = tr.left;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double l = tr.left[k], r = tr.right[k];
        flux[k] = 0.5 * a * (r + l) - diss * (r - l);
      }
      out.component(q).axpy(inv_dx, delta(flux, g, m));
    }
  }
  return out;
}

/// sum_m (1/dx_m) delta_m G_m(U) with central fluxes of neighbouring cell averages.
inline State implicit_tendency(const State& s, const ModelParams& p)
{
  const PeriodicGrid& g = s.grid;
  State out(g);
  const double c = p.acoustic_speed();
  for (int m = 0; m < g.dim(); ++m) {
    // face k sits between cells k-1 and k
    Field flux_rho(g), flux_u(g);
    for_each_stencil(g, m, [&](std::size_t k, std::size_t, std::size_t km, std::size_t) {
      flux_rho[k] = 0.5 * c * (s.vel[m][km] + s.vel[m][k]);
      flux_u[k] = 0.5 * c * (s.rho[km] + s.rho[k]);
    });
    const double inv_dx = 1.0 / g.dx(m);
    out.rho.axpy(inv_dx, delta(flux_rho, g, m));
    out.vel[m].axpy(inv_dx, delta(flux_u, g, m));
  }
  return out;
}

/**
 * The acoustic operator written with wide central derivatives:
 * rho <- sum_m D_m u_m, u_m <- D_m rho, all scaled by `scale`.
 *
 * With scale = a_bar/eps this is algebraically identical to implicit_tendency;
 * the stage solver uses it for residuals.
 */
inline State acoustic_operator(const State& s, double scale)
{
  const PeriodicGrid& g = s.grid;
  State out(g);
  for (int m = 0; m < g.dim(); ++m) {
    out.rho.axpy(scale, central_derivative(s.vel[m], g, m));
    out.vel[m].axpy(scale, central_derivative(s.rho, g, m));
  }
  return out;
}

} // namespace apwave
