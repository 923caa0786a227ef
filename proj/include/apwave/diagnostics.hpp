#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "apwave/fft.hpp"
#include "apwave/grid.hpp"

namespace apwave
{

/// E = 1/2 (U, U) in the cell-weighted L2 product.
inline double energy(const State& s) { return 0.5 * inner(s, s); }

/// 1/2 sum_m ||u_m||^2
inline double kinetic_energy(const State& s)
{
  double acc = 0.0;
  for (const auto& v : s.vel)
    acc += inner(v, v, s.grid);
  return 0.5 * acc;
}

/// sum_m D_m u_m with the wide central difference the implicit terms use.
inline Field divergence(const State& s)
{
  Field d(s.grid);
  for (int m = 0; m < s.grid.dim(); ++m)
    d += central_derivative(s.vel[m], s.grid, m);
  return d;
}

struct WellPreparedDefect
{
  double grad_rho_norm = 0.0; ///< ||(D_1 rho, D_2 rho)||_L2
  double div_u_norm = 0.0;    ///< ||sum_m D_m u_m||_L2
};

inline WellPreparedDefect wellprepared_defect(const State& s)
{
  double g2 = 0.0;
  for (int m = 0; m < s.grid.dim(); ++m) {
    const Field d = central_derivative(s.rho, s.grid, m);
    g2 += inner(d, d, s.grid);
  }
  return {std::sqrt(g2), norm(divergence(s), s.grid, Norm::L2)};
}

/**
 * Orthogonal projection onto the discrete well-prepared space
 * {rho constant, sum_m D_m u_m = 0}.
 *
 * The density is replaced by its mean. The velocity loses, mode by mode, its
 * component along the symbol vector s_m = sin(2 pi k_m/N_m)/dx_m of D_m; modes
 * where every s_m vanishes (the mean and the checkerboard modes) are kernel
 * modes of the discrete divergence and pass through unchanged.
 */
inline State helmholtz_project(const State& s)
{
  const PeriodicGrid& g = s.grid;
  const int dim = g.dim();
  State out(g);
  out.rho = Field(g, s.rho.mean());

  RealFft fft(g.cells(0), dim == 2 ? g.cells(1) : 1);
  const int nh = fft.half_extent();
  std::vector<std::vector<std::complex<double>>> hat(
      dim, std::vector<std::complex<double>>(fft.spectrum_size()));
  for (int m = 0; m < dim; ++m)
    fft.forward(s.vel[m].values(), hat[m]);

  for (int ky = 0; ky < fft.n2(); ++ky)
    for (int kx = 0; kx < nh; ++kx) {
      const std::size_t k = static_cast<std::size_t>(kx) + static_cast<std::size_t>(nh) * ky;
      double sym[2] = {std::sin(2.0 * std::numbers::pi * kx / g.cells(0)) / g.dx(0), 0.0};
      if (dim == 2)
        sym[1] = std::sin(2.0 * std::numbers::pi * ky / g.cells(1)) / g.dx(1);
      double s2 = 0.0;
      std::complex<double> proj = 0.0;
      for (int m = 0; m < dim; ++m) {
        s2 += sym[m] * sym[m];
        proj += sym[m] * hat[m][k];
      }
      // |s|^2 is either 0 or bounded below by ~ (2 pi / L)^2, never tiny-but-nonzero
      // except through sin round-off at k = N/2, which the threshold catches.
      if (s2 <= 1e-20 * (1.0 / (g.dx(0) * g.dx(0))))
        continue;
      for (int m = 0; m < dim; ++m)
        hat[m][k] -= sym[m] * proj / s2;
    }

  for (int m = 0; m < dim; ++m)
    fft.inverse(hat[m], out.vel[m].values());
  return out;
}

/// ||U - P U|| in the weighted L2 norm.
inline double distance_to_E(const State& s)
{
  State d = s;
  d.axpy(-1.0, helmholtz_project(s));
  return std::sqrt(inner(d, d));
}

struct DefectReport
{
  double grad_rho_norm = 0.0;
  double div_u_norm = 0.0;
  double dist_E = 0.0;
  double energy = 0.0;
  double kinetic = 0.0;
};

inline DefectReport defect_report(const State& s)
{
  const auto d = wellprepared_defect(s);
  return {d.grad_rho_norm, d.div_u_norm, distance_to_E(s), energy(s), kinetic_energy(s)};
}

} // namespace apwave
