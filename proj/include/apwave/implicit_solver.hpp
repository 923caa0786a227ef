#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "apwave/error.hpp"
#include "apwave/fft.hpp"
#include "apwave/grid.hpp"
#include "apwave/spatial.hpp"

namespace apwave
{

/// circ(r_0, ..., r_{N-1}): (M v)_i = sum_j r_{(j - i) mod N} v_j.
struct CirculantOperator
{
  std::vector<double> first_row;

  std::size_t size() const { return first_row.size(); }

  std::vector<double> apply(std::span<const double> v) const
  {
    const std::size_t n = size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out[i] += first_row[(j + n - i) % n] * v[j];
    return out;
  }
};

/// P = circ(0, 1, 0, ..., 0, -1): (P v)_i = v_{i+1} - v_{i-1}.
inline CirculantOperator difference_generator(int n)
{
  if (n < 3)
    throw InputError("difference generator needs N >= 3");
  CirculantOperator p{std::vector<double>(n, 0.0)};
  p.first_row[1] = 1.0;
  p.first_row[n - 1] = -1.0;
  return p;
}

/**
 * Eigenvalues of a circulant matrix: lambda_k = sum_j r_j exp(-2 pi i jk/N), with
 * eigenvector (exp(-2 pi i jk/N))_j. For the difference generator this gives
 * lambda_k = -2i sin(2 pi k/N); the conjugate pairing k <-> N-k makes the set of
 * eigenvalues {2i sin(2 pi k/N)} as well.
 */
inline std::vector<std::complex<double>> circulant_spectrum(const CirculantOperator& op)
{
  return dft(op.first_row);
}

/**
 * One implicit stage: find U with (I + c B) U = rhs, where B is the acoustic
 * block operator (rho <- sum_m D_m u_m, u_m <- D_m rho) and
 * c = dt * (a_bar/eps) * a_kk. Along axis m the circulant coefficient is
 * beta_m = c / (2 dx_m).
 */
struct StageSystem
{
  double coupling = 0.0;
  State rhs;

  StageSystem(double c, State r) : coupling(c), rhs(std::move(r)) {}

  static StageSystem from_beta(double beta_axis0, State r)
  {
    const double c = 2.0 * beta_axis0 * r.grid.dx(0);
    return StageSystem(c, std::move(r));
  }

  double beta(int axis) const { return coupling / (2.0 * rhs.grid.dx(axis)); }
  const PeriodicGrid& grid() const { return rhs.grid; }
};

/// (I + c B) U
inline State apply_stage_operator(const State& u, double coupling)
{
  State out = acoustic_operator(u, coupling);
  out.axpy(1.0, u);
  return out;
}

/// ||I + c B||_inf: each row holds 1 and entries c / (2 dx_m), two per axis.
inline double stage_operator_inf_norm(const PeriodicGrid& g, double coupling)
{
  double s = 0.0;
  for (int m = 0; m < g.dim(); ++m)
    s += 1.0 / g.dx(m);
  return 1.0 + std::abs(coupling) * s;
}

/**
 * Spectral stage solver.
 *
 * The velocity is eliminated into the density equation,
 *   (I - c^2 sum_m D_m D_m) rho = rho_hat - c sum_m D_m u_hat_m,
 * which is diagonal in the discrete Fourier basis with symbol
 * 1 + c^2 sum_m sin^2(2 pi k_m/N_m)/dx_m^2 >= 1; the velocity follows by
 * back-substitution u_m = u_hat_m - c D_m rho, also done mode by mode.
 *
 * The acceptance residual is the normwise backward error
 *   ||(I + cB)U - rhs||_inf / (||I + cB||_inf ||U||_inf + ||rhs||_inf).
 */
class StageSolver
{
public:
  explicit StageSolver(const PeriodicGrid& g, double tol = 1e-12)
      : grid_(g), tol_(tol), fft_(g.cells(0), g.dim() == 2 ? g.cells(1) : 1)
  {
    if (!(tol > 0.0))
      throw ConfigError("solver_tol must be positive");
    const int nh = fft_.half_extent();
    const int n2 = fft_.n2();
    sym_.assign(g.dim(), std::vector<double>(fft_.spectrum_size(), 0.0));
    for (int ky = 0; ky < n2; ++ky)
      for (int kx = 0; kx < nh; ++kx) {
        const std::size_t k = static_cast<std::size_t>(kx) + static_cast<std::size_t>(nh) * ky;
        sym_[0][k] = std::sin(2.0 * std::numbers::pi * kx / g.cells(0)) / g.dx(0);
        if (g.dim() == 2)
          sym_[1][k] = std::sin(2.0 * std::numbers::pi * ky / g.cells(1)) / g.dx(1);
      }
    rho_hat_.resize(fft_.spectrum_size());
    vel_hat_.assign(g.dim(), std::vector<std::complex<double>>(fft_.spectrum_size()));
  }

  const PeriodicGrid& grid() const { return grid_; }
  double tolerance() const { return tol_; }
  double last_residual() const { return last_residual_; }

  State solve(const StageSystem& sys)
  {
    const State& rhs = sys.rhs;
    if (!(rhs.grid == grid_))
      throw InputError("stage system grid does not match the solver grid");
    if (!rhs.all_finite())
      throw InputError("stage right-hand side contains non-finite values");
    if (!std::isfinite(sys.coupling))
      throw InputError("stage coupling is not finite");

    last_residual_ = 0.0;
    if (sys.coupling == 0.0)
      return rhs;

    const double c = sys.coupling;
    const int dim = grid_.dim();
    fft_.forward(rhs.rho.values(), rho_hat_);
    for (int m = 0; m < dim; ++m)
      fft_.forward(rhs.vel[m].values(), vel_hat_[m]);

    const std::complex<double> ic(0.0, c);
    for (std::size_t k = 0; k < rho_hat_.size(); ++k) {
      std::complex<double> num = rho_hat_[k];
      double diag = 1.0;
      for (int m = 0; m < dim; ++m) {
        num -= ic * sym_[m][k] * vel_hat_[m][k];
        diag += c * c * sym_[m][k] * sym_[m][k];
      }
      const std::complex<double> rho_k = num / diag;
      rho_hat_[k] = rho_k;
      for (int m = 0; m < dim; ++m)
        vel_hat_[m][k] -= ic * sym_[m][k] * rho_k;
    }

    State u(grid_);
    fft_.inverse(rho_hat_, u.rho.values());
    for (int m = 0; m < dim; ++m)
      fft_.inverse(vel_hat_[m], u.vel[m].values());

    State res = apply_stage_operator(u, c);
    res.axpy(-1.0, rhs);
    const double scale =
        stage_operator_inf_norm(grid_, c) * max_abs(u) + max_abs(rhs);
    last_residual_ = scale > 0.0 ? max_abs(res) / scale : 0.0;
    if (!(last_residual_ <= tol_))
      throw SolverFailure("stage solve residual " + std::to_string(last_residual_) +
                              " exceeds tolerance " + std::to_string(tol_),
                          last_residual_);
    return u;
  }

private:
  PeriodicGrid grid_;
  double tol_;
  RealFft fft_;
  std::vector<std::vector<double>> sym_;
  std::vector<std::complex<double>> rho_hat_;
  std::vector<std::vector<std::complex<double>>> vel_hat_;
  double last_residual_ = 0.0;
};

/**
 * Test oracle: assembles (I + c B) densely and solves it by Gaussian
 * elimination with partial pivoting in extended precision.
 */
inline State dense_stage_oracle(const StageSystem& sys, std::size_t max_unknowns = 4096)
{
  const PeriodicGrid& g = sys.grid();
  const int dim = g.dim();
  const std::size_t nc = g.size();
  const std::size_t n = (1 + dim) * nc;
  if (n > max_unknowns)
    throw InputError("dense oracle: " + std::to_string(n) + " unknowns exceeds cap " +
                     std::to_string(max_unknowns));

  using real = long double;
  std::vector<real> a(n * n, 0.0L);
  std::vector<real> b(n, 0.0L);
  auto at = [&](std::size_t r, std::size_t col) -> real& { return a[r * n + col]; };
  auto var = [nc](int q, std::size_t cell) { return static_cast<std::size_t>(q) * nc + cell; };

  for (std::size_t k = 0; k < nc; ++k) {
    for (int q = 0; q < 1 + dim; ++q) {
      at(var(q, k), var(q, k)) = 1.0L;
      b[var(q, k)] = sys.rhs.component(q)[k];
    }
    for (int m = 0; m < dim; ++m) {
      const real w = static_cast<real>(sys.coupling) / (2.0L * static_cast<real>(g.dx(m)));
      const std::size_t kp = g.neighbour(k, m, 1);
      const std::size_t km = g.neighbour(k, m, -1);
      // rho row couples to u_m, u_m row couples to rho
      at(var(0, k), var(1 + m, kp)) += w;
      at(var(0, k), var(1 + m, km)) -= w;
      at(var(1 + m, k), var(0, kp)) += w;
      at(var(1 + m, k), var(0, km)) -= w;
    }
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col)))
        piv = r;
    if (at(piv, col) == 0.0L)
      throw SolverFailure("dense oracle: singular matrix", INFINITY);
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j)
        std::swap(at(col, j), at(piv, j));
      std::swap(b[col], b[piv]);
    }
    const real inv = 1.0L / at(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const real f = at(r, col) * inv;
      if (f == 0.0L)
        continue;
      for (std::size_t j = col; j < n; ++j)
        at(r, j) -= f * at(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<real> x(n);
  for (std::size_t r = n; r-- > 0;) {
    real acc = b[r];
    for (std::size_t j = r + 1; j < n; ++j)
      acc -= at(r, j) * x[j];
    x[r] = acc / at(r, r);
  }

  State out(g);
  for (int q = 0; q < 1 + dim; ++q)
    for (std::size_t k = 0; k < nc; ++k)
      out.component(q)[k] = static_cast<double>(x[var(q, k)]);
  return out;
}

} // namespace apwave
