#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "apwave/spatial.hpp"
#include "test_support.hpp"

using namespace apwave;
using apwave::testing::random_state;
using apwave::testing::unit_line;
using apwave::testing::unit_square;

namespace
{

ModelParams params(double eps, double u1, double u2 = 0.0)
{
  ModelParams p;
  p.epsilon = eps;
  p.u_bar = {u1, u2};
  return p;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

} // namespace

TEST(Fluxes, AdvectiveAndAcoustic)
{
  const ModelParams p = params(0.5, 2.0, -1.0);
  const StateVector u{1.0, 3.0, -4.0};
  const StateVector f1 = advective_flux(u, 0, p);
  EXPECT_EQ(f1[0], 2.0);
  EXPECT_EQ(f1[2], -8.0);
  const StateVector g1 = acoustic_flux(u, 0, p);
  EXPECT_EQ(g1[0], 6.0); // (a/eps) u_1
  EXPECT_EQ(g1[1], 2.0); // (a/eps) rho
  EXPECT_EQ(g1[2], 0.0);
  const StateVector g2 = acoustic_flux(u, 1, p);
  EXPECT_EQ(g2[0], -8.0);
  EXPECT_EQ(g2[1], 0.0);
  EXPECT_EQ(g2[2], 2.0);
}

TEST(Rusanov, ConsistencyExact)
{
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const ModelParams p = params(1.0, d(rng), d(rng));
    const StateVector u{d(rng), d(rng), d(rng)};
    for (int axis = 0; axis < 2; ++axis) {
      const StateVector f = rusanov_flux(u, u, axis, p);
      const StateVector ex = advective_flux(u, axis, p);
      for (int q = 0; q < 3; ++q)
        EXPECT_EQ(f[q], ex[q]);
    }
  }
}

TEST(Rusanov, UpwindSelection)
{
  const StateVector left{0.0, 0.0, 0.0}, right{1.0, 0.0, 0.0};
  EXPECT_EQ(rusanov_flux(left, right, 0, params(1.0, 1.0))[0], 0.0);
  EXPECT_EQ(rusanov_flux(left, right, 0, params(1.0, -1.0))[0], -1.0);
}

TEST(CentralFlux, HandExample)
{
  const ModelParams p = params(0.1, 0.0);
  const StateVector a{0.0, 0.0, 0.0}, b{2.0, 0.0, 0.0};
  const StateVector f = central_flux(a, b, 0, p);
  EXPECT_NEAR(f[0], 0.0, 1e-15);
  EXPECT_NEAR(f[1], 10.0, 1e-12);

  const StateVector g = central_flux(b, b, 0, p);
  const StateVector ex = acoustic_flux(b, 0, p);
  for (int q = 0; q < 3; ++q)
    EXPECT_EQ(g[q], ex[q]);
}

TEST(CentralFlux, Linearity)
{
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> d(-1, 1);
  const ModelParams p = params(0.01, 1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    StateVector a{}, b{}, c{}, e{};
    for (int q = 0; q < 3; ++q) {
      a[q] = d(rng);
      b[q] = d(rng);
      c[q] = d(rng);
      e[q] = d(rng);
    }
    const double s = d(rng);
    StateVector ac{}, be{};
    for (int q = 0; q < 3; ++q) {
      ac[q] = a[q] + s * c[q];
      be[q] = b[q] + s * e[q];
    }
    for (int axis = 0; axis < 2; ++axis) {
      const StateVector lhs = central_flux(ac, be, axis, p);
      const StateVector f1 = central_flux(a, b, axis, p);
      const StateVector f2 = central_flux(c, e, axis, p);
      for (int q = 0; q < 3; ++q)
        EXPECT_NEAR(lhs[q], f1[q] + s * f2[q], 1e-11);
    }
  }
}

TEST(Muscl, ConstantField)
{
  const PeriodicGrid g = unit_square(6, 5);
  for (int axis = 0; axis < 2; ++axis) {
    const InterfaceStates s = muscl_reconstruct(Field(g, 2.5), g, axis);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_EQ(s.left[k], 2.5);
      EXPECT_EQ(s.right[k], 2.5);
    }
  }
}

TEST(Muscl, HandExample)
{
  // f = (0, 1, 0, -1), dx = 1. Slopes sigma_i = (f_{i+1} - f_{i-1}) / 2 = (1, 0, -1, 0).
  // Face i sits at x_{i-1/2}: U- = f_{i-1} + sigma_{i-1}/2, U+ = f_i - sigma_i/2.
  const PeriodicGrid g = PeriodicGrid::line(4, Interval{0.0, 4.0});
  const Field f(std::vector<double>{0, 1, 0, -1});
  const InterfaceStates s = muscl_reconstruct(f, g, 0);
  const double left[4] = {-1.0, 0.5, 1.0, -0.5};
  const double right[4] = {-0.5, 1.0, 0.5, -1.0};
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(s.left[i], left[i]) << i;
    EXPECT_DOUBLE_EQ(s.right[i], right[i]) << i;
  }
}

TEST(Muscl, ExactForLinearAwayFromWrap)
{
  const PeriodicGrid g = PeriodicGrid::line(16, Interval{0.0, 1.0});
  const Field f = sample_cells(g, [](double x, double) { return 3.0 * x - 1.0; });
  const InterfaceStates s = muscl_reconstruct(f, g, 0);
  // faces 2..N-2 only see cells that do not straddle the periodic jump
  for (int i = 2; i < 15; ++i) {
    const double exact = 3.0 * g.face(0, i) - 1.0;
    EXPECT_NEAR(s.left[i], exact, 1e-14);
    EXPECT_NEAR(s.right[i], exact, 1e-14);
  }
}

TEST(Muscl, SecondOrderInterfaceValues)
{
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> errs, dxs;
  for (int n : {16, 32, 64, 128}) {
    const PeriodicGrid g = unit_line(n);
    // cell averages of sin(2 pi x)
    const Field f = sample_cells(g, [&](double x, double) {
      const double h = g.dx(0);
      return (std::cos(two_pi * (x - h / 2)) - std::cos(two_pi * (x + h / 2))) / (two_pi * h);
    });
    const InterfaceStates s = muscl_reconstruct(f, g, 0);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double exact = std::sin(two_pi * g.face(0, i));
      err = std::max({err, std::abs(s.left[i] - exact), std::abs(s.right[i] - exact)});
    }
    errs.push_back(err);
    dxs.push_back(g.dx(0));
  }
  for (std::size_t k = 1; k < errs.size(); ++k) {
    const double slope = std::log(errs[k - 1] / errs[k]) / std::log(dxs[k - 1] / dxs[k]);
    EXPECT_GE(slope, 1.9);
    EXPECT_LE(slope, 2.1);
  }
}

TEST(ExplicitTendency, ConstantStateAndAdvectionOff)
{
  const PeriodicGrid g = unit_square(8, 8);
  State s(g);
  s.rho = Field(g, 1.0);
  s.vel[0] = Field(g, -2.0);
  s.vel[1] = Field(g, 0.5);
  const State t = explicit_tendency(s, params(1.0, 1.0, 1.0));
  EXPECT_LE(max_abs(t), 1e-13);

  std::mt19937_64 rng(23);
  ModelParams off = params(1.0, 1.0, 1.0);
  off.advection_on = false;
  EXPECT_EQ(max_abs(explicit_tendency(random_state(g, rng), off)), 0.0);
}

TEST(ExplicitTendency, MatchesStraightLineOracle)
{
  // independent re-implementation: MUSCL traces and Rusanov flux written out per face
  const int n = 8;
  const PeriodicGrid g = PeriodicGrid::line(n, Interval{0.0, 2.0});
  const double dx = g.dx(0);
  for (double ubar : {1.0, -0.7}) {
    const ModelParams p = params(0.3, ubar);
    State s(g);
    s.rho = sample_cells(g, [](double x, double) { return std::sin(std::numbers::pi * x); });
    s.vel[0] = sample_cells(g, [](double x, double) { return std::cos(3.0 * x); });

    const State t = explicit_tendency(s, p);
    for (int q = 0; q < 2; ++q) {
      const Field& f = s.component(q);
      auto at = [&](int i) { return f[wrap(i, n)]; };
      auto sigma = [&](int i) { return (at(i + 1) - at(i - 1)) / (2.0 * dx); };
      // flux through x_{i+1/2}
      auto flux = [&](int i) {
        const double um = at(i) + 0.5 * dx * sigma(i);
        const double up = at(i + 1) - 0.5 * dx * sigma(i + 1);
        return 0.5 * (ubar * up + ubar * um) - 0.5 * std::abs(ubar) * (up - um);
      };
      for (int i = 0; i < n; ++i)
        EXPECT_NEAR(t.component(q)[i], (flux(i) - flux(i - 1)) / dx, 1e-14) << q << " " << i;
    }
  }
}

TEST(ImplicitTendency, HandExample)
{
  // rho = (0, 1, 0, -1), u = 0, a/eps = 10, dx = 1
  const PeriodicGrid g = PeriodicGrid::line(4, Interval{0.0, 4.0});
  State s(g);
  s.rho = Field(std::vector<double>{0, 1, 0, -1});
  const State t = implicit_tendency(s, params(0.1, 0.0));
  const double expect[4] = {10 * (1 - (-1)) / 2.0, 10 * (0 - 0) / 2.0, 10 * (-1 - 1) / 2.0,
                            10 * (0 - 0) / 2.0};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(t.vel[0][i], expect[i], 1e-12);
    EXPECT_EQ(t.rho[i], 0.0);
  }
}

TEST(ImplicitTendency, EqualsCentralDerivativeComposition)
{
  std::mt19937_64 rng(24);
  for (const PeriodicGrid& g : {unit_line(13), unit_square(9, 7)}) {
    for (double eps : {1.0, 1e-3}) {
      const ModelParams p = params(eps, 1.0, 1.0);
      const State s = random_state(g, rng);
      const State a = implicit_tendency(s, p);
      const State b = acoustic_operator(s, p.acoustic_speed());
      EXPECT_LE(max_abs(a - b), 1e-14 * p.acoustic_speed() / g.dx(0) * 4);
    }
  }
}

TEST(ImplicitTendency, WellPreparedStateHasNoDensityIncrement)
{
  // constant rho, u from a discrete stream function: u1 = D2 psi, u2 = -D1 psi
  std::mt19937_64 rng(25);
  const PeriodicGrid g = unit_square(10, 12);
  const Field psi = apwave::testing::random_field(g, rng);
  State s(g);
  s.rho = Field(g, 0.7);
  s.vel[0] = central_derivative(psi, g, 1);
  s.vel[1] = -1.0 * central_derivative(psi, g, 0);
  const State t = implicit_tendency(s, params(1e-4, 1.0, 1.0));
  EXPECT_LE(norm(t.rho, g, Norm::Linf), 1e-8); // (a/eps) * rounding of O(N) values
  EXPECT_LE(norm(t.vel[0], g, Norm::Linf), 1e-8);
}

TEST(Tendencies, ConserveMeans)
{
  std::mt19937_64 rng(26);
  for (const PeriodicGrid& g : {unit_line(17), unit_square(11, 6)}) {
    const ModelParams p = params(0.01, 0.8, -1.3);
    const State s = random_state(g, rng);
    for (const State& t : {explicit_tendency(s, p), implicit_tendency(s, p)}) {
      const double scale = max_abs(t);
      for (int q = 0; q < t.components(); ++q) {
        long double sum = 0;
        for (std::size_t k = 0; k < g.size(); ++k)
          sum += t.component(q)[k];
        EXPECT_LE(std::abs(static_cast<double>(sum)), 1e-12 * scale * g.size());
      }
    }
  }
}
