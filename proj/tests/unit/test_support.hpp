#pragma once

#include <random>

#include "apwave/grid.hpp"

namespace apwave::testing
{

inline Field random_field(const PeriodicGrid& g, std::mt19937_64& rng, double scale = 1.0)
{
  std::uniform_real_distribution<double> u(-scale, scale);
  Field f(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    f[k] = u(rng);
  return f;
}

inline State random_state(const PeriodicGrid& g, std::mt19937_64& rng, double scale = 1.0)
{
  State s(g);
  for (int q = 0; q < s.components(); ++q)
    s.component(q) = random_field(g, rng, scale);
  return s;
}

inline double max_diff(const State& a, const State& b)
{
  return max_abs(a - b);
}

inline PeriodicGrid unit_square(int n1, int n2)
{
  return PeriodicGrid::plane({n1, n2}, {Interval{0.0, 1.0}, Interval{0.0, 1.0}});
}

inline PeriodicGrid unit_line(int n) { return PeriodicGrid::line(n, Interval{0.0, 1.0}); }

} // namespace apwave::testing
