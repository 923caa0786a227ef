#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "apwave/error.hpp"

namespace apwave
{

struct Interval
{
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
};

/**
 * Uniform periodic cell mesh in one or two dimensions.
 *
 * Cells are indexed (i, j) with i along x1 running fastest in storage. A 1D
 * grid is stored as N x 1 with a unit-width dummy second axis that never
 * enters volumes or stencils.
 */
class PeriodicGrid
{
public:
  static constexpr int min_cells = 4;

  static PeriodicGrid line(int n, Interval domain)
  {
    return PeriodicGrid(1, {n, 1}, {domain, Interval{0.0, 1.0}});
  }

  static PeriodicGrid plane(std::array<int, 2> n, std::array<Interval, 2> domain)
  {
    return PeriodicGrid(2, n, domain);
  }

  int dim() const { return dim_; }
  int cells(int axis) const { return n_[checked(axis)]; }
  double dx(int axis) const { return dx_[checked(axis)]; }
  const Interval& domain(int axis) const { return domain_[checked(axis)]; }
  std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1]; }

  double center(int axis, int i) const
  {
    return domain_[checked(axis)].lo + (i + 0.5) * dx_[axis];
  }

  /// Position of the face on the low side of cell i (face index i <-> x_{i-1/2}).
  double face(int axis, int i) const { return domain_[checked(axis)].lo + i * dx_[axis]; }

  double cell_volume() const { return dim_ == 1 ? dx_[0] : dx_[0] * dx_[1]; }

  std::size_t index(int i, int j = 0) const
  {
    return static_cast<std::size_t>(wrap(i, n_[0])) +
           static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(wrap(j, n_[1]));
  }

  /// Index of the neighbour `offset` cells along `axis`, wrapping periodically.
  std::size_t neighbour(std::size_t idx, int axis, int offset) const
  {
    const int i = static_cast<int>(idx % n_[0]);
    const int j = static_cast<int>(idx / n_[0]);
    return axis == 0 ? index(i + offset, j) : index(i, j + offset);
  }

  int check_axis(int axis) const { return checked(axis); }

  bool operator==(const PeriodicGrid& o) const
  {
    return dim_ == o.dim_ && n_ == o.n_ && domain_[0].lo == o.domain_[0].lo &&
           domain_[0].hi == o.domain_[0].hi && domain_[1].lo == o.domain_[1].lo &&
           domain_[1].hi == o.domain_[1].hi;
  }

private:
  PeriodicGrid(int dim, std::array<int, 2> n, std::array<Interval, 2> domain)
      : dim_(dim), n_(n), domain_(domain)
  {
    for (int m = 0; m < dim_; ++m) {
      if (n_[m] < min_cells)
        throw InputError("grid: need at least " + std::to_string(min_cells) +
                         " cells per axis, got " + std::to_string(n_[m]));
      if (!(domain_[m].length() > 0.0) || !std::isfinite(domain_[m].length()))
        throw InputError("grid: empty or non-finite domain on axis " + std::to_string(m));
      dx_[m] = domain_[m].length() / n_[m];
    }
    if (dim_ == 1)
      dx_[1] = 1.0;
  }

  int checked(int axis) const
  {
    if (axis < 0 || axis >= dim_)
      throw InputError("axis " + std::to_string(axis) + " out of range for " +
                       std::to_string(dim_) + "D grid");
    return axis;
  }

  static int wrap(int i, int n) { return ((i % n) + n) % n; }

  int dim_;
  std::array<int, 2> n_;
  std::array<Interval, 2> domain_;
  std::array<double, 2> dx_{1.0, 1.0};
};

/// Scalar field of cell values (or, transiently, of low-side face values).
class Field
{
public:
  Field() = default;
  explicit Field(const PeriodicGrid& g, double value = 0.0) : v_(g.size(), value) {}
  explicit Field(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t k) { return v_[k]; }
  double operator[](std::size_t k) const { return v_[k]; }
  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  Field& operator+=(const Field& o)
  {
    match(o);
    for (std::size_t k = 0; k < v_.size(); ++k)
      v_[k] += o.v_[k];
    return *this;
  }

  Field& operator-=(const Field& o)
  {
    match(o);
    for (std::size_t k = 0; k < v_.size(); ++k)
      v_[k] -= o.v_[k];
    return *this;
  }

  Field& operator*=(double a)
  {
    for (auto& x : v_)
      x *= a;
    return *this;
  }

  /// this += a * x
  Field& axpy(double a, const Field& x)
  {
    match(x);
    for (std::size_t k = 0; k < v_.size(); ++k)
      v_[k] += a * x.v_[k];
    return *this;
  }

  double mean() const
  {
    long double acc = 0.0L;
    for (double x : v_)
      acc += x;
    return static_cast<double>(acc / static_cast<long double>(v_.size()));
  }

  bool all_finite() const
  {
    for (double x : v_)
      if (!std::isfinite(x))
        return false;
    return true;
  }

private:
  void match(const Field& o) const
  {
    if (o.v_.size() != v_.size())
      throw InputError("field extents differ: " + std::to_string(v_.size()) + " vs " +
                       std::to_string(o.v_.size()));
  }

  std::vector<double> v_;
};

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double s, Field a) { return a *= s; }

/// Linearised model parameters: Mach scaling, reference sound speed, advection, density.
struct ModelParams
{
  double epsilon = 1.0;
  double a_bar = 1.0;
  std::array<double, 2> u_bar{0.0, 0.0};
  double rho_bar = 1.0;
  bool advection_on = true;

  /// Coefficient of the stiff acoustic flux.
  double acoustic_speed() const { return a_bar / epsilon; }

  void validate() const
  {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw ConfigError("epsilon must be positive and finite");
    if (!(a_bar > 0.0) || !std::isfinite(a_bar))
      throw ConfigError("a_bar must be positive and finite");
    if (!(rho_bar > 0.0) || !std::isfinite(rho_bar))
      throw ConfigError("rho_bar must be positive and finite");
    if (!std::isfinite(u_bar[0]) || !std::isfinite(u_bar[1]))
      throw ConfigError("u_bar must be finite");
  }
};

/// Cell-averaged unknowns: scaled density and d velocity components.
struct State
{
  PeriodicGrid grid;
  Field rho;
  std::vector<Field> vel;

  explicit State(const PeriodicGrid& g) : grid(g), rho(g), vel(g.dim(), Field(g)) {}

  int components() const { return 1 + static_cast<int>(vel.size()); }

  Field& component(int q) { return q == 0 ? rho : vel[q - 1]; }
  const Field& component(int q) const { return q == 0 ? rho : vel[q - 1]; }

  /// this += a * x
  State& axpy(double a, const State& x)
  {
    check_compatible(x);
    rho.axpy(a, x.rho);
    for (std::size_t m = 0; m < vel.size(); ++m)
      vel[m].axpy(a, x.vel[m]);
    return *this;
  }

  State& operator*=(double a)
  {
    rho *= a;
    for (auto& v : vel)
      v *= a;
    return *this;
  }

  bool all_finite() const
  {
    if (!rho.all_finite())
      return false;
    for (const auto& v : vel)
      if (!v.all_finite())
        return false;
    return true;
  }

  void check_compatible(const State& x) const
  {
    if (!(x.grid == grid))
      throw InputError("states live on different grids");
  }

  /// Throws InputError unless extents match the grid and all entries are finite.
  void validate() const
  {
    if (rho.size() != grid.size() || vel.size() != static_cast<std::size_t>(grid.dim()))
      throw InputError("state extents do not match its grid");
    for (const auto& v : vel)
      if (v.size() != grid.size())
        throw InputError("state extents do not match its grid");
    if (!all_finite())
      throw InputError("state contains non-finite values");
  }
};

inline State operator-(State a, const State& b) { return a.axpy(-1.0, b); }

// ---------------------------------------------------------------------------
// Discrete operators. Face fields use the low-side convention: face index i is
// the face x_{i-1/2}, so cell i is bounded by faces i and i+1.
// ---------------------------------------------------------------------------

/**
 * Visit every cell with its periodic neighbours along `axis`:
 * fn(k, k_{i-2}, k_{i-1}, k_{i+1}).
 */
template <typename Fn>
void for_each_stencil(const PeriodicGrid& g, int axis, Fn&& fn)
{
  g.check_axis(axis);
  const int n1 = g.cells(0);
  const int n2 = g.dim() == 2 ? g.cells(1) : 1;
  const int n = axis == 0 ? n1 : n2;
  const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(n1);
  std::vector<std::array<int, 3>> wrap(n);
  for (int a = 0; a < n; ++a)
    wrap[a] = {(a - 2 + 2 * n) % n, (a - 1 + n) % n, (a + 1) % n};

  std::size_t k = 0;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i, ++k) {
      const int a = axis == 0 ? i : j;
      const std::size_t base = k - static_cast<std::size_t>(a) * stride;
      const auto& w = wrap[a];
      fn(k, base + w[0] * stride, base + w[1] * stride, base + w[2] * stride);
    }
}

/// delta_m f at cell i: f_{i+1/2} - f_{i-1/2}.
inline Field delta(const Field& faces, const PeriodicGrid& g, int axis)
{
  Field out(g);
  for_each_stencil(g, axis, [&](std::size_t k, std::size_t, std::size_t, std::size_t kp) {
    out[k] = faces[kp] - faces[k];
  });
  return out;
}

/// mu_m f at cell i: (f_{i+1/2} + f_{i-1/2}) / 2.
inline Field mu(const Field& faces, const PeriodicGrid& g, int axis)
{
  Field out(g);
  for_each_stencil(g, axis, [&](std::size_t k, std::size_t, std::size_t, std::size_t kp) {
    out[k] = 0.5 * (faces[kp] + faces[k]);
  });
  return out;
}

/// Wide central difference (f_{i+1} - f_{i-1}) / (2 dx_m), i.e. delta_m mu_m / dx_m on cells.
inline Field central_derivative(const Field& f, const PeriodicGrid& g, int axis)
{
  const double s = 0.5 / g.dx(axis);
  Field out(g);
  for_each_stencil(g, axis, [&](std::size_t k, std::size_t, std::size_t km, std::size_t kp) {
    out[k] = s * (f[kp] - f[km]);
  });
  return out;
}

enum class Norm
{
  L1,
  L2,
  Linf
};

/// Cell-volume weighted norm.
inline double norm(const Field& f, const PeriodicGrid& g, Norm which)
{
  const double vol = g.cell_volume();
  long double acc = 0.0L;
  switch (which) {
  case Norm::L1:
    for (double x : f.values())
      acc += std::abs(x);
    return static_cast<double>(acc) * vol;
  case Norm::L2:
    for (double x : f.values())
      acc += static_cast<long double>(x) * x;
    return std::sqrt(static_cast<double>(acc) * vol);
  case Norm::Linf: {
    double m = 0.0;
    for (double x : f.values())
      m = std::max(m, std::abs(x));
    return m;
  }
  }
  return 0.0;
}

/// Weighted L2 inner product of two cell fields.
inline double inner(const Field& a, const Field& b, const PeriodicGrid& g)
{
  long double acc = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k)
    acc += static_cast<long double>(a[k]) * b[k];
  return static_cast<double>(acc) * g.cell_volume();
}

/// Weighted L2 inner product of two states (sum over all components).
inline double inner(const State& a, const State& b)
{
  a.check_compatible(b);
  double acc = inner(a.rho, b.rho, a.grid);
  for (std::size_t m = 0; m < a.vel.size(); ++m)
    acc += inner(a.vel[m], b.vel[m], a.grid);
  return acc;
}

/// Max-abs over all state components.
inline double max_abs(const State& s)
{
  double m = norm(s.rho, s.grid, Norm::Linf);
  for (const auto& v : s.vel)
    m = std::max(m, norm(v, s.grid, Norm::Linf));
  return m;
}

/// Fill a field by sampling f(x1, x2) at cell centres (x2 = 0 on 1D grids).
template <typename Fn>
Field sample_cells(const PeriodicGrid& g, Fn&& f)
{
  Field out(g);
  const int n1 = g.cells(0);
  const int n2 = g.dim() == 2 ? g.cells(1) : 1;
  for (int j = 0; j < n2; ++j) {
    const double y = g.dim() == 2 ? g.center(1, j) : 0.0;
    for (int i = 0; i < n1; ++i)
      out[g.index(i, j)] = f(g.center(0, i), y);
  }
  return out;
}

} // namespace apwave
