#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apwave/error.hpp"

namespace apwave
{

enum class TableauType
{
  TypeA,
  TypeCK,
  Other
};

inline std::string_view to_string(TableauType t)
{
  switch (t) {
  case TableauType::TypeA:
    return "TypeA";
  case TableauType::TypeCK:
    return "TypeCK";
  default:
    return "Other";
  }
}

/// Square coefficient matrix stored row-major.
class CoefficientMatrix
{
public:
  CoefficientMatrix() = default;
  CoefficientMatrix(std::size_t n, std::vector<double> rows) : n_(n), v_(std::move(rows))
  {
    if (v_.size() != n_ * n_)
      throw ConfigError("coefficient matrix: expected " + std::to_string(n_ * n_) +
                        " entries, got " + std::to_string(v_.size()));
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }

private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

/**
 * Double Butcher tableau of a diagonally implicit IMEX Runge-Kutta method.
 *
 * The explicit matrix is strictly lower triangular and the implicit matrix
 * lower triangular; both are checked on construction so the stepper can rely
 * on them. Schemes with fewer explicit than implicit stages are stored padded
 * with zero rows/columns to the common stage count.
 */
class ImexTableau
{
public:
  ImexTableau(std::string name, CoefficientMatrix a_explicit, CoefficientMatrix a_implicit,
              std::vector<double> c_explicit, std::vector<double> c_implicit,
              std::vector<double> w_explicit, std::vector<double> w_implicit)
      : name_(std::move(name)), at_(std::move(a_explicit)), a_(std::move(a_implicit)),
        ct_(std::move(c_explicit)), c_(std::move(c_implicit)), wt_(std::move(w_explicit)),
        w_(std::move(w_implicit))
  {
    const std::size_t s = a_.size();
    if (s == 0)
      throw ConfigError("tableau " + name_ + ": zero stages");
    if (at_.size() != s || ct_.size() != s || c_.size() != s || wt_.size() != s ||
        w_.size() != s)
      throw ConfigError("tableau " + name_ + ": inconsistent stage counts");
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        if (j >= i && at_(i, j) != 0.0)
          throw ConfigError("tableau " + name_ + ": explicit matrix not strictly lower triangular");
        if (j > i && a_(i, j) != 0.0)
          throw ConfigError("tableau " + name_ + ": implicit matrix not lower triangular");
      }
  }

  const std::string& name() const { return name_; }
  int stages() const { return static_cast<int>(a_.size()); }

  double a_explicit(int i, int j) const { return at_(i, j); }
  double a_implicit(int i, int j) const { return a_(i, j); }
  double c_explicit(int i) const { return ct_[i]; }
  double c_implicit(int i) const { return c_[i]; }
  double w_explicit(int i) const { return wt_[i]; }
  double w_implicit(int i) const { return w_[i]; }

  const CoefficientMatrix& explicit_matrix() const { return at_; }
  const CoefficientMatrix& implicit_matrix() const { return a_; }

private:
  std::string name_;
  CoefficientMatrix at_, a_;
  std::vector<double> ct_, c_, wt_, w_;
};

/// Type-A: A invertible. Type-CK: s >= 2, zero first row, trailing block invertible.
inline TableauType classify(const ImexTableau& t)
{
  const int s = t.stages();
  // lower triangular: invertible iff every diagonal entry is nonzero
  auto diag_nonzero_from = [&](int first) {
    for (int i = first; i < s; ++i)
      if (t.a_implicit(i, i) == 0.0)
        return false;
    return true;
  };
  if (diag_nonzero_from(0))
    return TableauType::TypeA;
  if (s >= 2) {
    bool first_row_zero = true;
    for (int j = 0; j < s; ++j)
      first_row_zero = first_row_zero && t.a_implicit(0, j) == 0.0;
    if (first_row_zero && diag_nonzero_from(1))
      return TableauType::TypeCK;
  }
  return TableauType::Other;
}

struct OrderCondition
{
  std::string name;
  double residual = 0.0; ///< |lhs - rhs|
  bool coupling = false; ///< mixes explicit and implicit coefficients
};

struct OrderReport
{
  int order = 1;
  std::vector<OrderCondition> conditions;

  /// Pure (non-coupling) conditions all within tol.
  bool pure_satisfied(double tol) const
  {
    for (const auto& c : conditions)
      if (!c.coupling && !(c.residual <= tol))
        return false;
    return true;
  }

  bool all_satisfied(double tol) const
  {
    for (const auto& c : conditions)
      if (!(c.residual <= tol))
        return false;
    return true;
  }
};

inline OrderReport check_order_conditions(const ImexTableau& t, int p)
{
  if (p < 1 || p > 2)
    throw UnsupportedOrder("order conditions tabulated for p in {1, 2}, got " + std::to_string(p));

  const int s = t.stages();
  auto dot = [s](auto&& f, auto&& g) {
    long double acc = 0.0L;
    for (int i = 0; i < s; ++i)
      acc += static_cast<long double>(f(i)) * static_cast<long double>(g(i));
    return static_cast<double>(acc);
  };
  auto one = [](int) { return 1.0; };
  auto wt = [&](int i) { return t.w_explicit(i); };
  auto w = [&](int i) { return t.w_implicit(i); };
  auto ct = [&](int i) { return t.c_explicit(i); };
  auto c = [&](int i) { return t.c_implicit(i); };

  OrderReport r;
  r.order = p;
  r.conditions.push_back({"sum(w_explicit) = 1", std::abs(dot(wt, one) - 1.0), false});
  r.conditions.push_back({"sum(w_implicit) = 1", std::abs(dot(w, one) - 1.0), false});
  if (p == 2) {
    r.conditions.push_back({"w_explicit . c_explicit = 1/2", std::abs(dot(wt, ct) - 0.5), false});
    r.conditions.push_back({"w_implicit . c_implicit = 1/2", std::abs(dot(w, c) - 0.5), false});
    r.conditions.push_back({"w_explicit . c_implicit = 1/2", std::abs(dot(wt, c) - 0.5), true});
    r.conditions.push_back({"w_implicit . c_explicit = 1/2", std::abs(dot(w, ct) - 0.5), true});
  }
  return r;
}

namespace detail
{

inline ImexTableau euler111()
{
  return ImexTableau("EULER111", CoefficientMatrix(1, {0.0}), CoefficientMatrix(1, {1.0}), {0.0},
                     {1.0}, {1.0}, {1.0});
}

inline ImexTableau ars222()
{
  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  const double d = 1.0 - 1.0 / (2.0 * g);
  // clang-format off
  CoefficientMatrix at(3, {0.0,     0.0,     0.0,
                           g,       0.0,     0.0,
                           d,       1.0 - d, 0.0});
  CoefficientMatrix a(3,  {0.0,     0.0,     0.0,
                           0.0,     g,       0.0,
                           0.0,     1.0 - g, g});
  // clang-format on
  return ImexTableau("ARS222", std::move(at), std::move(a), {0.0, g, 1.0}, {0.0, g, 1.0},
                     {d, 1.0 - d, 0.0}, {0.0, 1.0 - g, g});
}

} // namespace detail

/// Named built-in tableaux: "EULER111" (order 1) and "ARS222" (order 2).
inline ImexTableau builtin_tableau(std::string_view name)
{
  if (name == "EULER111") {
    auto t = detail::euler111();
    if (!check_order_conditions(t, 1).pure_satisfied(1e-14))
      throw std::logic_error("EULER111 fails its order conditions");
    return t;
  }
  if (name == "ARS222") {
    auto t = detail::ars222();
    if (!check_order_conditions(t, 2).pure_satisfied(1e-14))
      throw std::logic_error("ARS222 fails its order conditions");
    return t;
  }
  throw ConfigError("unknown tableau '" + std::string(name) + "' (expected EULER111 or ARS222)");
}

} // namespace apwave
