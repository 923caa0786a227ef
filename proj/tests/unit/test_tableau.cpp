#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "apwave/error.hpp"
#include "apwave/tableau.hpp"

using namespace apwave;

namespace
{

// gamma and delta evaluated independently in extended precision
const long double kGamma = 1.0L - 1.0L / std::sqrt(2.0L);
const long double kDelta = 1.0L - 1.0L / (2.0L * kGamma);

} // namespace

TEST(Tableau, Euler111Coefficients)
{
  const ImexTableau t = builtin_tableau("EULER111");
  EXPECT_EQ(t.stages(), 1);
  EXPECT_EQ(t.name(), "EULER111");
  EXPECT_EQ(t.a_explicit(0, 0), 0.0);
  EXPECT_EQ(t.a_implicit(0, 0), 1.0);
  EXPECT_EQ(t.c_explicit(0), 0.0);
  EXPECT_EQ(t.c_implicit(0), 1.0);
  EXPECT_EQ(t.w_explicit(0), 1.0);
  EXPECT_EQ(t.w_implicit(0), 1.0);
}

TEST(Tableau, Ars222Coefficients)
{
  const ImexTableau t = builtin_tableau("ARS222");
  ASSERT_EQ(t.stages(), 3);
  const double g = static_cast<double>(kGamma);
  const double d = static_cast<double>(kDelta);
  EXPECT_NEAR(g, 0.2928932188, 1e-10);
  EXPECT_NEAR(d, -0.7071067812, 1e-10);

  const double at[3][3] = {{0, 0, 0}, {g, 0, 0}, {d, 1 - d, 0}};
  const double a[3][3] = {{0, 0, 0}, {0, g, 0}, {0, 1 - g, g}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(t.a_explicit(i, j), at[i][j], 1e-15) << i << "," << j;
      EXPECT_NEAR(t.a_implicit(i, j), a[i][j], 1e-15) << i << "," << j;
    }
  const double c[3] = {0, g, 1};
  const double wt[3] = {d, 1 - d, 0};
  const double w[3] = {0, 1 - g, g};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(t.c_explicit(i), c[i], 1e-15);
    EXPECT_NEAR(t.c_implicit(i), c[i], 1e-15);
    EXPECT_NEAR(t.w_explicit(i), wt[i], 1e-15);
    EXPECT_NEAR(t.w_implicit(i), w[i], 1e-15);
  }
}

TEST(Tableau, UnknownNameIsConfigError)
{
  EXPECT_THROW(builtin_tableau("RK4"), ConfigError);
  EXPECT_THROW(builtin_tableau(""), ConfigError);
}

TEST(Tableau, StructureBitExact)
{
  for (const char* name : {"EULER111", "ARS222"}) {
    const ImexTableau t = builtin_tableau(name);
    for (int i = 0; i < t.stages(); ++i)
      for (int j = 0; j < t.stages(); ++j) {
        if (j >= i) {
          EXPECT_EQ(t.a_explicit(i, j), 0.0) << name;
        }
        if (j > i) {
          EXPECT_EQ(t.a_implicit(i, j), 0.0) << name;
        }
      }
  }
}

TEST(Tableau, ConstructionRejectsBadStructure)
{
  // explicit matrix with a diagonal entry
  EXPECT_THROW(ImexTableau("bad", CoefficientMatrix(1, {0.5}), CoefficientMatrix(1, {1.0}), {0.0},
                           {1.0}, {1.0}, {1.0}),
               ConfigError);
  // implicit matrix with an upper entry
  EXPECT_THROW(ImexTableau("bad", CoefficientMatrix(2, {0, 0, 1, 0}),
                           CoefficientMatrix(2, {1, 0.5, 0, 1}), {0, 1}, {1, 1}, {0.5, 0.5},
                           {0.5, 0.5}),
               ConfigError);
  // size mismatch
  EXPECT_THROW(ImexTableau("bad", CoefficientMatrix(1, {0.0}), CoefficientMatrix(1, {1.0}),
                           {0.0, 1.0}, {1.0}, {1.0}, {1.0}),
               ConfigError);
}

TEST(Tableau, Classification)
{
  EXPECT_EQ(classify(builtin_tableau("EULER111")), TableauType::TypeA);
  EXPECT_EQ(classify(builtin_tableau("ARS222")), TableauType::TypeCK);

  const ImexTableau zero("zero", CoefficientMatrix(2, {0, 0, 0, 0}),
                         CoefficientMatrix(2, {0, 0, 0, 0}), {0, 0}, {0, 0}, {0.5, 0.5},
                         {0.5, 0.5});
  EXPECT_EQ(classify(zero), TableauType::Other);

  // singular trailing block: first stage explicit but a_22 = 0
  const ImexTableau singular("sing", CoefficientMatrix(3, {0, 0, 0, 1, 0, 0, 0, 1, 0}),
                             CoefficientMatrix(3, {0, 0, 0, 0.5, 0, 0, 0, 0.5, 0.5}), {0, 1, 1},
                             {0, 0.5, 1}, {0, 0, 1}, {0, 0.5, 0.5});
  EXPECT_EQ(classify(singular), TableauType::Other);

  // diagonally implicit with nonzero diagonal: type A
  const ImexTableau dirk("dirk", CoefficientMatrix(2, {0, 0, 1, 0}),
                         CoefficientMatrix(2, {0.5, 0, 0.5, 0.5}), {0, 1}, {0.5, 1}, {0.5, 0.5},
                         {0.5, 0.5});
  EXPECT_EQ(classify(dirk), TableauType::TypeA);
  EXPECT_EQ(to_string(TableauType::TypeCK), "TypeCK");
}

TEST(Tableau, OrderConditionsEuler)
{
  const ImexTableau t = builtin_tableau("EULER111");
  const OrderReport r1 = check_order_conditions(t, 1);
  ASSERT_EQ(r1.conditions.size(), 2u);
  for (const auto& c : r1.conditions)
    EXPECT_EQ(c.residual, 0.0) << c.name;

  const OrderReport r2 = check_order_conditions(t, 2);
  EXPECT_FALSE(r2.pure_satisfied(1e-14));
  bool found = false;
  for (const auto& c : r2.conditions)
    if (c.name == "w_implicit . c_implicit = 1/2") {
      found = true;
      EXPECT_DOUBLE_EQ(c.residual, 0.5);
    }
  EXPECT_TRUE(found);
}

TEST(Tableau, OrderConditionsArs222)
{
  const OrderReport r = check_order_conditions(builtin_tableau("ARS222"), 2);
  ASSERT_EQ(r.conditions.size(), 6u);
  int mixed = 0;
  for (const auto& c : r.conditions) {
    EXPECT_LE(c.residual, 1e-14) << c.name;
    mixed += c.coupling;
  }
  EXPECT_EQ(mixed, 2);
  EXPECT_TRUE(r.all_satisfied(1e-14));
}

TEST(Tableau, UnsupportedOrder)
{
  const ImexTableau t = builtin_tableau("ARS222");
  EXPECT_THROW(check_order_conditions(t, 3), UnsupportedOrder);
  EXPECT_THROW(check_order_conditions(t, 0), UnsupportedOrder);
  try {
    check_order_conditions(t, 3);
  } catch (const ConfigError&) {
    SUCCEED();
  }
}
