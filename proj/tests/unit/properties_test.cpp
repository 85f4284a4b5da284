#include "kolmo/properties.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "kolmo/error.hpp"

namespace kolmo {
namespace {

CoefficientField Exchange() { return make_builtin(BuiltinFamily{}); }

CoefficientField ConstantC(Mat c) {
  BuiltinFamily fam;
  fam.dim_m = static_cast<int>(c.rows());
  fam.coupling = CouplingKind::kConstantMatrix;
  fam.constant_C = std::move(c);
  return make_builtin(fam);
}

Vec Xi() { return Vec::Constant(2, 1.0 / std::sqrt(2.0)); }

Mat ExchangeMatrix() {
  Mat c(2, 2);
  c << -1, 1, 1, -1;
  return c;
}

class PropertiesTest : public ::testing::Test {
 protected:
  PropertiesTest()
      : grid_(build_grid(1, 4.0, 161, BoundaryKind::kNeumann)),
        op_(assemble_system_operator(Exchange(), grid_)),
        mu_(solve_scalar_invariant_density(Exchange(), grid_)),
        sys_(build_measure_system(Xi(), mu_)) {}

  Trajectory Run(const GridFunction& f, double t_final, double dt = 1e-2) const {
    return evolve(op_, f, t_final, dt, 1.0);
  }

  Grid grid_;
  DiscreteOperator op_;
  MeasureDensity mu_;
  MeasureSystem sys_;
};

TEST_F(PropertiesTest, SupNorm) {
  GridFunction f = GridFunction::zeros(grid_, 2);
  f.values()(0, 3) = -3.0;
  f.values()(1, 7) = 4.0;
  EXPECT_DOUBLE_EQ(sup_norm(f), 5.0);
}

TEST_F(PropertiesTest, DerivativeNormOfQuadratic) {
  const GridFunction u =
      GridFunction::sample(grid_, 1, [](const Point& x) { return Vec::Constant(1, x(0) * x(0)); });
  const int node = 100;
  const double x = grid_.node(node)(0);
  EXPECT_NEAR(derivative_norm_sq(u, 1, node), 4.0 * x * x, 1e-10);
  EXPECT_NEAR(derivative_norm_sq(u, 2, node), 4.0, 1e-9);
  EXPECT_THROW(derivative_norm_sq(u, 1, 0), InvalidArgument);
}

TEST_F(PropertiesTest, FixedPointSatisfiesBoundsWithEquality) {
  const GridFunction xi = GridFunction::constant(grid_, Xi());
  const Trajectory tr = Run(xi, 1.0);
  GridFunction ones = GridFunction::constant(grid_, Vec::Ones(1));
  const Trajectory scalar =
      evolve(assemble_scalar_operator(Exchange(), grid_), ones, 1.0, 1e-2, 1.0);
  const PropertyReport rep = verify_semigroup_bounds(tr, scalar, 2.0);
  EXPECT_TRUE(rep.passed());
  EXPECT_LE(std::abs(rep.measured), 1e-8);

  EXPECT_TRUE(verify_invariance(tr, sys_).passed());
  EXPECT_LE(verify_invariance(tr, sys_).measured, 1e-12);
  const PropertyReport lp1 = verify_lp_bound(tr, sys_, 1.0);
  EXPECT_TRUE(lp1.passed());
  EXPECT_LE(std::abs(lp_norm(tr.snapshots.back(), sys_, 1.0) - lp_norm(xi, sys_, 1.0)), 1e-6);
}

TEST_F(PropertiesTest, ZeroDatumIsNonnegative) {
  const Trajectory tr = Run(GridFunction::zeros(grid_, 2), 1.0);
  EXPECT_TRUE(verify_positivity(tr, 2.0).passed());
}

TEST_F(PropertiesTest, CouplingTransfersMass) {
  const GridFunction f = GridFunction::sample(grid_, 2, [](const Point& x) {
    return Vec((Vec(2) << std::exp(-x(0) * x(0)), 0.0).finished());
  });
  const PropertyReport rep = verify_positivity(Run(f, 1.0), 2.0);
  EXPECT_TRUE(rep.passed());
}

TEST_F(PropertiesTest, InvarianceAndLpOnSmoothData) {
  const GridFunction f = GridFunction::sample(grid_, 2, [](const Point& x) {
    return Vec((Vec(2) << std::tanh(x(0)), std::exp(-x(0) * x(0))).finished());
  });
  const Trajectory tr = Run(f, 2.0);
  EXPECT_TRUE(verify_invariance(tr, sys_).passed());
  for (double p : {2.0, 4.0}) EXPECT_TRUE(verify_lp_bound(tr, sys_, p).passed()) << p;
}

TEST_F(PropertiesTest, ScaledSystemHasSameRelativeResidual) {
  const GridFunction f = GridFunction::sample(grid_, 2, [](const Point& x) {
    return Vec((Vec(2) << 1.0 + std::tanh(x(0)), std::exp(-x(0) * x(0))).finished());
  });
  const Trajectory tr = Run(f, 1.0);
  const double r1 = verify_invariance(tr, sys_).measured;
  const double r2 = verify_invariance(tr, build_measure_system(Xi(), mu_, 2.0)).measured;
  EXPECT_NEAR(r1, r2, 1e-14);
}

TEST_F(PropertiesTest, LongtimeOfKernelVector) {
  const Trajectory tr = Run(GridFunction::constant(grid_, Xi()), 2.0);
  const PropertyReport rep = verify_longtime(tr, sys_, 2.0);
  EXPECT_TRUE(rep.passed());
  EXPECT_LE(rep.measured, 1e-10);
}

TEST_F(PropertiesTest, GradientEnergyOfKernelVectorVanishes) {
  const Trajectory tr = evolve(op_, GridFunction::constant(grid_, Xi()), 2.0, 1e-2, 1.0, 10);
  const PropertyReport rep = verify_l2_gradient_decay(tr, sys_, 1.0);
  EXPECT_LE(std::stod(rep.metadata.at("h_final")), 1e-20);
}

TEST_F(PropertiesTest, FixedPoints) {
  const PropertyReport rep = verify_fixed_points(Exchange(), grid_, Xi(), 1e-2, 1.0);
  EXPECT_TRUE(rep.passed());
  EXPECT_GE(std::stod(rep.metadata.at("eta_gap")), 0.1);
  EXPECT_GT(std::stod(rep.metadata.at("nonconstant_gap")), 0.0);
}

TEST(CounterexampleTest, Classification) {
  EXPECT_EQ(classify_constant_coupling(Mat::Identity(2, 2)), CounterexampleKind::kGrowth);
  EXPECT_EQ(classify_constant_coupling(-Mat::Identity(2, 2)), CounterexampleKind::kDecay);
  EXPECT_EQ(classify_constant_coupling(ExchangeMatrix()), CounterexampleKind::kNeutral);
}

TEST(CounterexampleTest, RatesOfConstantData) {
  const Grid g = build_grid(1, 3.0, 61, BoundaryKind::kNeumann);
  const GridFunction f = GridFunction::constant(g, Xi());
  const PropertyReport grow =
      counterexample_mode(ConstantC(Mat::Identity(2, 2)), f, 1.0, 1e-3, 0.5, 1.0);
  EXPECT_TRUE(grow.passed()) << grow.measured;
  EXPECT_EQ(grow.property, "counterexample_growth");
  const PropertyReport decay =
      counterexample_mode(ConstantC(-Mat::Identity(2, 2)), f, 1.0, 1e-3, 0.5, 1.0);
  EXPECT_TRUE(decay.passed()) << decay.measured;
  const PropertyReport neutral = counterexample_mode(
      ConstantC(ExchangeMatrix()), GridFunction::constant(g, Vec::Unit(2, 0)), 1.0, 1e-2, 1.0);
  EXPECT_TRUE(neutral.passed()) << neutral.measured;
  EXPECT_THROW(counterexample_mode(Exchange(), f, 1.0), InvalidArgument);
}

TEST(JordanTest, ExchangeLimitAndRate) {
  std::vector<double> ts;
  for (int k = 1; k <= 20; ++k) ts.push_back(0.5 * k);
  const PropertyReport rep = jordan_asymptotics_check(ExchangeMatrix(), Vec::Unit(2, 0), ts);
  EXPECT_TRUE(rep.passed());
  EXPECT_NEAR(rep.measured, 2.0, 1e-6);
  EXPECT_EQ(rep.metadata.at("limit"), format_point(Vec::Constant(2, 0.5)));

  const PropertyReport fixed = jordan_asymptotics_check(ExchangeMatrix(), Xi(), ts);
  EXPECT_TRUE(fixed.passed());
}

TEST(JordanTest, ZetaProjection) {
  const Mat c = zeta3_matrix(1.0, 2.0, 3.0);
  const Vec g = (Vec(3) << 1.0, -2.0, 0.5).finished();
  std::vector<double> ts;
  for (int k = 1; k <= 10; ++k) ts.push_back(0.2 * k);
  const PropertyReport rep = jordan_asymptotics_check(c, g, ts);
  EXPECT_TRUE(rep.passed());
  const Vec xi = Vec::Constant(3, 1.0 / std::sqrt(3.0));
  const Vec limit = xi.dot(g) * xi;
  const Vec late = expm(40.0 * c) * g;
  EXPECT_LT((late - limit).norm(), 1e-10);
}

TEST(RateVerdictTest, BoundedCaseIgnoresSlope) {
  RateFit fit;
  fit.k = 1;
  fit.h = 1;
  fit.fit.slope = -0.6;
  fit.product_ratio = 3.0;
  EXPECT_TRUE(gradient_rate_verdict(fit).passed());
  fit.product_ratio = 30.0;
  EXPECT_FALSE(gradient_rate_verdict(fit).passed());
  fit.k = 2;
  fit.h = 0;
  fit.fit.slope = -2.5;
  EXPECT_FALSE(gradient_rate_verdict(fit).passed());
  fit.fit.slope = -2.1;
  EXPECT_TRUE(gradient_rate_verdict(fit).passed());
}

}  // namespace
}  // namespace kolmo
