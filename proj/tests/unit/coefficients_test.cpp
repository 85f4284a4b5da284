#include "kolmo/coefficients.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <type_traits>

#include "kolmo/error.hpp"

namespace kolmo {
namespace {

BuiltinFamily Family1d(double gamma, double beta, double b0 = 1.0) {
  BuiltinFamily fam;
  fam.gamma = gamma;
  fam.beta = beta;
  fam.b0 = b0;
  return fam;
}

Point P(double x) { return Point::Constant(1, x); }

TEST(BuiltinTest, ScalarFamilyValues) {
  const CoefficientField f = make_builtin(Family1d(0.0, 1.0));
  for (double x : {-3.0, -0.5, 0.0, 0.7, 4.0}) {
    EXPECT_DOUBLE_EQ(f.Q(P(x))(0, 0), 1.0);
    EXPECT_NEAR(f.b(P(x))(0), -x * (1.0 + x * x), 1e-14 * (1.0 + std::pow(std::abs(x), 3)));
  }
  Mat c0(2, 2);
  c0 << -1, 1, 1, -1;
  EXPECT_TRUE(f.C(P(0.0)).isApprox(c0, 1e-15));
}

TEST(BuiltinTest, TwoDimensionalDiffusion) {
  BuiltinFamily fam;
  fam.dim_d = 2;
  fam.gamma = 1.0;
  fam.beta = 1.0;
  fam.b0 = 2.0;
  fam.Q0 = Mat::Identity(2, 2);
  const CoefficientField f = make_builtin(fam);
  Point x(2);
  x << 1.0, 0.0;
  EXPECT_TRUE(f.Q(x).isApprox(2.0 * Mat::Identity(2, 2), 1e-15));
  EXPECT_TRUE(f.b(x).isApprox(Vec::Unit(2, 0) * -4.0, 1e-15));
}

TEST(BuiltinTest, ExchangeDecaysAtInfinity) {
  const CoefficientField f = make_builtin(Family1d(0.0, 1.0));
  const Mat c = f.C(P(1e3));
  const double c_expected = 1.0 / (1.0 + 1e6);
  EXPECT_NEAR(c(0, 1), c_expected, 1e-18);
  EXPECT_NEAR(c(0, 0), -c_expected, 1e-18);
  EXPECT_LT(c.cwiseAbs().maxCoeff(), 1e-6 + 1e-12);
}

TEST(BuiltinTest, ZetaMatrixHasZeroRowAndColumnSums) {
  const Mat z = zeta3_matrix(0.3, 1.1, 2.0);
  EXPECT_LT(z.rowwise().sum().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(z.colwise().sum().cwiseAbs().maxCoeff(), 1e-15);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) EXPECT_GE(z(i, j), 0.0);
}

TEST(BuiltinTest, RejectsBadParameters) {
  BuiltinFamily fam = Family1d(0.0, 1.0, -1.0);
  EXPECT_THROW(make_builtin(fam), InvalidArgument);
  fam = Family1d(-0.5, 1.0);
  EXPECT_THROW(make_builtin(fam), InvalidArgument);
  fam = Family1d(0.0, 1.0);
  fam.dim_m = 3;
  EXPECT_THROW(make_builtin(fam), InvalidArgument);
  fam = Family1d(0.0, 1.0);
  fam.Q0 = Mat::Constant(1, 1, -1.0);
  EXPECT_THROW(make_builtin(fam), InvalidArgument);
  fam = Family1d(0.0, 1.0);
  fam.coupling = CouplingKind::kConstantMatrix;
  fam.constant_C = Mat::Identity(3, 3);
  EXPECT_THROW(make_builtin(fam), InvalidArgument);
}

TEST(BuiltinTest, EvaluateRejectsWrongPoint) {
  const CoefficientField f = make_builtin(Family1d(0.0, 1.0));
  EXPECT_THROW(f.evaluate(Point::Zero(2)), InvalidArgument);
  EXPECT_THROW(f.evaluate(P(std::nan(""))), InvalidArgument);
}

TEST(DerivativeBundleTest, DriftJacobianAndR) {
  const DerivativeBundle bundle = derivative_bundle(make_builtin(Family1d(0.0, 1.0)), 2);
  for (double x : {-2.0, 0.0, 0.3, 1.5})
    EXPECT_NEAR(bundle.jac_b(P(x))(0, 0), -1.0 - 3.0 * x * x, 1e-13);
  EXPECT_NEAR(bundle.r(P(0.0)), -1.0, 1e-15);
  EXPECT_DOUBLE_EQ(bundle.Q1(P(0.8)), 0.0);
  EXPECT_NEAR(bundle.C1(P(0.0)), 0.0, 1e-15);
}

// Central differences of the callables against the analytic bundle.
class FiniteDifferenceTest : public ::testing::TestWithParam<int> {};

TEST_P(FiniteDifferenceTest, MatchesAnalyticDerivatives) {
  BuiltinFamily fam;
  fam.dim_d = GetParam();
  fam.gamma = 1.0;
  fam.beta = 0.5;
  fam.b0 = 1.3;
  fam.Q0 = Mat::Identity(fam.dim_d, fam.dim_d);
  if (fam.dim_d == 2) fam.Q0(0, 1) = fam.Q0(1, 0) = 0.25;
  const CoefficientField f = make_builtin(fam);
  const DerivativeBundle bundle = derivative_bundle(f, 2);
  const int d = fam.dim_d;
  const double h = 1e-4;
  Point x(d);
  x.setLinSpaced(0.4, -0.7);
  auto e = [&](int k) { return Point(Vec::Unit(d, k) * h); };

  const Mat jac = bundle.jac_b(x);
  const auto dQ = bundle.dQ(x);
  const auto dC = bundle.dC(x);
  const auto d2Q = bundle.d2Q(x);
  const auto d2C = bundle.d2C(x);
  const auto d2b = bundle.d2b(x);
  for (int k = 0; k < d; ++k) {
    const Vec fd_b = (f.b(x + e(k)) - f.b(x - e(k))) / (2 * h);
    EXPECT_LT((jac.col(k) - fd_b).norm(), 1e-7);
    EXPECT_LT((dQ[k] - (f.Q(x + e(k)) - f.Q(x - e(k))) / (2 * h)).norm(), 1e-7);
    EXPECT_LT((dC[k] - (f.C(x + e(k)) - f.C(x - e(k))) / (2 * h)).norm(), 1e-7);
    for (int l = 0; l < d; ++l) {
      auto mixed = [&](auto fn) {
        using R = std::decay_t<decltype(fn(x))>;
        R out = (fn(x + e(k) + e(l)) - fn(x + e(k) - e(l)) - fn(x - e(k) + e(l)) +
                 fn(x - e(k) - e(l))) /
                (4 * h * h);
        return out;
      };
      EXPECT_LT((d2Q[k * d + l] - mixed([&](const Point& y) { return f.Q(y); })).norm(), 1e-5);
      EXPECT_LT((d2C[k * d + l] - mixed([&](const Point& y) { return f.C(y); })).norm(), 1e-5);
      EXPECT_LT((d2b[k * d + l] - mixed([&](const Point& y) { return f.b(y); })).norm(), 1e-5);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, FiniteDifferenceTest, ::testing::Values(1, 2));

TEST(DerivativeBundleTest, RequiresDeclaredOrder) {
  FieldFunctions fns;
  fns.Q = [](const Point&) { return Mat::Identity(1, 1); };
  fns.b = [](const Point& x) { return Vec(-x); };
  fns.C = [](const Point&) { return Mat::Zero(1, 1); };
  fns.jac_b = [](const Point&) { return Mat::Constant(1, 1, -1.0); };
  fns.dQ = [](const Point&) { return std::vector<Mat>{Mat::Zero(1, 1)}; };
  fns.dC = fns.dQ;
  const CoefficientField f(1, 1, 1, fns);
  EXPECT_THROW(derivative_bundle(f, 2), InvalidArgument);
  EXPECT_NO_THROW(derivative_bundle(f, 1));
}

}  // namespace
}  // namespace kolmo
