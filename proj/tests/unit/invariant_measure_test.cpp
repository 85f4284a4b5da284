#include "kolmo/invariant_measure.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kolmo/error.hpp"

namespace kolmo {
namespace {

CoefficientField Family(double gamma, double beta, int m = 2,
                        CouplingKind kind = CouplingKind::kExchange2) {
  BuiltinFamily fam;
  fam.gamma = gamma;
  fam.beta = beta;
  fam.dim_m = m;
  fam.coupling = kind;
  return make_builtin(fam);
}

Grid Line(int n = 481, double L = 6.0) { return build_grid(1, L, n, BoundaryKind::kDirichlet); }

// Closed-form density, normalized by the trapezoid rule on the same nodes.
Vec ClosedForm(const Grid& g, const std::function<double(double)>& unnormalized) {
  Vec rho(g.node_count());
  for (int i = 0; i < rho.size(); ++i) rho(i) = unnormalized(g.node(i)(0));
  return rho / g.quadrature_weights().dot(rho);
}

double L1(const Grid& g, const Vec& a, const Vec& b) {
  return g.quadrature_weights().dot((a - b).cwiseAbs());
}

TEST(DensityTest, OrnsteinUhlenbeckIsStandardGaussian) {
  const Grid g = Line();
  const MeasureDensity mu = solve_scalar_invariant_density(Family(0.0, 0.0), g);
  Vec gauss(g.node_count());
  for (int i = 0; i < gauss.size(); ++i) {
    const double x = g.node(i)(0);
    gauss(i) = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  }
  EXPECT_LE(L1(g, mu.rho, gauss), 1e-3);
  EXPECT_LE(mu.normalization_residual, 1e-12);
  EXPECT_LE(mu.kernel_residual, 1e-10);
  EXPECT_LE(mu.clip_mass, 1e-6);
}

TEST(DensityTest, QuarticPotential) {
  const Grid g = Line();
  const MeasureDensity mu = solve_scalar_invariant_density(Family(0.0, 1.0), g);
  const Vec exact =
      ClosedForm(g, [](double x) { return std::exp(-0.5 * x * x - 0.25 * std::pow(x, 4)); });
  EXPECT_LE(L1(g, mu.rho, exact), 1e-3);
}

TEST(DensityTest, SymmetricFieldGivesEvenDensity) {
  const Grid g = Line();
  const MeasureDensity mu = solve_scalar_invariant_density(Family(1.0, 1.0), g);
  const int n = g.node_count();
  double asym = 0.0;
  for (int i = 0; i < n; ++i) asym = std::max(asym, std::abs(mu.rho(i) - mu.rho(n - 1 - i)));
  EXPECT_LE(asym, 1e-8);
}

struct OracleCase {
  double gamma, beta;
  double (*density)(double);
};

class OracleTest : public ::testing::TestWithParam<OracleCase> {};

TEST_P(OracleTest, QuadratureMatchesClosedForm) {
  const Grid g = Line();
  const OracleCase c = GetParam();
  const MeasureDensity oracle = oracle_density_1d(Family(c.gamma, c.beta), g);
  const Vec exact = ClosedForm(g, c.density);
  EXPECT_LE((oracle.rho - exact).cwiseAbs().maxCoeff(), 1e-9);
  const MeasureDensity fd = solve_scalar_invariant_density(Family(c.gamma, c.beta), g);
  EXPECT_LE(l1_distance(fd, oracle), 1e-3);
}

INSTANTIATE_TEST_SUITE_P(
    Families, OracleTest,
    ::testing::Values(
        OracleCase{0.0, 0.0, [](double x) { return std::exp(-0.5 * x * x); }},
        OracleCase{0.0, 1.0,
                   [](double x) { return std::exp(-0.5 * x * x - 0.25 * std::pow(x, 4)); }},
        OracleCase{1.0, 1.0, [](double x) { return std::exp(-0.5 * x * x) / (1.0 + x * x); }}));

TEST(MeasureSystemTest, Masses) {
  const Grid g = Line(241);
  const MeasureDensity mu = solve_scalar_invariant_density(Family(0.0, 1.0), g);
  const Vec xi2 = Vec::Constant(2, 1.0 / std::sqrt(2.0));
  EXPECT_LT((build_measure_system(xi2, mu).masses() - xi2).norm(), 1e-12);
  EXPECT_LT((build_measure_system(xi2, mu, std::sqrt(2.0)).masses() - Vec::Ones(2)).norm(), 1e-12);
  const Vec xi3 = Vec::Constant(3, 1.0 / std::sqrt(3.0));
  EXPECT_LT((build_measure_system(xi3, mu).masses() - xi3).norm(), 1e-12);
  EXPECT_THROW(build_measure_system(Vec::Ones(2), mu, 0.0), InvalidArgument);
  EXPECT_THROW(build_measure_system((Vec(2) << 1.0, -1.0).finished(), mu), InvalidArgument);
}

TEST(FunctionalTest, Examples) {
  const Grid g = Line(241);
  const MeasureDensity mu = solve_scalar_invariant_density(Family(0.0, 1.0), g);
  const Vec xi = Vec::Constant(2, 1.0 / std::sqrt(2.0));
  const MeasureSystem sys = build_measure_system(xi, mu);
  EXPECT_NEAR(functional_Mf(GridFunction::constant(g, xi), sys), 1.0, 1e-12);
  EXPECT_NEAR(functional_Mf(GridFunction::constant(g, Vec::Unit(2, 0)), sys), xi(0), 1e-12);
  const GridFunction odd = GridFunction::sample(g, 2, [](const Point& x) {
    return Vec((Vec(2) << std::tanh(x(0)), std::pow(x(0), 3)).finished());
  });
  EXPECT_LE(std::abs(functional_Mf(odd, sys)), 1e-10);
}

TEST(FunctionalTest, LpNormOfConstant) {
  const Grid g = Line(241);
  const MeasureDensity mu = solve_scalar_invariant_density(Family(0.0, 1.0), g);
  const Vec xi = Vec::Constant(2, 1.0 / std::sqrt(2.0));
  const MeasureSystem sys = build_measure_system(xi, mu);
  // |(1,1)|_{p,mu}^p = sum_j xi_j.
  for (double p : {1.0, 2.0, 4.0})
    EXPECT_NEAR(lp_norm(GridFunction::constant(g, Vec::Ones(2)), sys, p),
                std::pow(xi.sum(), 1.0 / p), 1e-12);
}

TEST(BumpTest, DerivativesMatchFiniteDifferences) {
  BumpFunction psi{(Point(2) << 0.2, -0.1).finished(), 1.3, 2.0};
  const Point x = (Point(2) << 0.5, 0.3).finished();
  const double h = 1e-5;
  for (int k = 0; k < 2; ++k) {
    const Point e = Vec::Unit(2, k) * h;
    EXPECT_NEAR(psi.gradient(x)(k), (psi.value(x + e) - psi.value(x - e)) / (2 * h), 1e-8);
    const Vec dg = (psi.gradient(x + e) - psi.gradient(x - e)) / (2 * h);
    EXPECT_LT((psi.hessian(x).col(k) - dg).norm(), 1e-7);
  }
  EXPECT_EQ(psi.value((Point(2) << 2.0, 2.0).finished()), 0.0);
}

TEST(InfinitesimalInvarianceTest, OrnsteinUhlenbeck) {
  const CoefficientField ou = Family(0.0, 0.0);
  const std::vector<BumpFunction> tests{{Point::Zero(1), 1.5, 1.0},
                                        {Point::Constant(1, 0.8), 1.0, 1.0}};
  const MeasureDensity mu = solve_scalar_invariant_density(ou, Line());
  const PropertyReport rep = check_infinitesimal_invariance(ou, mu, tests);
  EXPECT_TRUE(rep.passed()) << rep.measured;

  const PropertyReport zero =
      check_infinitesimal_invariance(ou, mu, {BumpFunction{Point::Zero(1), 1.0, 0.0}});
  EXPECT_EQ(zero.measured, 0.0);
}

TEST(InfinitesimalInvarianceTest, RefinementOrder) {
  const CoefficientField f = Family(0.0, 1.0);
  const std::vector<BumpFunction> tests{{Point::Constant(1, 0.3), 2.5, 1.0}};
  std::vector<double> r;
  for (int n : {241, 481, 961}) {
    const MeasureDensity mu = solve_scalar_invariant_density(f, Line(n, 3.0));
    r.push_back(check_infinitesimal_invariance(f, mu, tests, 1.0).measured);
  }
  EXPECT_GE(std::log2(r[0] / r[1]), 1.8);
  EXPECT_GE(std::log2(r[1] / r[2]), 1.8);
}

}  // namespace
}  // namespace kolmo
