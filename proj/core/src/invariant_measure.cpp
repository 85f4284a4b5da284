#include "kolmo/invariant_measure.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "kolmo/discretization.hpp"
#include "kolmo/error.hpp"

namespace kolmo {

namespace {

constexpr double kKernelTol = 1e-10;
constexpr double kClipTol = 1e-6;
constexpr int kMaxInverseIterations = 50;

void require_same_nodes(const Grid& a, const Grid& b, const char* who) {
  if (!a.same_nodes(b)) throw InvalidArgument(std::string(who) + ": grid mismatch");
}

// Turns nodal masses into a normalized, clipped density.
MeasureDensity finish_density(const Grid& grid, Vec rho) {
  MeasureDensity out{grid, Vec(), grid.quadrature_weights()};
  if (rho.sum() < 0.0) rho = -rho;
  const double total = out.weights.dot(rho.cwiseAbs());
  if (!(total > 0.0)) throw NumericalError("invariant density: zero kernel vector");
  double negative = 0.0;
  for (Eigen::Index i = 0; i < rho.size(); ++i)
    if (rho(i) < 0.0) {
      negative += out.weights(i) * -rho(i);
      rho(i) = 0.0;
    }
  out.clip_mass = negative / total;
  rho /= out.weights.dot(rho);
  out.rho = std::move(rho);
  out.normalization_residual = std::abs(out.weights.dot(out.rho) - 1.0);
  return out;
}

}  // namespace

double MeasureDensity::integrate(const Vec& values) const {
  if (values.size() != rho.size())
    throw InvalidArgument("MeasureDensity::integrate: expected one value per node");
  return (weights.array() * rho.array() * values.array()).sum();
}

MeasureDensity solve_scalar_invariant_density(const CoefficientField& field, const Grid& grid) {
  const Grid nodes = grid.with_boundary(BoundaryKind::kNeumann);
  const DiscreteOperator adj = assemble_adjoint_operator(field, nodes);
  const SparseMat& A = adj.matrix;
  const int n = adj.unknowns();

  Eigen::SparseLU<SparseMat> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) {
    // Exactly singular pivot: a tiny shift keeps the iteration on the kernel.
    double scale = 0.0;
    for (int k = 0; k < A.outerSize(); ++k)
      for (SparseMat::InnerIterator it(A, k); it; ++it)
        scale = std::max(scale, std::abs(it.value()));
    SparseMat eye(n, n);
    eye.setIdentity();
    const SparseMat shifted = A - (1e-12 * scale) * eye;
    lu.analyzePattern(shifted);
    lu.factorize(shifted);
    if (lu.info() != Eigen::Success)
      throw NumericalError("solve_scalar_invariant_density: factorization failed");
  }

  Vec v = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  double residual = std::numeric_limits<double>::infinity();
  double previous = residual;
  for (int it = 0; it < kMaxInverseIterations; ++it) {
    v = lu.solve(v);
    if (!v.allFinite()) throw NumericalError("solve_scalar_invariant_density: non-finite iterate");
    v.normalize();
    residual = (A * v).norm();
    if (residual <= kKernelTol) break;
    if (it > 5 && residual > 0.5 * previous)
      throw NumericalError("solve_scalar_invariant_density: inverse iteration stagnated at " +
                           std::to_string(residual));
    previous = residual;
  }
  if (!(residual <= kKernelTol))
    throw NumericalError("solve_scalar_invariant_density: kernel residual " +
                         std::to_string(residual) + " above 1e-10");

  const Vec w = nodes.quadrature_weights();
  Vec rho = Vec::Zero(nodes.node_count());
  for (int k = 0; k < n; ++k) {
    const int node = nodes.unknown_node(k);
    rho(node) = v(k) / w(node);
  }
  MeasureDensity out = finish_density(grid, std::move(rho));
  out.kernel_residual = residual;
  if (out.clip_mass > kClipTol)
    throw NumericalError("solve_scalar_invariant_density: clipped mass " +
                         std::to_string(out.clip_mass) +
                         " above 1e-6 (grid too coarse or box too small)");
  return out;
}

MeasureDensity oracle_density_1d(const CoefficientField& field, const Grid& grid) {
  if (field.dim_d() != 1 || grid.dim() != 1)
    throw InvalidArgument("oracle_density_1d: only d = 1 is supported");
  auto q = [&](double s) { return field.Q(Point::Constant(1, s))(0, 0); };
  auto ratio = [&](double s) {
    const double qs = q(s);
    if (!(qs > 0.0)) throw InvalidArgument("oracle_density_1d: q vanishes");
    return field.b(Point::Constant(1, s))(0) / qs;
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const int n = grid.n_per_axis();
  const int mid = (n - 1) / 2;
  Vec potential = Vec::Zero(n);
  for (int i = mid + 1; i < n; ++i)
    potential(i) = potential(i - 1) +
                   Quad::integrate(ratio, grid.axis_coord(i - 1), grid.axis_coord(i), 15, 1e-12);
  for (int i = mid - 1; i >= 0; --i)
    potential(i) = potential(i + 1) -
                   Quad::integrate(ratio, grid.axis_coord(i), grid.axis_coord(i + 1), 15, 1e-12);
  Vec rho(n);
  for (int i = 0; i < n; ++i) {
    const double qi = q(grid.axis_coord(i));
    if (!(qi > 0.0)) throw InvalidArgument("oracle_density_1d: q vanishes");
    rho(i) = std::exp(potential(i)) / qi;
  }
  return finish_density(grid, std::move(rho));
}

double l1_distance(const MeasureDensity& a, const MeasureDensity& b) {
  require_same_nodes(a.grid, b.grid, "l1_distance");
  return a.weights.dot((a.rho - b.rho).cwiseAbs());
}

Vec MeasureSystem::masses() const {
  const double total = mu.weights.dot(mu.rho);
  return scale * total * xi;
}

Vec MeasureSystem::node_weights(int j) const {
  return scale * xi(j) * mu.weights.cwiseProduct(mu.rho);
}

MeasureSystem build_measure_system(const Vec& xi, const MeasureDensity& mu, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("build_measure_system: scale must be positive");
  if (xi.size() == 0 || xi.minCoeff() <= 0.0)
    throw InvalidArgument("build_measure_system: xi must have positive entries");
  return MeasureSystem{xi, mu, scale};
}

MeasureSystem build_measure_system(const KernelVector& xi, const MeasureDensity& mu, double scale) {
  return build_measure_system(xi.xi, mu, scale);
}

double functional_Mf(const GridFunction& f, const MeasureSystem& sys) {
  require_same_nodes(f.grid(), sys.mu.grid, "functional_Mf");
  if (f.components() != sys.xi.size())
    throw InvalidArgument("functional_Mf: component count differs from xi");
  double acc = 0.0;
  for (int k = 0; k < f.components(); ++k)
    acc += sys.node_weights(k).dot(f.values().row(k).transpose());
  return acc;
}

double lp_norm(const GridFunction& f, const MeasureSystem& sys, double p) {
  require_same_nodes(f.grid(), sys.mu.grid, "lp_norm");
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  double acc = 0.0;
  for (int k = 0; k < f.components(); ++k)
    acc +=
        sys.node_weights(k).dot(f.values().row(k).transpose().cwiseAbs().array().pow(p).matrix());
  return std::pow(acc, 1.0 / p);
}

double BumpFunction::value(const Point& x) const {
  const double s = (x - center).squaredNorm() / (radius * radius);
  if (s >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - s));
}

Vec BumpFunction::gradient(const Point& x) const {
  const Vec y = x - center;
  const double r2 = radius * radius;
  const double s = y.squaredNorm() / r2;
  if (s >= 1.0) return Vec::Zero(x.size());
  const double g1 = -value(x) / ((1.0 - s) * (1.0 - s));
  return g1 * 2.0 / r2 * y;
}

Mat BumpFunction::hessian(const Point& x) const {
  const Vec y = x - center;
  const int d = static_cast<int>(x.size());
  const double r2 = radius * radius;
  const double s = y.squaredNorm() / r2;
  if (s >= 1.0) return Mat::Zero(d, d);
  const double g = value(x);
  const double g1 = -g / std::pow(1.0 - s, 2);
  const double g2 = g * (2.0 * s - 1.0) / std::pow(1.0 - s, 4);
  return g2 * 4.0 / (r2 * r2) * (y * y.transpose()) + g1 * 2.0 / r2 * Mat::Identity(d, d);
}

PropertyReport check_infinitesimal_invariance(const CoefficientField& field,
                                              const MeasureDensity& mu,
                                              const std::vector<BumpFunction>& tests, double tol) {
  const Grid& g = mu.grid;
  if (field.dim_d() != g.dim())
    throw InvalidArgument("check_infinitesimal_invariance: dimension mismatch");
  double worst = 0.0;
  Witness wit{Point::Zero(g.dim()), 0.0, 0.0, -1, "no test functions"};
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const BumpFunction& psi = tests[t];
    if (psi.center.size() != g.dim() || !(psi.radius > 0.0))
      throw InvalidArgument("check_infinitesimal_invariance: malformed test function");
    for (int k = 0; k < g.dim(); ++k)
      if (std::abs(psi.center(k)) + psi.radius > g.half_width())
        throw InvalidArgument("check_infinitesimal_invariance: support leaves the box");
    Vec a_psi(g.node_count());
    double sup0 = 0.0, sup1 = 0.0, sup2 = 0.0;
    for (int i = 0; i < g.node_count(); ++i) {
      const Point x = g.node(i);
      const Vec grad = psi.gradient(x);
      const Mat hess = psi.hessian(x);
      const CoefficientValues v = field.evaluate(x);
      a_psi(i) = (v.Q * hess).trace() + v.b.dot(grad);
      sup0 = std::max(sup0, std::abs(psi.value(x)));
      sup1 = std::max(sup1, grad.norm());
      sup2 = std::max(sup2, hess.norm());
    }
    const double c2 = sup0 + sup1 + sup2;
    const double residual = c2 > 0.0 ? std::abs(mu.integrate(a_psi)) / c2 : 0.0;
    if (t == 0 || residual > worst) {
      worst = residual;
      wit = Witness{psi.center, residual, 0.0, -1, "bump " + std::to_string(t)};
    }
  }
  PropertyReport rep = make_report("infinitesimal_invariance", worst <= tol, worst, tol, tol, wit);
  rep.metadata["tests"] = std::to_string(tests.size());
  return rep;
}

}  // namespace kolmo
