#pragma once

#include <vector>

#include "kolmo/coefficients.hpp"
#include "kolmo/grid.hpp"
#include "kolmo/hypotheses.hpp"
#include "kolmo/report.hpp"

namespace kolmo {

/// Nonnegative density of the scalar invariant measure on every node of a
/// grid, normalized so that the trapezoid integral is one.
struct MeasureDensity {
  Grid grid;
  Vec rho;
  Vec weights;
  double normalization_residual = 0.0;  // |sum w rho - 1|
  double clip_mass = 0.0;               // relative mass removed by clipping
  double kernel_residual = 0.0;         // |A* v| / |v| of the raw kernel vector

  /// Trapezoid integral of `values` (one per node) against rho dx.
  double integrate(const Vec& values) const;
};

/// Kernel of the zero-flux stationary Fokker-Planck operator (transpose of
/// the Neumann generator on the grid's node set) by inverse iteration at
/// shift 0. The kernel vector holds discrete masses; dividing by the
/// trapezoid weights gives the density, which is then clipped and
/// normalized. Throws NumericalError when the residual stagnates above
/// 1e-10 |rho| or the clipped mass exceeds 1e-6.
MeasureDensity solve_scalar_invariant_density(const CoefficientField& field, const Grid& grid);

/// rho = q^{-1} exp(int_0^x b / q) / Z in d = 1; the inner integral uses
/// adaptive Gauss-Kronrod quadrature (tolerance 1e-12), Z the trapezoid
/// rule on the grid.
MeasureDensity oracle_density_1d(const CoefficientField& field, const Grid& grid);

/// Trapezoid L1 distance between two densities on the same nodes.
double l1_distance(const MeasureDensity& a, const MeasureDensity& b);

/// mu_j = scale * xi_j * mu.
struct MeasureSystem {
  Vec xi;
  MeasureDensity mu;
  double scale = 1.0;

  /// mu_j(box) for every j.
  Vec masses() const;
  /// Nodal weights of mu_j: scale * xi_j * w * rho.
  Vec node_weights(int j) const;
};

MeasureSystem build_measure_system(const KernelVector& xi, const MeasureDensity& mu,
                                   double scale = 1.0);
MeasureSystem build_measure_system(const Vec& xi, const MeasureDensity& mu, double scale = 1.0);

/// M_f = sum_k int f_k d mu_k.
double functional_Mf(const GridFunction& f, const MeasureSystem& sys);

/// (sum_j int |f_j|^p d mu_j)^{1/p}.
double lp_norm(const GridFunction& f, const MeasureSystem& sys, double p);

/// Smooth bump amplitude * exp(1 - 1 / (1 - |x - c|^2 / r^2)) supported in
/// the ball B(c, r).
struct BumpFunction {
  Point center;
  double radius = 1.0;
  double amplitude = 1.0;

  double value(const Point& x) const;
  Vec gradient(const Point& x) const;
  Mat hessian(const Point& x) const;
};

/// max_psi |int A0 psi d mu| / |psi|_{C^2}, with A0 psi evaluated
/// analytically at the nodes and |psi|_{C^2} sampled on the grid.
PropertyReport check_infinitesimal_invariance(const CoefficientField& field,
                                              const MeasureDensity& mu,
                                              const std::vector<BumpFunction>& tests,
                                              double tol = 1e-4);

}  // namespace kolmo
