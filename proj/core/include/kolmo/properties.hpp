#pragma once

#include <vector>

#include "kolmo/coefficients.hpp"
#include "kolmo/invariant_measure.hpp"
#include "kolmo/numerics.hpp"
#include "kolmo/report.hpp"
#include "kolmo/semigroup.hpp"

namespace kolmo {

/// Tolerances of the property checks. Defaults follow the discretization
/// error budget at L = 6, h = 0.025, dt = 1e-3.
struct Tolerances {
  double dom = 1e-6;           // |T f|^p <= T |f|^p + dom
  double sup = 1e-6;           // |T f| <= |f|_inf + sup
  double pos_implicit = 1e-8;  // min >= -pos for theta = 1
  double pos_cn = 1e-4;        // min >= -pos for theta < 1 (flagged)
  double pos_floor = 1e-6;     // every component >= floor on the window at t = 1
  double inv = 1e-2;           // relative invariance residual
  double scalar_inv = 1e-3;    // |int T f dmu - int f dmu| / |f|_inf
  double fixed_point = 1e-8;   // |T(1) xi - xi|_inf
  double fp_gap = 0.1;         // |T(1) eta - eta|_inf >= gap
  double lp = 1e-6;
  double longtime = 1e-2;
  double plateau = 1e-3;  // plateau of <T f, xi> vs M_f
  double jitter = 1e-6;   // monotonicity slack of e(t)
  double slope_margin = 0.25;
  double product_ratio = 50.0;  // max / min of R(t) t^e
  double bounded_ratio = 10.0;  // max / min of R(t) when k = h
  double decay_factor = 0.05;   // h(t_final) <= factor * h(0.1)
  double integral_slack = 0.1;  // int h <= (1 + slack) |f|^2 / mu0
  double rate = 0.05;           // counterexample rate fits
};

/// Sup norm (sum_k sup |f_k|^2)^{1/2}, sups over all nodes.
double sup_norm(const GridFunction& f);

/// Domination |T f|^p <= T |f|^p at every stored (t, node) and contraction
/// |T f| <= |f|_inf. `scalar_abs_p` is the scalar run of |f|^p.
PropertyReport verify_semigroup_bounds(const Trajectory& vec, const Trajectory& scalar_abs_p,
                                       double p, const Tolerances& tol = {});

/// Nonnegativity of the whole trajectory, and strict positivity of every
/// component on [-R_obs, R_obs]^d at t = t_check when f does not vanish.
PropertyReport verify_positivity(const Trajectory& vec, double R_obs, double t_check = 1.0,
                                 const Tolerances& tol = {});

/// |int T(t) f dmu - int f dmu| <= scalar_inv |f|_inf for a scalar run.
PropertyReport verify_scalar_invariance(const Trajectory& scalar, const MeasureDensity& mu,
                                        const Tolerances& tol = {});

/// Relative residual of sum_i int (T(t) f)_i dmu_i = sum_i int f_i dmu_i,
/// scaled by sum_i int |f_i| dmu_i.
PropertyReport verify_invariance(const Trajectory& vec, const MeasureSystem& sys,
                                 const Tolerances& tol = {});

/// T(1) xi = xi, T(1) eta != eta for a constant eta orthogonal to xi, and
/// T(1) g != g for g(x) = sin(x_1) (1, ..., 1). Runs on the Neumann version
/// of `grid`, where constants are preserved by the stencil.
PropertyReport verify_fixed_points(const CoefficientField& field, const Grid& grid, const Vec& xi,
                                   double dt = kDefaultDt, double theta = kDefaultTheta,
                                   const Tolerances& tol = {});

struct RateOptions {
  double half_width = 1.5;
  int n_per_axis = 3001;
  BoundaryKind boundary = BoundaryKind::kNeumann;
  double R_obs = 0.5;
  double t_min = 1e-3;
  double t_max = 1e-1;
  int samples = 10;
  double theta = 1.0;
  double relative_dt = 0.01;
  double denominator_floor = 1e-14;
};

/// R(t) = sup_window |D^k T(t) f|^p / T(t) (sum_{j<=h} |D^j f|^2)^{p/2}.
struct RateFit {
  int k = 1;
  int h = 0;
  double p = 2.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::vector<double> times;
  std::vector<double> values;    // R(t)
  std::vector<double> products;  // R(t) t^{(k-h) p / 2}
  LineFit fit;                   // log R against log t
  double product_ratio = 0.0;    // max / min of products
  int excluded_nodes = 0;
  Witness witness;  // where R is largest
};

RateFit estimate_gradient_rate(const CoefficientField& field, const InitialDatum& f, double p,
                               int k, int h, const RateOptions& options = {});

/// Bound direction only: the product stays bounded and the slope is not
/// steeper than -(k - h) p / 2 - margin. For k = h only boundedness of R
/// (max / min within bounded_ratio) is asserted; the slope is reported.
PropertyReport gradient_rate_verdict(const RateFit& fit, const Tolerances& tol = {});

/// |T(t) f|_{p,mu} <= 2^{(p-1)/p} |f|_{p,mu} + lp at every stored t.
PropertyReport verify_lp_bound(const Trajectory& vec, const MeasureSystem& sys, double p,
                               const Tolerances& tol = {});

/// e(t) = sup_window |T(t) f - M_f xi| is non-increasing after t = 1 and
/// small at the final time; M_f is checked against the final <T f, xi> on
/// the window and the L2_mu distance to M_f xi is reported.
PropertyReport verify_longtime(const Trajectory& vec, const MeasureSystem& sys, double R_obs,
                               const Tolerances& tol = {});

/// h(t) = sum_j int |grad (T(t) f)_j|^2 dmu_j decays by `decay_factor`
/// between t = 0.1 and the final time, is non-increasing for t >= 1, and
/// its time integral is at most (1 + slack) |f|^2_{2,mu} / mu0.
PropertyReport verify_l2_gradient_decay(const Trajectory& vec, const MeasureSystem& sys, double mu0,
                                        const Tolerances& tol = {});

enum class CounterexampleKind { kGrowth, kDecay, kNeutral };

/// Constant-coupling runs: growth of a positive mass functional when
/// <C z, z> > 0 for some z, sup-norm decay when C is negative definite,
/// conservation along the left kernel otherwise. `expected_rate`, when
/// positive, is compared with the fitted rate within tol.rate.
PropertyReport counterexample_mode(const CoefficientField& field, const GridFunction& f,
                                   double t_final, double dt = kDefaultDt,
                                   double theta = kDefaultTheta, double expected_rate = 0.0,
                                   const Tolerances& tol = {});

CounterexampleKind classify_constant_coupling(const Mat& C);

/// e^{t C0} g approaches the spectral projection of g onto Ker C0 with rate
/// at least the spectral gap minus 0.05.
PropertyReport jordan_asymptotics_check(const Mat& C0, const Vec& g,
                                        const std::vector<double>& t_grid);

/// P_n f (time average) against R_n f (average of T(k) f, k < n) on the
/// window, and both against M_f xi.
PropertyReport verify_cesaro_consistency(const CoefficientField& field, const GridFunction& f,
                                         const MeasureSystem& sys, int n, double R_obs,
                                         double cesaro_tol = 1e-3, double limit_tol = 2e-2,
                                         const AverageOptions& options = {});

/// Squared Frobenius norm of the k-th derivative (k in {0, 1, 2}) of every
/// component at an interior node, by central differences.
double derivative_norm_sq(const GridFunction& u, int order, int node);

}  // namespace kolmo
