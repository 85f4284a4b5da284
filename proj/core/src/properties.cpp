#include "kolmo/properties.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kolmo/discretization.hpp"
#include "kolmo/error.hpp"

namespace kolmo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_matching_times(const Trajectory& a, const Trajectory& b, const char* who) {
  if (a.size() != b.size()) throw InvalidArgument(std::string(who) + ": time grids differ");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, a.times[i]))
      throw InvalidArgument(std::string(who) + ": time grids differ");
}

Witness node_witness(const Grid& g, int node, double value, double t, std::string detail = "") {
  return Witness{g.node(node), value, t, node, std::move(detail)};
}

// Second-order difference of component j along axes (a, b) at node (i, jj).
double second_difference(const GridFunction& u, int comp, const std::array<int, 2>& mi, int a,
                         int b) {
  const Grid& g = u.grid();
  const double h = g.spacing();
  auto at = [&](int di, int dj) {
    return u.values()(comp, g.flat_index(mi[0] + di, g.dim() == 2 ? mi[1] + dj : 0));
  };
  auto offset = [](int axis, int s) {
    return std::array<int, 2>{axis == 0 ? s : 0, axis == 1 ? s : 0};
  };
  if (a == b) {
    const auto p = offset(a, 1);
    const auto m = offset(a, -1);
    return (at(p[0], p[1]) - 2.0 * at(0, 0) + at(m[0], m[1])) / (h * h);
  }
  return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
}

double component_derivative_sq(const GridFunction& u, int comp, int order, int node) {
  const Grid& g = u.grid();
  const auto mi = g.multi_index(node);
  const int n = g.n_per_axis();
  for (int a = 0; a < g.dim(); ++a)
    if (order > 0 && (mi[a] == 0 || mi[a] == n - 1))
      throw InvalidArgument("derivative_norm_sq: node on the grid boundary");
  const double v0 = u.values()(comp, node);
  if (order == 0) return v0 * v0;
  double acc = 0.0;
  if (order == 1) {
    for (int a = 0; a < g.dim(); ++a) {
      const int ip = g.flat_index(mi[0] + (a == 0), g.dim() == 2 ? mi[1] + (a == 1) : 0);
      const int im = g.flat_index(mi[0] - (a == 0), g.dim() == 2 ? mi[1] - (a == 1) : 0);
      const double d = (u.values()(comp, ip) - u.values()(comp, im)) / (2.0 * g.spacing());
      acc += d * d;
    }
    return acc;
  }
  for (int a = 0; a < g.dim(); ++a)
    for (int b = 0; b < g.dim(); ++b) {
      const double d = second_difference(u, comp, mi, a, b);
      acc += d * d;
    }
  return acc;
}

// Same quantity for a function given pointwise, with step h.
double datum_derivative_sq(const InitialDatum& f, const Point& x, int order, double h) {
  const Vec f0 = f(x);
  if (order == 0) return f0.squaredNorm();
  const int d = static_cast<int>(x.size());
  auto e = [&](int a) {
    Point v = Point::Zero(d);
    v(a) = h;
    return v;
  };
  double acc = 0.0;
  for (int a = 0; a < d; ++a) {
    if (order == 1) {
      acc += ((f(x + e(a)) - f(x - e(a))) / (2.0 * h)).squaredNorm();
      continue;
    }
    for (int b = 0; b < d; ++b) {
      Vec v;
      if (a == b)
        v = (f(x + e(a)) - 2.0 * f0 + f(x - e(a))) / (h * h);
      else
        v = (f(x + e(a) + e(b)) - f(x + e(a) - e(b)) - f(x - e(a) + e(b)) + f(x - e(a) - e(b))) /
            (4.0 * h * h);
      acc += v.squaredNorm();
    }
  }
  return acc;
}

double window_sup_distance(const GridFunction& a, const GridFunction& b, double R_obs,
                           int* where = nullptr) {
  double worst = 0.0;
  for (int node : a.grid().window_nodes(R_obs)) {
    const double d = (a.values().col(node) - b.values().col(node)).norm();
    if (d >= worst) {
      worst = d;
      if (where) *where = node;
    }
  }
  return worst;
}

bool is_implicit(double theta) { return theta >= 1.0 - 1e-12; }

}  // namespace

double sup_norm(const GridFunction& f) { return f.values().cwiseAbs().rowwise().maxCoeff().norm(); }

double derivative_norm_sq(const GridFunction& u, int order, int node) {
  if (order < 0 || order > 2) throw InvalidArgument("derivative_norm_sq: order must be 0, 1 or 2");
  double acc = 0.0;
  for (int c = 0; c < u.components(); ++c) acc += component_derivative_sq(u, c, order, node);
  return acc;
}

PropertyReport verify_semigroup_bounds(const Trajectory& vec, const Trajectory& scalar_abs_p,
                                       double p, const Tolerances& tol) {
  if (!(p > 1.0)) throw InvalidArgument("verify_semigroup_bounds: p must exceed 1");
  require_matching_times(vec, scalar_abs_p, "verify_semigroup_bounds");
  if (scalar_abs_p.components() != 1 || !vec.grid().same_nodes(scalar_abs_p.grid()))
    throw InvalidArgument("verify_semigroup_bounds: scalar run must share the grid");
  const double fnorm = sup_norm(vec.snapshots.front());
  const Grid& g = vec.grid();
  double dom = -kInf, sup = -kInf;
  Witness dom_w, sup_w;
  for (std::size_t s = 0; s < vec.size(); ++s) {
    const Mat& u = vec.snapshots[s].values();
    const Mat& v = scalar_abs_p.snapshots[s].values();
    for (int i = 0; i < g.node_count(); ++i) {
      const double mag = u.col(i).norm();
      const double excess = std::pow(mag, p) - v(0, i);
      if (excess > dom) {
        dom = excess;
        dom_w = node_witness(g, i, excess, vec.times[s], "|T f|^p - T|f|^p");
      }
      if (mag - fnorm > sup) {
        sup = mag - fnorm;
        sup_w = node_witness(g, i, sup, vec.times[s], "|T f| - |f|_inf");
      }
    }
  }
  const bool dom_ok = dom <= tol.dom;
  const bool sup_ok = sup <= tol.sup;
  PropertyReport rep = make_report("semigroup_bounds", dom_ok && sup_ok, dom, 0.0, tol.dom,
                                   dom_ok && !sup_ok ? sup_w : dom_w);
  rep.metadata["p"] = format_double(p);
  rep.metadata["contraction_excess"] = format_double(sup);
  rep.metadata["sup_tol"] = format_double(tol.sup);
  return rep;
}

PropertyReport verify_positivity(const Trajectory& vec, double R_obs, double t_check,
                                 const Tolerances& tol) {
  const Grid& g = vec.grid();
  const double pos_tol = is_implicit(vec.theta) ? tol.pos_implicit : tol.pos_cn;
  double min_all = kInf;
  Witness min_w;
  for (std::size_t s = 0; s < vec.size(); ++s) {
    const Mat& u = vec.snapshots[s].values();
    for (int i = 0; i < g.node_count(); ++i)
      for (int c = 0; c < u.rows(); ++c)
        if (u(c, i) < min_all) {
          min_all = u(c, i);
          min_w = node_witness(g, i, u(c, i), vec.times[s], "component " + std::to_string(c + 1));
        }
  }
  const bool nonneg = min_all >= -pos_tol;

  bool strict_ok = true;
  double min_window = kInf;
  Witness win_w;
  const bool nonzero = vec.snapshots.front().values().cwiseAbs().maxCoeff() > 0.0;
  if (nonzero) {
    const auto idx = vec.find_time(t_check);
    if (!idx) throw InvalidArgument("verify_positivity: t_check is not a stored time");
    const Mat& u = vec.snapshots[*idx].values();
    for (int i : g.window_nodes(R_obs))
      for (int c = 0; c < u.rows(); ++c)
        if (u(c, i) < min_window) {
          min_window = u(c, i);
          win_w = node_witness(g, i, u(c, i), t_check, "component " + std::to_string(c + 1));
        }
    strict_ok = min_window >= tol.pos_floor;
  }
  PropertyReport rep = make_report("positivity", nonneg && strict_ok, min_all, 0.0, pos_tol,
                                   nonneg ? (strict_ok ? min_w : win_w) : min_w);
  rep.metadata["window_min"] = format_double(nonzero ? min_window : 0.0);
  rep.metadata["pos_floor"] = format_double(tol.pos_floor);
  if (!is_implicit(vec.theta))
    rep.notes.push_back("theta < 1: Crank-Nicolson may undershoot; loose tolerance used");
  return rep;
}

PropertyReport verify_scalar_invariance(const Trajectory& scalar, const MeasureDensity& mu,
                                        const Tolerances& tol) {
  if (scalar.components() != 1 || !scalar.grid().same_nodes(mu.grid))
    throw InvalidArgument("verify_scalar_invariance: need a scalar run on the density grid");
  const Vec f0 = scalar.snapshots.front().values().row(0).transpose();
  const double i0 = mu.integrate(f0);
  const double fnorm = std::max(f0.cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  Witness w{Point::Zero(mu.grid.dim()), 0.0, 0.0, -1, "int T(t) f dmu - int f dmu"};
  for (std::size_t s = 1; s < scalar.size(); ++s) {
    const double r =
        std::abs(mu.integrate(scalar.snapshots[s].values().row(0).transpose()) - i0) / fnorm;
    if (r >= worst) {
      worst = r;
      w.value = r;
      w.t = scalar.times[s];
    }
  }
  PropertyReport rep = make_report("scalar_invariance", worst <= tol.scalar_inv, worst,
                                   tol.scalar_inv, tol.scalar_inv, w);
  rep.metadata["integral_f"] = format_double(i0);
  return rep;
}

PropertyReport verify_invariance(const Trajectory& vec, const MeasureSystem& sys,
                                 const Tolerances& tol) {
  const GridFunction& f = vec.snapshots.front();
  const double m0 = functional_Mf(f, sys);
  GridFunction absf(f.grid(), f.values().cwiseAbs());
  const double scale = functional_Mf(absf, sys);
  double worst = 0.0;
  Witness w{Point::Zero(f.grid().dim()), 0.0, 0.0, -1, "relative invariance residual"};
  for (std::size_t s = 1; s < vec.size(); ++s) {
    const double diff = std::abs(functional_Mf(vec.snapshots[s], sys) - m0);
    const double r = scale > 0.0 ? diff / scale : diff;
    if (r >= worst) {
      worst = r;
      w.value = r;
      w.t = vec.times[s];
    }
  }
  PropertyReport rep =
      make_report("system_invariance", worst <= tol.inv, worst, tol.inv, tol.inv, w);
  rep.metadata["M_f"] = format_double(m0);
  rep.metadata["scale"] = format_double(sys.scale);
  return rep;
}

PropertyReport verify_fixed_points(const CoefficientField& field, const Grid& grid, const Vec& xi,
                                   double dt, double theta, const Tolerances& tol) {
  const int m = field.dim_m();
  if (xi.size() != m) throw InvalidArgument("verify_fixed_points: xi has the wrong size");
  const Grid g = grid.with_boundary(BoundaryKind::kNeumann);
  const DiscreteOperator op = assemble_system_operator(field, g);

  Eigen::Index k = 0;
  xi.cwiseAbs().minCoeff(&k);
  Vec eta = Vec::Unit(m, k) - xi(k) / xi.squaredNorm() * xi;
  eta.normalize();

  auto gap_after_one = [&](const GridFunction& f0, int* where) {
    const Trajectory tr = evolve(op, f0, 1.0, dt, theta);
    const Mat diff = tr.snapshots.back().values() - f0.values();
    Eigen::Index r = 0, c = 0;
    const double v = diff.cwiseAbs().maxCoeff(&r, &c);
    *where = static_cast<int>(c);
    return v;
  };
  int n_xi = 0, n_eta = 0, n_sin = 0;
  const double err_xi = gap_after_one(GridFunction::constant(g, xi), &n_xi);
  const double gap_eta = gap_after_one(GridFunction::constant(g, eta), &n_eta);
  const GridFunction wave =
      GridFunction::sample(g, m, [m](const Point& x) { return Vec::Constant(m, std::sin(x(0))); });
  const double gap_sin = gap_after_one(wave, &n_sin);

  const bool xi_ok = err_xi <= tol.fixed_point;
  const bool eta_ok = gap_eta >= tol.fp_gap;
  const bool sin_ok = gap_sin >= tol.fp_gap;
  Witness w = node_witness(g, n_xi, err_xi, 1.0, "|T(1) xi - xi|");
  if (xi_ok && !eta_ok) w = node_witness(g, n_eta, gap_eta, 1.0, "eta nearly fixed");
  if (xi_ok && eta_ok && !sin_ok) w = node_witness(g, n_sin, gap_sin, 1.0, "sin data nearly fixed");
  PropertyReport rep = make_report("fixed_points", xi_ok && eta_ok && sin_ok, err_xi,
                                   tol.fixed_point, tol.fixed_point, w);
  rep.metadata["eta_gap"] = format_double(gap_eta);
  rep.metadata["nonconstant_gap"] = format_double(gap_sin);
  rep.metadata["fp_gap"] = format_double(tol.fp_gap);
  return rep;
}

RateFit estimate_gradient_rate(const CoefficientField& field, const InitialDatum& f, double p,
                               int k, int h, const RateOptions& opt) {
  if (k != 1 && k != 2) throw InvalidArgument("estimate_gradient_rate: k must be 1 or 2");
  if (h < 0 || h > k) throw InvalidArgument("estimate_gradient_rate: need 0 <= h <= k");
  if (!(p > 1.0)) throw InvalidArgument("estimate_gradient_rate: p must exceed 1");
  if (opt.samples < 8) throw InvalidArgument("estimate_gradient_rate: need >= 8 samples");
  if (!(opt.R_obs < opt.half_width))
    throw InvalidArgument("estimate_gradient_rate: window must lie inside the box");

  const Grid g = build_grid(field.dim_d(), opt.half_width, opt.n_per_axis, opt.boundary);
  const double dx = g.spacing();
  const GridFunction f0 = GridFunction::sample(g, field.dim_m(), f);
  const GridFunction g0 = GridFunction::sample(g, 1, [&](const Point& x) {
    double acc = 0.0;
    for (int j = 0; j <= h; ++j) acc += datum_derivative_sq(f, x, j, dx);
    return Vec::Constant(1, std::pow(acc, 0.5 * p));
  });

  const std::vector<double> times = geometric_grid(opt.t_min, opt.t_max, opt.samples);
  const Trajectory u = evolve_at(assemble_system_operator(field, g), f0, times, opt.t_max,
                                 opt.theta, opt.relative_dt);
  const Trajectory den = evolve_at(assemble_scalar_operator(field, g), g0, times, opt.t_max,
                                   opt.theta, opt.relative_dt);

  RateFit fit;
  fit.k = k;
  fit.h = h;
  fit.p = p;
  fit.t_min = opt.t_min;
  fit.t_max = opt.t_max;
  const double expo = 0.5 * (k - h) * p;
  const auto window = g.window_nodes(opt.R_obs);
  double best = -kInf;
  std::vector<double> logt, logr;
  for (std::size_t s = 1; s < u.size(); ++s) {
    double r = 0.0;
    for (int node : window) {
      const double d = den.snapshots[s].values()(0, node);
      if (d < opt.denominator_floor) {
        ++fit.excluded_nodes;
        continue;
      }
      const double num = std::pow(derivative_norm_sq(u.snapshots[s], k, node), 0.5 * p);
      const double q = num / d;
      if (q > r) r = q;
      if (q > best) {
        best = q;
        fit.witness = node_witness(g, node, q, u.times[s], "R(t) attained");
      }
    }
    const double t = u.times[s];
    fit.times.push_back(t);
    fit.values.push_back(r);
    fit.products.push_back(r * std::pow(t, expo));
    if (r > 0.0) {
      logt.push_back(std::log(t));
      logr.push_back(std::log(r));
    }
  }
  if (logt.size() >= 2) fit.fit = fit_line(logt, logr);
  const auto [lo, hi] = std::minmax_element(fit.products.begin(), fit.products.end());
  fit.product_ratio = *lo > 0.0 ? *hi / *lo : kInf;
  return fit;
}

PropertyReport gradient_rate_verdict(const RateFit& fit, const Tolerances& tol) {
  const double expo = 0.5 * (fit.k - fit.h) * fit.p;
  const double slope_bound = -expo - tol.slope_margin;
  // For k = h the estimate only says R stays bounded near 0; a negative
  // slope there is smoothing at larger t, not blow-up.
  const bool slope_ok = fit.k == fit.h || fit.fit.slope >= slope_bound;
  const double ratio_bound = fit.k > fit.h ? tol.product_ratio : tol.bounded_ratio;
  const bool ratio_ok = fit.product_ratio <= ratio_bound;
  PropertyReport rep =
      make_report("gradient_rate_k" + std::to_string(fit.k) + "_h" + std::to_string(fit.h),
                  slope_ok && ratio_ok, fit.fit.slope, slope_bound, tol.slope_margin, fit.witness);
  rep.metadata["p"] = format_double(fit.p);
  rep.metadata["product_ratio"] = format_double(fit.product_ratio);
  rep.metadata["ratio_bound"] = format_double(ratio_bound);
  rep.metadata["fit_residual"] = format_double(fit.fit.residual);
  rep.metadata["excluded_nodes"] = std::to_string(fit.excluded_nodes);
  rep.metadata["t_window"] = format_double(fit.t_min) + ":" + format_double(fit.t_max);
  // Sharpness of the exponent is informational only.
  rep.notes.push_back("slope - exponent = " + format_double(fit.fit.slope + expo));
  return rep;
}

PropertyReport verify_lp_bound(const Trajectory& vec, const MeasureSystem& sys, double p,
                               const Tolerances& tol) {
  const double n0 = lp_norm(vec.snapshots.front(), sys, p);
  const double factor = std::pow(2.0, (p - 1.0) / p);
  double worst = -kInf, worst_norm = 0.0;
  Witness w{Point::Zero(vec.grid().dim()), 0.0, 0.0, -1, "|T(t) f|_{p,mu}"};
  for (std::size_t s = 0; s < vec.size(); ++s) {
    const double n = lp_norm(vec.snapshots[s], sys, p);
    if (n - factor * n0 > worst) {
      worst = n - factor * n0;
      worst_norm = n;
      w.value = n;
      w.t = vec.times[s];
    }
  }
  PropertyReport rep = make_report("lp_bound_p" + format_double(p), worst <= tol.lp, worst_norm,
                                   factor * n0, tol.lp, w);
  rep.metadata["norm_f"] = format_double(n0);
  rep.metadata["factor"] = format_double(factor);
  return rep;
}

PropertyReport verify_longtime(const Trajectory& vec, const MeasureSystem& sys, double R_obs,
                               const Tolerances& tol) {
  const GridFunction& f = vec.snapshots.front();
  const double mf = functional_Mf(f, sys);
  const GridFunction target = GridFunction::constant(f.grid(), mf * sys.xi);
  std::vector<double> e(vec.size());
  int last_node = 0;
  for (std::size_t s = 0; s < vec.size(); ++s)
    e[s] = window_sup_distance(vec.snapshots[s], target, R_obs, &last_node);

  bool monotone = true;
  Witness mono_w;
  for (std::size_t s = 1; s < vec.size(); ++s)
    if (vec.times[s - 1] >= 1.0 && e[s] > e[s - 1] + tol.jitter && monotone) {
      monotone = false;
      mono_w =
          Witness{Point::Zero(f.grid().dim()), e[s] - e[s - 1], vec.times[s], -1, "e(t) increased"};
    }
  const GridFunction& last = vec.snapshots.back();
  double plateau = 0.0;
  for (int node : f.grid().window_nodes(R_obs))
    plateau = std::max(plateau, std::abs(last.values().col(node).dot(sys.xi) - mf));
  const GridFunction diff(f.grid(), last.values() - target.values());
  const double l2 = lp_norm(diff, sys, 2.0);

  const double e_final = e.back();
  const bool ok =
      monotone && e_final <= tol.longtime && plateau <= tol.plateau && l2 <= tol.longtime;
  Witness w = node_witness(f.grid(), last_node, e_final, vec.times.back(), "|T f - M_f xi|");
  if (!monotone && e_final <= tol.longtime) w = mono_w;
  PropertyReport rep = make_report("longtime", ok, e_final, tol.longtime, tol.longtime, w);
  rep.metadata["M_f"] = format_double(mf);
  rep.metadata["plateau_gap"] = format_double(plateau);
  rep.metadata["l2_distance"] = format_double(l2);
  rep.metadata["monotone_after_1"] = monotone ? "true" : "false";
  return rep;
}

PropertyReport verify_l2_gradient_decay(const Trajectory& vec, const MeasureSystem& sys, double mu0,
                                        const Tolerances& tol) {
  if (!(mu0 > 0.0)) throw InvalidArgument("verify_l2_gradient_decay: mu0 must be positive");
  const Grid& g = vec.grid();
  std::vector<int> interior;
  for (int i = 0; i < g.node_count(); ++i)
    if (!g.is_boundary(i)) interior.push_back(i);
  std::vector<Vec> weights;
  for (int j = 0; j < vec.components(); ++j) weights.push_back(sys.node_weights(j));

  std::vector<double> hs(vec.size());
  for (std::size_t s = 0; s < vec.size(); ++s) {
    double acc = 0.0;
    for (int j = 0; j < vec.components(); ++j)
      for (int i : interior)
        acc += weights[j](i) * component_derivative_sq(vec.snapshots[s], j, 1, i);
    hs[s] = acc;
  }
  const auto i01 = vec.find_time(0.1);
  if (!i01) throw InvalidArgument("verify_l2_gradient_decay: t = 0.1 is not a stored time");
  const double h01 = hs[*i01];
  const double hfin = hs.back();
  const bool decay_ok = hfin <= tol.decay_factor * h01;

  bool monotone = true;
  double t_bad = 0.0;
  for (std::size_t s = 1; s < vec.size(); ++s)
    if (vec.times[s - 1] >= 1.0 && hs[s] > hs[s - 1] + 1e-8 && monotone) {
      monotone = false;
      t_bad = vec.times[s];
    }
  const double integral = trapezoid(vec.times, hs);
  const double norm2 = lp_norm(vec.snapshots.front(), sys, 2.0);
  const double bound = (1.0 + tol.integral_slack) * norm2 * norm2 / mu0;
  const bool integral_ok = integral <= bound;

  Witness w{Point::Zero(g.dim()), hfin, vec.times.back(), -1, "h(t_final)"};
  if (!monotone) w = Witness{Point::Zero(g.dim()), 0.0, t_bad, -1, "h increased"};
  PropertyReport rep =
      make_report("l2_gradient_decay", decay_ok && monotone && integral_ok,
                  hfin / std::max(h01, 1e-300), tol.decay_factor, tol.decay_factor, w);
  rep.metadata["h_0.1"] = format_double(h01);
  rep.metadata["h_final"] = format_double(hfin);
  rep.metadata["time_integral"] = format_double(integral);
  rep.metadata["integral_bound"] = format_double(bound);
  rep.metadata["monotone_after_1"] = monotone ? "true" : "false";
  return rep;
}

CounterexampleKind classify_constant_coupling(const Mat& C) {
  const Mat sym = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  const double tol = 1e-12 * std::max(1.0, C.norm());
  if (es.eigenvalues().maxCoeff() > tol) return CounterexampleKind::kGrowth;
  if (es.eigenvalues().maxCoeff() < -tol) return CounterexampleKind::kDecay;
  return CounterexampleKind::kNeutral;
}

PropertyReport counterexample_mode(const CoefficientField& field, const GridFunction& f,
                                   double t_final, double dt, double theta, double expected_rate,
                                   const Tolerances& tol) {
  const int d = field.dim_d();
  const Mat C = field.C(Point::Zero(d));
  for (double r : {0.5, 1.0, 3.0})
    for (int a = 0; a < d; ++a)
      for (double s : {-1.0, 1.0}) {
        Point x = Point::Zero(d);
        x(a) = s * r;
        if ((field.C(x) - C).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, C.norm()))
          throw InvalidArgument("counterexample_mode: C is not constant");
      }
  const Grid g = f.grid().with_boundary(BoundaryKind::kNeumann);
  const GridFunction f0(g, f.values());
  const Trajectory tr = evolve(assemble_system_operator(field, g), f0, t_final, dt, theta);
  const Vec w = g.quadrature_weights();
  const double volume = w.sum();
  const int m = field.dim_m();
  auto mass = [&](const GridFunction& u, const Vec& along) {
    return (along.transpose() * u.values() * w)(0) / volume;
  };

  const CounterexampleKind kind = classify_constant_coupling(C);
  std::vector<double> ts, ys;
  PropertyReport rep;
  if (kind == CounterexampleKind::kNeutral) {
    Eigen::JacobiSVD<Mat> svd(C.transpose(), Eigen::ComputeFullV);
    const Vec left = svd.matrixV().col(m - 1);
    const double m0 = mass(f0, left);
    double drift = 0.0;
    double t_w = 0.0;
    for (std::size_t s = 0; s < tr.size(); ++s) {
      const double dm = std::abs(mass(tr.snapshots[s], left) - m0);
      if (dm >= drift) {
        drift = dm;
        t_w = tr.times[s];
      }
    }
    const double bound = 1e-6 * std::max(1.0, std::abs(m0));
    rep = make_report("counterexample_neutral", drift <= bound, drift, bound, 1e-6,
                      Witness{Point::Zero(d), drift, t_w, -1, "mass along the left kernel"});
    rep.metadata["mode"] = "neutral";
    return rep;
  }

  const Vec ones = Vec::Ones(m) / std::sqrt(static_cast<double>(m));
  for (std::size_t s = 0; s < tr.size(); ++s) {
    const double y = kind == CounterexampleKind::kGrowth ? mass(tr.snapshots[s], ones)
                                                         : sup_norm(tr.snapshots[s]);
    if (!(y > 0.0))
      throw InvalidArgument("counterexample_mode: monitored quantity must stay positive");
    ts.push_back(tr.times[s]);
    ys.push_back(std::log(y));
  }
  const LineFit lf = fit_line(ts, ys);
  const double y0 = std::exp(ys.front());
  bool ok = true;
  double rate = 0.0;
  Witness wit{Point::Zero(d), 0.0, tr.times.back(), -1, ""};
  if (kind == CounterexampleKind::kGrowth) {
    rate = lf.slope;
    const double factor = std::exp(ys.back()) / y0;
    ok = rate > 0.0 && factor >= std::exp(rate * t_final) / 2.0;
    wit.value = factor;
    wit.detail = "growth factor of the mass functional";
    rep.metadata["mode"] = "growth";
  } else {
    rate = -lf.slope;
    ok = rate > 0.0;
    for (std::size_t s = 0; s < ts.size(); ++s)
      if (std::exp(ys[s]) > std::exp(-rate * ts[s]) * y0 * 1.1) {
        ok = false;
        wit.t = ts[s];
      }
    wit.value = std::exp(ys.back());
    wit.detail = "sup norm of T(t) f";
    rep.metadata["mode"] = "decay";
  }
  const bool rate_ok = !(expected_rate > 0.0) || std::abs(rate - expected_rate) <= tol.rate;
  const std::string mode = rep.metadata["mode"];
  rep = make_report("counterexample_" + mode, ok && rate_ok, rate,
                    expected_rate > 0.0 ? expected_rate : 0.0, tol.rate, wit);
  rep.metadata["mode"] = mode;
  rep.metadata["fit_residual"] = format_double(lf.residual);
  return rep;
}

PropertyReport jordan_asymptotics_check(const Mat& C0, const Vec& g,
                                        const std::vector<double>& t_grid) {
  const int m = static_cast<int>(C0.rows());
  if (C0.cols() != m || g.size() != m)
    throw InvalidArgument("jordan_asymptotics_check: shape mismatch");
  const double tol = 1e-10 * std::max(1.0, C0.norm());
  Eigen::EigenSolver<Mat> es(C0, false);
  if (es.info() != Eigen::Success)
    throw NumericalError("jordan_asymptotics_check: eigensolver failed");
  double gap = kInf;
  int zeros = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto lam = es.eigenvalues()(i);
    if (lam.real() > tol)
      throw InvalidArgument("jordan_asymptotics_check: eigenvalue with positive real part");
    if (std::abs(lam) <= tol)
      ++zeros;
    else
      gap = std::min(gap, std::abs(lam.real()));
  }
  if (zeros != 1) throw InvalidArgument("jordan_asymptotics_check: kernel must be one-dimensional");

  Eigen::JacobiSVD<Mat> right(C0, Eigen::ComputeFullV);
  Eigen::JacobiSVD<Mat> left(C0.transpose(), Eigen::ComputeFullV);
  const Vec v = right.matrixV().col(m - 1);
  const Vec w = left.matrixV().col(m - 1);
  const Vec limit = v * (w.dot(g) / w.dot(v));

  std::vector<double> ts, logs;
  double worst = 0.0;
  const double floor = 1e-12 * std::max(1.0, g.norm());
  for (double t : t_grid) {
    const double dist = (expm(t * C0) * g - limit).norm();
    worst = std::max(worst, dist);
    if (dist > floor) {
      ts.push_back(t);
      logs.push_back(std::log(dist));
    }
  }
  const double bound = gap - 0.05;
  Witness wit{Point(), 0.0, t_grid.empty() ? 0.0 : t_grid.back(), -1, "distance to projection"};
  PropertyReport rep;
  if (ts.size() < 2) {
    // g already lies in the kernel: the orbit is constant.
    rep = make_report("jordan_asymptotics", worst <= 1e-10 * std::max(1.0, g.norm()), kInf, bound,
                      0.05, wit);
  } else {
    const double rate = -fit_line(ts, logs).slope;
    wit.value = std::exp(logs.back());
    wit.t = ts.back();
    rep = make_report("jordan_asymptotics", rate >= bound, rate, bound, 0.05, wit);
  }
  rep.metadata["spectral_gap"] = format_double(gap);
  rep.metadata["limit"] = format_point(limit);
  return rep;
}

PropertyReport verify_cesaro_consistency(const CoefficientField& field, const GridFunction& f,
                                         const MeasureSystem& sys, int n, double R_obs,
                                         double cesaro_tol, double limit_tol,
                                         const AverageOptions& options) {
  if (n < 2) throw InvalidArgument("verify_cesaro_consistency: n must be >= 2");
  const DiscreteOperator op = assemble_system_operator(field, f.grid());
  const int store = std::max(1, static_cast<int>(std::lround(0.01 / options.dt)));
  const Trajectory tr = evolve(op, f, static_cast<double>(n), options.dt, options.theta, store);
  const GridFunction P = cesaro_average(tr);
  const GridFunction R = discrete_average(field, f, n, options);
  const double mf = functional_Mf(f, sys);
  const GridFunction limit = GridFunction::constant(f.grid(), mf * sys.xi);

  int node = 0;
  const double pr = window_sup_distance(P, R, R_obs, &node);
  const double pl = window_sup_distance(P, limit, R_obs);
  const double rl = window_sup_distance(R, limit, R_obs);
  const bool ok = pr <= cesaro_tol && pl <= limit_tol && rl <= limit_tol;
  PropertyReport rep = make_report("cesaro_consistency", ok, pr, cesaro_tol, cesaro_tol,
                                   node_witness(f.grid(), node, pr, n, "|P_n f - R_n f|"));
  rep.metadata["n"] = std::to_string(n);
  rep.metadata["P_to_limit"] = format_double(pl);
  rep.metadata["R_to_limit"] = format_double(rl);
  rep.metadata["limit_tol"] = format_double(limit_tol);
  rep.metadata["M_f"] = format_double(mf);
  return rep;
}

}  // namespace kolmo
