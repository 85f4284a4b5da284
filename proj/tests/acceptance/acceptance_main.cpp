// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are pinned
// here and deliberately not read from any configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kolmo/coefficients.hpp"
#include "kolmo/discretization.hpp"
#include "kolmo/error.hpp"
#include "kolmo/hypotheses.hpp"
#include "kolmo/invariant_measure.hpp"
#include "kolmo/properties.hpp"
#include "kolmo/semigroup.hpp"

namespace {

using namespace kolmo;

constexpr double kL = 6.0;
constexpr int kN = 481;
constexpr double kRobs = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

CoefficientField family(double gamma, double beta, CouplingKind kind = CouplingKind::kExchange2,
                        Mat constant_C = Mat()) {
  BuiltinFamily fam;
  fam.gamma = gamma;
  fam.beta = beta;
  fam.coupling = kind;
  fam.dim_m = kind == CouplingKind::kZeta3 ? 3 : 2;
  if (kind == CouplingKind::kConstantMatrix) {
    fam.dim_m = static_cast<int>(constant_C.rows());
    fam.constant_C = constant_C;
  }
  return make_builtin(fam);
}

Grid grid(BoundaryKind kind = BoundaryKind::kDirichlet, int n = kN, double L = kL) {
  return build_grid(1, L, n, kind);
}

Vec standard_datum(const Point& x, int m) {
  Vec v(m);
  v(0) = std::tanh(x(0));
  v(1) = std::exp(-x(0) * x(0));
  if (m == 3) v(2) = std::exp(-x(0) * x(0)) * std::sin(x(0)) + 0.5;
  return v;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << std::scientific << v;
  return s.str();
}

Outcome c1_oracle() {
  struct Case {
    const char* name;
    double gamma, beta;
  };
  const Case cases[] = {{"gamma0_beta1", 0.0, 1.0}, {"gamma1_beta1", 1.0, 1.0}, {"ou", 0.0, 0.0}};
  Outcome out{true, ""};
  for (const auto& c : cases) {
    const CoefficientField f = family(c.gamma, c.beta);
    auto err = [&](int n) {
      const Grid g = grid(BoundaryKind::kDirichlet, n);
      return l1_distance(solve_scalar_invariant_density(f, g), oracle_density_1d(f, g));
    };
    const double coarse = err(241);
    const double fine = err(481);
    const bool ok = fine <= 1e-3 && coarse / fine >= 3.0;
    out.pass = out.pass && ok;
    out.detail += std::string(c.name) + " L1=" + fmt(fine) + " ratio=" + fmt(coarse / fine) + "; ";
  }
  return out;
}

Outcome c2_scalar_invariance() {
  const CoefficientField f = family(0.0, 1.0);
  const Grid g = grid();
  const MeasureDensity mu = solve_scalar_invariant_density(f, g);
  const DiscreteOperator op = assemble_scalar_operator(f, g);
  Outcome out{true, ""};
  const std::vector<std::pair<const char*, std::function<double(double)>>> data = {
      {"tanh", [](double x) { return std::tanh(x); }},
      {"gaussian", [](double x) { return std::exp(-x * x); }}};
  for (const auto& [name, fn] : data) {
    const GridFunction f0 =
        GridFunction::sample(g, 1, [&](const Point& x) { return Vec::Constant(1, fn(x(0))); });
    const Trajectory tr = evolve_at(op, f0, {0.1, 1.0, 10.0});
    Tolerances tol;
    tol.scalar_inv = 1e-3;
    const PropertyReport r = verify_scalar_invariance(tr, mu, tol);
    out.pass = out.pass && r.passed();
    out.detail += std::string(name) + " residual=" + fmt(r.measured) + "; ";
  }
  return out;
}

Outcome c3_system_invariance() {
  Outcome out{true, ""};
  for (CouplingKind kind : {CouplingKind::kExchange2, CouplingKind::kZeta3}) {
    const CoefficientField f = family(0.0, 1.0, kind);
    const Grid g = grid();
    const MeasureSystem sys = build_measure_system(compute_common_kernel(f, SampleSpec{}),
                                                   solve_scalar_invariant_density(f, g));
    const int m = f.dim_m();
    const GridFunction f0 =
        GridFunction::sample(g, m, [m](const Point& x) { return standard_datum(x, m); });
    const Trajectory tr = evolve_at(assemble_system_operator(f, g), f0, {0.1, 1.0, 10.0});
    Tolerances tol;
    tol.inv = 1e-2;
    const PropertyReport r = verify_invariance(tr, sys, tol);
    out.pass = out.pass && r.passed();
    out.detail += f.label() + " residual=" + fmt(r.measured) + "; ";
  }
  return out;
}

Outcome c4_positivity() {
  const CoefficientField f = family(0.0, 1.0);
  const Grid g = grid();
  const GridFunction f0 =
      GridFunction::sample(g, 2, [](const Point& x) { return Vec{{std::exp(-x(0) * x(0)), 0.0}}; });
  const Trajectory tr = evolve(assemble_system_operator(f, g), f0, 1.0, 1e-3, 1.0);
  Tolerances tol;
  tol.pos_implicit = 1e-8;
  tol.pos_floor = 1e-6;
  const PropertyReport r = verify_positivity(tr, kRobs, 1.0, tol);
  return {r.passed(), "min=" + fmt(r.measured) + " window_min(t=1)=" + r.metadata.at("window_min")};
}

Outcome c5_domination() {
  const CoefficientField f = family(0.0, 1.0);
  // tanh does not vanish at the wall; a Dirichlet cut next to the strong
  // drift breaks monotonicity of central differences there.
  const Grid g = grid(BoundaryKind::kNeumann);
  const GridFunction f0 =
      GridFunction::sample(g, 2, [](const Point& x) { return standard_datum(x, 2); });
  GridFunction abs2 = GridFunction::sample(
      g, 1, [](const Point& x) { return Vec::Constant(1, standard_datum(x, 2).squaredNorm()); });
  const std::vector<double> times = {0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0};
  const Trajectory vec = evolve_at(assemble_system_operator(f, g), f0, times);
  const Trajectory sc = evolve_at(assemble_scalar_operator(f, g), abs2, times);
  Tolerances tol;
  tol.dom = 1e-6;
  tol.sup = 1e-6;
  const PropertyReport r = verify_semigroup_bounds(vec, sc, 2.0, tol);
  return {r.passed(), "domination excess=" + fmt(r.measured) +
                          " contraction excess=" + r.metadata.at("contraction_excess")};
}

Outcome c6_fixed_points() {
  const CoefficientField f = family(0.0, 1.0);
  const KernelVector xi = compute_common_kernel(f, SampleSpec{});
  Tolerances tol;
  tol.fixed_point = 1e-8;
  tol.fp_gap = 0.1;
  const PropertyReport r = verify_fixed_points(f, grid(), xi.xi, 1e-3, 0.5, tol);
  return {r.passed(), "|T(1)xi-xi|=" + fmt(r.measured) + " eta_gap=" + r.metadata.at("eta_gap")};
}

Outcome c7_gradient_rates() {
  const CoefficientField f = family(0.0, 1.0);
  constexpr double eps = 0.003;
  // Sharp data: a smoothed step for h = 0 and a smoothed kink for h >= 1.
  const InitialDatum step = [](const Point& x) { return Vec::Constant(2, std::tanh(x(0) / eps)); };
  const InitialDatum kink = [](const Point& x) {
    const double y = x(0) / eps;
    const double logcosh = std::abs(y) + std::log1p(std::exp(-2.0 * std::abs(y))) - std::log(2.0);
    return Vec::Constant(2, eps * logcosh * std::exp(-x(0) * x(0) / 8.0));
  };
  Tolerances tol;
  tol.slope_margin = 0.25;
  tol.product_ratio = 50.0;
  tol.bounded_ratio = 10.0;
  Outcome out{true, ""};
  const struct {
    int k, h;
    const InitialDatum* f;
  } cases[] = {{1, 0, &step}, {2, 0, &step}, {2, 1, &kink}, {1, 1, &kink}};
  for (const auto& c : cases) {
    const RateFit fit = estimate_gradient_rate(f, *c.f, 2.0, c.k, c.h);
    const PropertyReport r = gradient_rate_verdict(fit, tol);
    out.pass = out.pass && r.passed();
    out.detail += "(" + std::to_string(c.k) + "," + std::to_string(c.h) +
                  ") slope=" + fmt(fit.fit.slope) + " ratio=" + fmt(fit.product_ratio) + "; ";
  }
  return out;
}

Outcome c8_lp_bound() {
  const CoefficientField f = family(0.0, 1.0);
  const Grid g = grid();
  const MeasureSystem sys = build_measure_system(compute_common_kernel(f, SampleSpec{}),
                                                 solve_scalar_invariant_density(f, g));
  const GridFunction f0 =
      GridFunction::sample(g, 2, [](const Point& x) { return standard_datum(x, 2); });
  const Trajectory tr = evolve(assemble_system_operator(f, g), f0, 10.0);
  Tolerances tol;
  tol.lp = 1e-6;
  Outcome out{true, ""};
  for (double p : {1.0, 2.0, 4.0}) {
    const PropertyReport r = verify_lp_bound(tr, sys, p, tol);
    out.pass = out.pass && r.passed();
    out.detail += "p=" + fmt(p) + " max=" + fmt(r.measured) + " bound=" + fmt(r.bound) + "; ";
  }
  return out;
}

Outcome c9_longtime() {
  const CoefficientField f = family(0.0, 1.0);
  const Grid g = grid();
  const MeasureSystem sys = build_measure_system(compute_common_kernel(f, SampleSpec{}),
                                                 solve_scalar_invariant_density(f, g));
  const GridFunction f0 = GridFunction::constant(g, Vec{{1.0, 0.0}});
  const Trajectory tr = evolve(assemble_system_operator(f, g), f0, 20.0);
  Tolerances tol;
  tol.longtime = 1e-2;
  tol.plateau = 1e-3;
  const PropertyReport r = verify_longtime(tr, sys, kRobs, tol);
  // Distance to the explicit limit (1/2, 1/2).
  double direct = 0.0;
  for (int i : g.window_nodes(kRobs))
    direct = std::max(direct, (tr.snapshots.back().values().col(i) - Vec{{0.5, 0.5}}).norm());
  const bool ok = r.passed() && direct <= 1e-2;
  return {ok, "sup|T(20)f-(1/2,1/2)|=" + fmt(direct) + " plateau=" + r.metadata.at("plateau_gap") +
                  " L2=" + r.metadata.at("l2_distance") +
                  " monotone=" + r.metadata.at("monotone_after_1")};
}

Outcome c10_gradient_decay() {
  const CoefficientField f = family(0.0, 1.0);
  const Grid g = grid();
  const MeasureSystem sys = build_measure_system(compute_common_kernel(f, SampleSpec{}),
                                                 solve_scalar_invariant_density(f, g));
  const BumpFunction bump{Point::Zero(1), 1.5, 1.0};
  const GridFunction f0 = GridFunction::sample(g, 2, [&](const Point& x) {
    return Vec{{bump.value(x), 0.5 * bump.value(x - Point::Constant(1, 0.5))}};
  });
  const Trajectory tr = evolve(assemble_system_operator(f, g), f0, 20.0);
  const HypothesisReport hyp = check_hypotheses(f, SampleSpec{});
  const double mu0 = hyp.find("ellipticity")->constants.at("mu0");
  Tolerances tol;
  tol.decay_factor = 0.05;
  tol.integral_slack = 0.1;
  const PropertyReport r = verify_l2_gradient_decay(tr, sys, mu0, tol);
  return {r.passed(), "h(20)/h(0.1)=" + fmt(r.measured) +
                          " integral=" + r.metadata.at("time_integral") +
                          " bound=" + r.metadata.at("integral_bound")};
}

Outcome c11_counterexamples() {
  Tolerances tol;
  tol.rate = 0.05;
  const Grid g = grid(BoundaryKind::kNeumann, 121);
  const GridFunction f0 = GridFunction::constant(g, Vec::Constant(2, 1.0 / std::sqrt(2.0)));
  const PropertyReport grow =
      counterexample_mode(family(0.0, 1.0, CouplingKind::kConstantMatrix, Mat::Identity(2, 2)), f0,
                          2.0, 1e-3, 0.5, 1.0, tol);
  const PropertyReport decay =
      counterexample_mode(family(0.0, 1.0, CouplingKind::kConstantMatrix, -Mat::Identity(2, 2)), f0,
                          2.0, 1e-3, 0.5, 1.0, tol);
  return {grow.passed() && decay.passed(),
          "growth rate=" + fmt(grow.measured) + " decay rate=" + fmt(decay.measured)};
}

Outcome c12_spectral() {
  std::vector<Point> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back(Point::Constant(1, -10.0 + 20.0 * i / 999.0));
  Outcome out{true, ""};
  for (CouplingKind kind : {CouplingKind::kExchange2, CouplingKind::kZeta3}) {
    const PropertyReport r = spectral_check_C(family(0.0, 1.0, kind), pts, 1e-10, 1e-8);
    out.pass = out.pass && r.passed();
    out.detail +=
        "max Re=" + fmt(r.measured) + " angle=" + r.metadata.at("max_kernel_angle") + "; ";
  }
  return out;
}

Outcome c13_cesaro() {
  const CoefficientField f = family(0.0, 1.0);
  const Grid g = grid();
  const MeasureSystem sys = build_measure_system(compute_common_kernel(f, SampleSpec{}),
                                                 solve_scalar_invariant_density(f, g));
  const GridFunction f0 = GridFunction::constant(g, Vec{{1.0, 0.0}});
  const PropertyReport r = verify_cesaro_consistency(f, f0, sys, 20, kRobs, 1e-3, 2e-2);
  return {r.passed(), "|P20-R20|=" + fmt(r.measured) +
                          " |P20-Mf xi|=" + r.metadata.at("P_to_limit") +
                          " |R20-Mf xi|=" + r.metadata.at("R_to_limit")};
}

Outcome c14_nested() {
  const CoefficientField f = family(1.0, 1.0);
  const InitialDatum datum = [](const Point& x) { return standard_datum(x, 2); };
  const std::vector<LadderRung> ladder = {{4.0, 321}, {6.0, 481}, {8.0, 641}};
  const NestedSolveResult res = solve_nested(f, datum, 1.0, ladder, 1e-6, kRobs);
  const auto& d = res.discrepancies;
  const bool decreasing = d.size() == 2 && d[1] < d[0];
  const bool gap_ok = res.boundary_gap <= 2.0 * d.back();
  return {decreasing && gap_ok,
          "discrepancies=" + fmt(d[0]) + "," + fmt(d[1]) + " D/N gap=" + fmt(res.boundary_gap)};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, c1_oracle},     {2, c2_scalar_invariance}, {3, c3_system_invariance}, {4, c4_positivity},
      {5, c5_domination}, {6, c6_fixed_points},      {7, c7_gradient_rates},    {8, c8_lp_bound},
      {9, c9_longtime},   {10, c10_gradient_decay},  {11, c11_counterexamples}, {12, c12_spectral},
      {13, c13_cesaro},   {14, c14_nested}};
  int failures = 0;
  for (const auto& [id, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %s[%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
