#include "kolmo/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kolmo/error.hpp"
#include "kolmo/numerics.hpp"

namespace kolmo {

namespace {

constexpr double kSolveTol = 1e-10;

SparseMat identity(int n) {
  SparseMat eye(n, n);
  eye.setIdentity();
  return eye;
}

void check_finite(const Vec& u, double t) {
  if (!u.allFinite()) {
    std::ostringstream msg;
    msg << "evolve: non-finite state at t = " << t
        << " (instability; reduce dt or refine the grid)";
    throw NumericalError(msg.str());
  }
}

}  // namespace

ThetaStepper::ThetaStepper(const DiscreteOperator& op, double dt, double theta)
    : dt_(dt), theta_(theta) {
  if (!(dt > 0.0)) throw InvalidArgument("ThetaStepper: dt must be positive");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw InvalidArgument("ThetaStepper: theta must lie in [0, 1]");
  const SparseMat eye = identity(op.unknowns());
  lhs_ = eye - (theta * dt) * op.matrix;
  rhs_ = eye + ((1.0 - theta) * dt) * op.matrix;
  lhs_.makeCompressed();
  rhs_.makeCompressed();
  lu_ = std::make_shared<Eigen::SparseLU<SparseMat>>();
  lu_->analyzePattern(lhs_);
  lu_->factorize(lhs_);
  if (lu_->info() != Eigen::Success)
    throw NumericalError("ThetaStepper: singular system (I - theta dt A); reduce dt");
}

Vec ThetaStepper::step(const Vec& u) const {
  const Vec b = rhs_ * u;
  Vec x = lu_->solve(b);
  const double scale = std::max(b.norm(), 1e-300);
  double res = (lhs_ * x - b).norm() / scale;
  if (res > kSolveTol) {
    x += lu_->solve(b - lhs_ * x);
    res = (lhs_ * x - b).norm() / scale;
  }
  if (!(res <= kSolveTol))
    throw NumericalError("ThetaStepper: linear solve residual " + std::to_string(res) +
                         " exceeds 1e-10");
  last_residual_ = b.norm() == 0.0 ? 0.0 : res;
  return x;
}

Vec step(const DiscreteOperator& op, const Vec& u, double dt, double theta) {
  if (u.size() != op.unknowns()) throw InvalidArgument("step: state has wrong size");
  return ThetaStepper(op, dt, theta).step(u);
}

std::optional<std::size_t> Trajectory::find_time(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  return std::nullopt;
}

Trajectory evolve(const DiscreteOperator& op, const GridFunction& f, double t_final, double dt,
                  double theta, int store_every) {
  if (!(t_final > 0.0)) throw InvalidArgument("evolve: t_final must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("evolve: dt must be positive");
  if (f.components() != op.components || !f.grid().same_nodes(op.grid))
    throw InvalidArgument("evolve: initial datum does not match the operator");
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
  const double h = t_final / static_cast<double>(steps);
  if (store_every <= 0) store_every = static_cast<int>((steps + 199) / 200);

  Trajectory traj;
  traj.dt = h;
  traj.theta = theta;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(f);

  const ThetaStepper stepper(op, h, theta);
  Vec u = f.to_state();
  for (long s = 1; s <= steps; ++s) {
    u = stepper.step(u);
    const double t = s == steps ? t_final : h * static_cast<double>(s);
    check_finite(u, t);
    if (s % store_every == 0 || s == steps) {
      traj.times.push_back(t);
      traj.snapshots.push_back(GridFunction::from_state(op.grid, op.components, u));
    }
  }
  return traj;
}

Trajectory evolve_at(const DiscreteOperator& op, const GridFunction& f,
                     const std::vector<double>& times, double max_dt, double theta,
                     double relative_dt) {
  if (!(max_dt > 0.0)) throw InvalidArgument("evolve_at: max_dt must be positive");
  if (f.components() != op.components || !f.grid().same_nodes(op.grid))
    throw InvalidArgument("evolve_at: initial datum does not match the operator");
  Trajectory traj;
  traj.theta = theta;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(f);

  Vec u = f.to_state();
  double t_prev = 0.0;
  std::optional<ThetaStepper> stepper;
  for (double t_next : times) {
    if (t_next == 0.0 && t_prev == 0.0) continue;
    if (!(t_next > t_prev)) throw InvalidArgument("evolve_at: times must increase");
    double cap = max_dt;
    if (relative_dt > 0.0) cap = std::min(cap, relative_dt * t_next);
    const double span = t_next - t_prev;
    const long steps = std::max(1L, static_cast<long>(std::ceil(span / cap - 1e-9)));
    const double h = span / static_cast<double>(steps);
    if (!stepper || std::abs(stepper->dt() - h) > 1e-12 * h) stepper.emplace(op, h, theta);
    for (long s = 0; s < steps; ++s) u = stepper->step(u);
    check_finite(u, t_next);
    traj.dt = std::max(traj.dt, h);
    traj.times.push_back(t_next);
    traj.snapshots.push_back(GridFunction::from_state(op.grid, op.components, u));
    t_prev = t_next;
  }
  return traj;
}

Vec interpolate(const GridFunction& u, const Point& x) {
  const Grid& g = u.grid();
  if (x.size() != g.dim()) throw InvalidArgument("interpolate: dimension mismatch");
  const double L = g.half_width();
  const double h = g.spacing();
  const int n = g.n_per_axis();
  auto locate = [&](double xi, int& cell, double& frac) {
    if (xi < -L - 1e-12 * L || xi > L + 1e-12 * L)
      throw InvalidArgument("interpolate: point outside the grid box");
    const double s = (xi + L) / h;
    double r = std::round(s);
    if (std::abs(s - r) < 1e-9) {
      cell = std::clamp(static_cast<int>(r), 0, n - 1);
      frac = 0.0;
      if (cell == n - 1) {
        cell = n - 2;
        frac = 1.0;
      }
      return;
    }
    cell = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
    frac = s - cell;
  };
  int i = 0, j = 0;
  double fi = 0.0, fj = 0.0;
  locate(x(0), i, fi);
  const Mat& v = u.values();
  if (g.dim() == 1) return (1.0 - fi) * v.col(g.flat_index(i)) + fi * v.col(g.flat_index(i + 1));
  locate(x(1), j, fj);
  return (1.0 - fi) * (1.0 - fj) * v.col(g.flat_index(i, j)) +
         fi * (1.0 - fj) * v.col(g.flat_index(i + 1, j)) +
         (1.0 - fi) * fj * v.col(g.flat_index(i, j + 1)) +
         fi * fj * v.col(g.flat_index(i + 1, j + 1));
}

namespace {

// sup over stored times and window nodes of `fine` of |fine - coarse|.
double window_discrepancy(const Trajectory& fine, const Trajectory& coarse, double R_obs) {
  double worst = 0.0;
  const auto nodes = fine.grid().window_nodes(R_obs);
  for (std::size_t s = 0; s < fine.size(); ++s) {
    const GridFunction& uf = fine.snapshots[s];
    const GridFunction& uc = coarse.snapshots[s];
    for (int idx : nodes) {
      const Vec diff = uf.values().col(idx) - interpolate(uc, fine.grid().node(idx));
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace

NestedSolveResult solve_nested(const CoefficientField& field, const InitialDatum& f, double t_final,
                               const std::vector<LadderRung>& ladder, double nest_tol, double R_obs,
                               const NestedOptions& options) {
  if (ladder.size() < 2) throw InvalidArgument("solve_nested: ladder needs >= 2 rungs");
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (!(ladder[k].half_width > ladder[k - 1].half_width))
      throw InvalidArgument("solve_nested: ladder must be strictly increasing in L");
  if (!(R_obs > 0.0 && R_obs < ladder.front().half_width))
    throw InvalidArgument("solve_nested: need 0 < R_obs < smallest L");
  if (!(t_final > 0.0)) throw InvalidArgument("solve_nested: t_final must be positive");

  std::vector<double> times = options.times;
  if (times.empty())
    for (int i = 1; i <= 10; ++i) times.push_back(t_final * i / 10.0);

  auto run = [&](const LadderRung& rung, BoundaryKind kind) {
    const Grid grid = build_grid(field.dim_d(), rung.half_width, rung.n_per_axis, kind);
    const GridFunction f0 = GridFunction::sample(grid, field.dim_m(), f);
    const DiscreteOperator op = assemble_system_operator(field, grid);
    return evolve_at(op, f0, times, options.dt, options.theta);
  };

  NestedSolveResult result;
  Trajectory prev = run(ladder.front(), options.boundary);
  result.ladder.push_back(ladder.front().half_width);
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    Trajectory cur = run(ladder[k], options.boundary);
    result.discrepancies.push_back(window_discrepancy(cur, prev, R_obs));
    result.ladder.push_back(ladder[k].half_width);
    prev = std::move(cur);
  }
  result.converged = result.discrepancies.back() <= nest_tol;
  if (options.compare_boundaries) {
    const BoundaryKind other = options.boundary == BoundaryKind::kDirichlet
                                   ? BoundaryKind::kNeumann
                                   : BoundaryKind::kDirichlet;
    const Trajectory alt = run(ladder.back(), other);
    result.boundary_gap = window_discrepancy(prev, alt, R_obs);
  }
  result.final_trajectory = std::move(prev);
  return result;
}

GridFunction cesaro_average(const Trajectory& traj) {
  if (traj.size() < 2) throw InvalidArgument("cesaro_average: need at least two snapshots");
  const double t_final = traj.times.back();
  Mat acc =
      Mat::Zero(traj.snapshots.front().values().rows(), traj.snapshots.front().values().cols());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double w = 0.5 * (traj.times[i] - traj.times[i - 1]);
    acc += w * (traj.snapshots[i].values() + traj.snapshots[i - 1].values());
  }
  return GridFunction(traj.grid(), acc / t_final);
}

GridFunction discrete_average(const CoefficientField& field, const GridFunction& f, int n,
                              const AverageOptions& options) {
  if (n < 1) throw InvalidArgument("discrete_average: n must be >= 1");
  if (n == 1) return f;
  const DiscreteOperator op = assemble_system_operator(field, f.grid());
  std::vector<double> times;
  for (int k = 1; k < n; ++k) times.push_back(static_cast<double>(k));
  const Trajectory traj = evolve_at(op, f, times, options.dt, options.theta);
  Mat acc = Mat::Zero(f.values().rows(), f.values().cols());
  for (const auto& s : traj.snapshots) acc += s.values();
  return GridFunction(f.grid(), acc / static_cast<double>(n));
}

}  // namespace kolmo
