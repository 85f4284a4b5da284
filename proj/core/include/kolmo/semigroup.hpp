#pragma once

#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "kolmo/discretization.hpp"

namespace kolmo {

/// Initial datum as a function of the point.
using InitialDatum = std::function<Vec(const Point&)>;

/// Factorized theta-scheme  (I - theta dt A) u+ = (I + (1 - theta) dt A) u.
/// The factorization is reused by every step.
class ThetaStepper {
 public:
  ThetaStepper(const DiscreteOperator& op, double dt, double theta);

  Vec step(const Vec& u) const;
  double dt() const { return dt_; }
  double theta() const { return theta_; }
  /// Relative residual of the last solve.
  double last_residual() const { return last_residual_; }

 private:
  SparseMat lhs_;
  SparseMat rhs_;
  std::shared_ptr<Eigen::SparseLU<SparseMat>> lu_;
  double dt_;
  double theta_;
  mutable double last_residual_ = 0.0;
};

/// One theta step; the relative solve residual is at most 1e-10.
Vec step(const DiscreteOperator& op, const Vec& u, double dt, double theta);

/// Stored solution of u' = A u.
struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> snapshots;
  double dt = 0.0;  // largest step actually used
  double theta = 0.5;

  const Grid& grid() const { return snapshots.front().grid(); }
  int components() const { return snapshots.front().components(); }
  std::size_t size() const { return times.size(); }
  /// Index of the stored time equal to `t` (within 1e-9 relative), if any.
  std::optional<std::size_t> find_time(double t) const;
};

/// Default step size and scheme (Crank-Nicolson).
inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kDefaultTheta = 0.5;

/// Evolves `f` to `t_final` with `dt` (shrunk so the steps divide t_final
/// evenly), storing every `store_every` steps and the final time.
/// `store_every <= 0` keeps at most 200 stored steps. Throws NumericalError
/// when the state stops being finite.
Trajectory evolve(const DiscreteOperator& op, const GridFunction& f, double t_final,
                  double dt = kDefaultDt, double theta = kDefaultTheta, int store_every = 0);

/// Evolves `f` storing exactly at the increasing `times` (0 is always
/// stored first). Each interval is split into equal steps no longer than
/// `max_dt`; when `relative_dt > 0` steps are also at most
/// `relative_dt * t_next`, which resolves geometrically spaced times.
Trajectory evolve_at(const DiscreteOperator& op, const GridFunction& f,
                     const std::vector<double>& times, double max_dt = kDefaultDt,
                     double theta = kDefaultTheta, double relative_dt = 0.0);

struct LadderRung {
  double half_width;
  int n_per_axis;
};

struct NestedOptions {
  double dt = kDefaultDt;
  double theta = kDefaultTheta;
  BoundaryKind boundary = BoundaryKind::kDirichlet;
  /// Stored times; empty means ten equal subdivisions of t_final.
  std::vector<double> times;
  /// Also run the other boundary kind on the last rung and report the gap.
  bool compare_boundaries = true;
};

struct NestedSolveResult {
  Trajectory final_trajectory;
  std::vector<double> ladder;         // L of every rung
  std::vector<double> discrepancies;  // rung k vs rung k-1, k >= 1
  double boundary_gap = -1.0;         // Dirichlet vs Neumann on the last rung
  bool converged = false;
};

/// Solves the system on an increasing ladder of boxes and measures the sup
/// difference between consecutive rungs over [-R_obs, R_obs]^d and all
/// stored times. Rungs should share the spacing; otherwise the coarser
/// solution is interpolated (multilinearly) onto the finer window nodes.
NestedSolveResult solve_nested(const CoefficientField& field, const InitialDatum& f, double t_final,
                               const std::vector<LadderRung>& ladder, double nest_tol, double R_obs,
                               const NestedOptions& options = {});

/// Time average (1/t) int_0^t u(s) ds of a trajectory by the trapezoid rule.
GridFunction cesaro_average(const Trajectory& traj);

struct AverageOptions {
  double dt = kDefaultDt;
  double theta = kDefaultTheta;
};

/// (1/n) sum_{k=0}^{n-1} T(k) f on `grid`.
GridFunction discrete_average(const CoefficientField& field, const GridFunction& f, int n,
                              const AverageOptions& options = {});

/// Multilinear interpolation of a grid function at an arbitrary point of
/// its box.
Vec interpolate(const GridFunction& u, const Point& x);

}  // namespace kolmo
