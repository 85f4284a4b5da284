#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/coefficients.hpp"
#include "kolmo/report.hpp"

namespace kolmo {

/// Sampled ball used to certify global hypotheses: a tensor grid with
/// `nodes_per_axis` points per axis on [-R_max, R_max]^d restricted to the
/// ball, split into `annuli` equal radial shells for trend tests.
struct SampleSpec {
  double R_max = 6.0;
  int nodes_per_axis = 41;
  int annuli = 6;
};

std::vector<Point> sample_points(int dim, const SampleSpec& spec);
/// Shell index in [0, annuli) of a point of the sampled ball.
int annulus_of(const Point& x, const SampleSpec& spec);

struct HypothesisRecord {
  std::string name;
  Status status = Status::kInconclusive;
  std::optional<Witness> witness;
  std::map<std::string, double> constants;
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisRecord> records;
  SampleSpec sample_spec;

  bool all_pass() const;
  const HypothesisRecord* find(const std::string& name) const;
};

/// Ellipticity, dissipativity, off-diagonal sign and coupling
/// irreducibility on the sampled ball. Throws InvalidArgument for an
/// empty sample set and NumericalError for NaN coefficients.
HypothesisReport check_hypotheses(const CoefficientField& field, const SampleSpec& spec,
                                  double pattern_tol = 1e-14);

/// Index set K (0-based) with no edge leaving it in the directed graph
/// `adjacency` (edge i -> j iff adjacency(i, j), i != j), or nullopt when
/// every proper nonempty K has an outgoing edge (strong connectivity).
std::optional<std::vector<int>> find_closed_subset(
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& adjacency);

struct KernelOptions {
  /// Absolute tolerance on |C(x) xi|; NaN selects 1e-10 * max_x |C(x)|.
  double kernel_tol = std::numeric_limits<double>::quiet_NaN();
  double gap_factor = 10.0;
};

/// Common kernel vector of C on the samples: unit norm, positive entries.
struct KernelVector {
  Vec xi;
  double residual = 0.0;  // max_x |C(x) xi|
  int sample_count = 0;
  double kernel_tol = 0.0;
  double smallest_singular = 0.0;
  double second_singular = 0.0;
};

/// Null vector of the stacked matrix [C(x_1); ...; C(x_S)] by SVD.
/// Throws NumericalError when the kernel is trivial and DegenerateInput when
/// it is at least two-dimensional or not sign-definite.
KernelVector compute_common_kernel(const CoefficientField& field, const SampleSpec& spec,
                                   const KernelOptions& options = {});

/// A phi for phi_sigma = (1 + |x|^2)^sigma, computed analytically.
double lyapunov_generator(const CoefficientField& field, double sigma, const Point& x);

struct LyapunovResult {
  Status status = Status::kInconclusive;
  double a = 0.0;
  double c = 0.0;
  std::optional<Witness> witness;
};

/// Fits the smallest c in {2^k : k = -10..10} for which a = max(A phi + c phi)
/// is finite and the margin a - c phi - A phi grows on the outermost shell.
LyapunovResult check_lyapunov(const CoefficientField& field, double sigma, const SampleSpec& spec);

/// Pointwise A phi <= a - c phi on every sample; the first violation is
/// reported through `witness`.
bool lyapunov_pair_holds(const CoefficientField& field, double sigma, double a, double c,
                         const SampleSpec& spec, Witness* witness = nullptr);

enum class Trend { kBounded, kUnbounded };

/// Sup of a sampled quantity and whether it stays bounded across shells.
struct SupEstimate {
  double sup = 0.0;
  Trend trend = Trend::kBounded;
  Witness witness;
  std::vector<double> annulus_max;
};

/// Bounded iff the sup is attained off the outermost shell or the shell
/// maxima are non-increasing towards the boundary.
SupEstimate sup_with_trend(const std::vector<Point>& points, const std::vector<double>& values,
                           const SampleSpec& spec);

struct GrowthResult {
  Status status = Status::kInconclusive;
  double c = 0.0;
  SupEstimate diffusion_ratio;  // max_ij |q_ij| / ((1+|x|^2) phi)
  SupEstimate drift_ratio;      // <b, x>^+ / ((1+|x|^2) phi)
};

GrowthResult check_growth(const CoefficientField& field, double sigma, const SampleSpec& spec);

/// Free constants of the derivative-estimate hypotheses.
struct KpConstants {
  double c_p = 1.0;
  std::array<double, 6> c_jp{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};  // c_1p .. c_6p
};

/// sup(r + (1-p) mu_Q + Q1^2 / (4 (p-1) mu_Q) + c_p C1^2).
SupEstimate estimate_Kp(const CoefficientField& field, double p, const KpConstants& constants,
                        const SampleSpec& spec);

struct SecondOrderEstimates {
  SupEstimate K1p;
  SupEstimate K2p;
  SupEstimate q_ratio;      // |Q(x)| / ((1+|x|^2) mu_Q)
  SupEstimate qx_ratio;     // |Q(x) x| / ((1+|x|^2) mu_Q)
  SupEstimate drift_ratio;  // <b, x> / ((1+|x|^2) mu_Q)
};

/// K_{1p}, K_{2p} and the ratio conditions; needs second derivatives.
SecondOrderEstimates estimate_K12p(const CoefficientField& field, double p,
                                   const KpConstants& constants, const SampleSpec& spec);

/// K_p sup for each c_p in `cp_grid`.
std::vector<std::pair<double, double>> scan_Kp(const CoefficientField& field, double p,
                                               const std::vector<double>& cp_grid,
                                               const SampleSpec& spec);

/// Spectrum of C(x) in the closed left half-plane, zero the only eigenvalue
/// on the imaginary axis, and Ker C(x) = Ker C(x)^T, at every point.
PropertyReport spectral_check_C(const CoefficientField& field, const std::vector<Point>& points,
                                double eig_tol = 1e-10, double angle_tol = 1e-8);

/// All seven standing hypotheses; the Lyapunov one uses phi_sigma.
HypothesisReport certify_standing_hypotheses(const CoefficientField& field, const SampleSpec& spec,
                                             double sigma = 1.0);

}  // namespace kolmo
