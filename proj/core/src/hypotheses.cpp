#include "kolmo/hypotheses.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "kolmo/error.hpp"

namespace kolmo {

namespace {

std::vector<CoefficientValues> evaluate_all(const CoefficientField& field,
                                            const std::vector<Point>& pts) {
  std::vector<CoefficientValues> out;
  out.reserve(pts.size());
  for (const auto& x : pts) out.push_back(field.evaluate(x));
  return out;
}

void require_samples(const std::vector<Point>& pts, const char* who) {
  if (pts.empty()) throw InvalidArgument(std::string(who) + ": empty sample set");
}

void require_spec(const SampleSpec& spec, const char* who) {
  if (!(spec.R_max > 0.0)) throw InvalidArgument(std::string(who) + ": R_max must be positive");
  if (spec.nodes_per_axis < 10)
    throw InvalidArgument(std::string(who) + ": need at least 10 sample nodes per axis");
  if (spec.annuli < 2) throw InvalidArgument(std::string(who) + ": need at least 2 annuli");
}

std::string index_set(const std::vector<int>& k) {
  std::ostringstream s;
  s << "K={";
  for (std::size_t i = 0; i < k.size(); ++i) s << (i ? "," : "") << k[i] + 1;
  s << "}";
  return s.str();
}

double max_sym_eigenvalue(const Mat& c) {
  const Mat sym = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

std::vector<Point> sample_points(int dim, const SampleSpec& spec) {
  if (dim != 1 && dim != 2) throw InvalidArgument("sample_points: d must be 1 or 2");
  std::vector<Point> pts;
  const int n = spec.nodes_per_axis;
  if (n < 2 || !(spec.R_max > 0.0)) return pts;
  const double h = 2.0 * spec.R_max / (n - 1);
  const double lim = spec.R_max * (1.0 + 1e-12);
  for (int i = 0; i < n; ++i) {
    const double x1 = -spec.R_max + h * i;
    if (dim == 1) {
      pts.push_back(Point::Constant(1, x1));
      continue;
    }
    for (int j = 0; j < n; ++j) {
      Point x(2);
      x << x1, -spec.R_max + h * j;
      if (x.norm() <= lim) pts.push_back(x);
    }
  }
  return pts;
}

int annulus_of(const Point& x, const SampleSpec& spec) {
  const int k = static_cast<int>(std::floor(x.norm() / spec.R_max * spec.annuli));
  return std::clamp(k, 0, spec.annuli - 1);
}

bool HypothesisReport::all_pass() const {
  return std::all_of(records.begin(), records.end(),
                     [](const HypothesisRecord& r) { return r.status == Status::kPass; });
}

const HypothesisRecord* HypothesisReport::find(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

std::optional<std::vector<int>> find_closed_subset(
    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& adj) {
  const int m = static_cast<int>(adj.rows());
  for (int start = 0; start < m; ++start) {
    std::vector<bool> seen(m, false);
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    int count = 1;
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      for (int j = 0; j < m; ++j)
        if (j != i && adj(i, j) && !seen[j]) {
          seen[j] = true;
          ++count;
          q.push(j);
        }
    }
    if (count < m) {
      std::vector<int> k;
      for (int i = 0; i < m; ++i)
        if (seen[i]) k.push_back(i);
      return k;
    }
  }
  return std::nullopt;
}

HypothesisReport check_hypotheses(const CoefficientField& field, const SampleSpec& spec,
                                  double pattern_tol) {
  require_spec(spec, "check_hypotheses");
  const auto pts = sample_points(field.dim_d(), spec);
  require_samples(pts, "check_hypotheses");
  const auto vals = evaluate_all(field, pts);
  const int m = field.dim_m();

  HypothesisReport rep;
  rep.sample_spec = spec;

  // ellipticity
  {
    std::vector<double> neg_mu(pts.size());
    for (std::size_t s = 0; s < pts.size(); ++s) {
      Eigen::SelfAdjointEigenSolver<Mat> es(vals[s].Q, Eigen::EigenvaluesOnly);
      neg_mu[s] = -es.eigenvalues().minCoeff();
    }
    const SupEstimate est = sup_with_trend(pts, neg_mu, spec);
    HypothesisRecord r;
    r.name = "ellipticity";
    const double mu0 = -est.sup;
    r.constants["mu0"] = mu0;
    r.witness = est.witness;
    r.witness->value = mu0;
    if (!(mu0 > 0.0)) {
      r.status = Status::kFail;
      r.note = "minimum eigenvalue of Q is not positive";
    } else if (est.trend == Trend::kUnbounded) {
      r.status = Status::kInconclusive;
      r.note = "minimum eigenvalue of Q decreases towards the sample boundary";
    } else {
      r.status = Status::kPass;
    }
    rep.records.push_back(std::move(r));
  }

  // dissipativity and off-diagonal sign
  {
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    double scale = 1.0;
    double min_off = std::numeric_limits<double>::infinity();
    std::size_t off_at = 0;
    std::pair<int, int> off_ij{0, 0};
    for (std::size_t s = 0; s < pts.size(); ++s) {
      const Mat& c = vals[s].C;
      scale = std::max(scale, c.norm());
      const double e = max_sym_eigenvalue(c);
      if (e > worst) {
        worst = e;
        at = s;
      }
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (i != j && c(i, j) < min_off) {
            min_off = c(i, j);
            off_at = s;
            off_ij = {i, j};
          }
    }
    HypothesisRecord r;
    r.name = "dissipativity";
    r.constants["max_sym_eigenvalue"] = worst;
    r.witness = Witness{pts[at], worst, 0.0, -1, "largest eigenvalue of (C + C^T) / 2"};
    r.status = worst <= 1e-12 * scale ? Status::kPass : Status::kFail;
    rep.records.push_back(std::move(r));

    HypothesisRecord v;
    v.name = "offdiagonal_sign";
    if (m == 1) min_off = 0.0;
    v.constants["min_offdiagonal"] = min_off;
    std::ostringstream what;
    what << "c_" << off_ij.first + 1 << off_ij.second + 1;
    v.witness = Witness{pts[off_at], min_off, 0.0, -1, what.str()};
    v.status = min_off >= 0.0 ? Status::kPass : Status::kFail;
    rep.records.push_back(std::move(v));
  }

  // irreducibility on the union sparsity pattern
  {
    Mat maxabs = Mat::Zero(m, m);
    for (const auto& v : vals) maxabs = maxabs.cwiseMax(v.C.cwiseAbs());
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adj(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) adj(i, j) = i != j && maxabs(i, j) > pattern_tol;
    HypothesisRecord r;
    r.name = "irreducibility";
    const auto closed = find_closed_subset(adj);
    if (closed) {
      double leak = 0.0;
      for (int i : *closed)
        for (int j = 0; j < m; ++j)
          if (std::find(closed->begin(), closed->end(), j) == closed->end())
            leak = std::max(leak, maxabs(i, j));
      r.status = Status::kFail;
      r.witness = Witness{pts.front(), leak, 0.0, -1, index_set(*closed)};
      r.note = "coupling decouples on " + index_set(*closed);
    } else {
      r.status = Status::kPass;
    }
    rep.records.push_back(std::move(r));
  }
  return rep;
}

KernelVector compute_common_kernel(const CoefficientField& field, const SampleSpec& spec,
                                   const KernelOptions& options) {
  require_spec(spec, "compute_common_kernel");
  const auto pts = sample_points(field.dim_d(), spec);
  require_samples(pts, "compute_common_kernel");
  const int m = field.dim_m();
  const int S = static_cast<int>(pts.size());
  Mat stacked(S * m, m);
  double cmax = 0.0;
  for (int s = 0; s < S; ++s) {
    const Mat c = field.evaluate(pts[s]).C;
    stacked.block(s * m, 0, m, m) = c;
    cmax = std::max(cmax, c.norm());
  }
  KernelVector kv;
  kv.sample_count = S;
  kv.kernel_tol =
      std::isnan(options.kernel_tol) ? 1e-10 * std::max(cmax, 1e-300) : options.kernel_tol;
  if (cmax == 0.0) throw DegenerateInput("compute_common_kernel: C vanishes on every sample");

  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinV);
  const Vec sv = svd.singularValues();
  kv.smallest_singular = sv(m - 1);
  kv.second_singular = m >= 2 ? sv(m - 2) : std::numeric_limits<double>::infinity();
  Vec xi = svd.matrixV().col(m - 1);
  xi.normalize();
  if (xi.sum() < 0.0) xi = -xi;

  double residual = 0.0;
  for (int s = 0; s < S; ++s)
    residual = std::max(residual, (stacked.block(s * m, 0, m, m) * xi).norm());
  kv.residual = residual;
  if (residual > kv.kernel_tol)
    throw NumericalError("compute_common_kernel: nullspace dimension 0 (max |C(x) xi| = " +
                         std::to_string(residual) + ")");
  const double gap = options.gap_factor * kv.kernel_tol * std::sqrt(static_cast<double>(S));
  if (kv.second_singular <= gap)
    throw DegenerateInput("compute_common_kernel: common kernel has dimension >= 2");
  if (xi.minCoeff() <= 0.0)
    throw DegenerateInput("compute_common_kernel: kernel vector is not componentwise positive");
  kv.xi = xi;
  return kv;
}

double lyapunov_generator(const CoefficientField& field, double sigma, const Point& x) {
  const CoefficientValues v = field.evaluate(x);
  const int d = field.dim_d();
  const double s = 1.0 + x.squaredNorm();
  const Vec grad = 2.0 * sigma * std::pow(s, sigma - 1.0) * x;
  const Mat hess = 2.0 * sigma * std::pow(s, sigma - 1.0) * Mat::Identity(d, d) +
                   4.0 * sigma * (sigma - 1.0) * std::pow(s, sigma - 2.0) * (x * x.transpose());
  return (v.Q * hess).trace() + v.b.dot(grad);
}

LyapunovResult check_lyapunov(const CoefficientField& field, double sigma, const SampleSpec& spec) {
  if (!(sigma > 0.0)) throw InvalidArgument("check_lyapunov: sigma must be positive");
  require_spec(spec, "check_lyapunov");
  const auto pts = sample_points(field.dim_d(), spec);
  require_samples(pts, "check_lyapunov");
  std::vector<double> aphi(pts.size()), phi(pts.size());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    aphi[s] = lyapunov_generator(field, sigma, pts[s]);
    phi[s] = std::pow(1.0 + pts[s].squaredNorm(), sigma);
  }
  const int outer = spec.annuli - 1;
  LyapunovResult res;
  for (int k = -10; k <= 10; ++k) {
    const double c = std::ldexp(1.0, k);
    double a = -std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    std::vector<double> shell_max(spec.annuli, -std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < pts.size(); ++s) {
      const double g = aphi[s] + c * phi[s];
      if (g > a) {
        a = g;
        at = s;
      }
      const int sh = annulus_of(pts[s], spec);
      shell_max[sh] = std::max(shell_max[sh], g);
    }
    if (!std::isfinite(a)) continue;
    // Margin a - g grows outward iff the outermost shell max of g is below
    // the previous one.
    if (!(shell_max[outer] < shell_max[outer - 1])) continue;
    res.status = Status::kPass;
    res.a = std::max(a, std::numeric_limits<double>::min());
    res.c = c;
    res.witness = Witness{pts[at], 0.0, 0.0, -1, "margin a - c phi - A phi vanishes here"};
    return res;
  }
  // No candidate certifies the trend; report where A phi + phi is largest.
  std::size_t at = 0;
  for (std::size_t s = 1; s < pts.size(); ++s)
    if (aphi[s] + phi[s] > aphi[at] + phi[at]) at = s;
  res.status = Status::kInconclusive;
  res.witness = Witness{pts[at], aphi[at], 0.0, -1, "margin shrinks at the sample boundary"};
  return res;
}

bool lyapunov_pair_holds(const CoefficientField& field, double sigma, double a, double c,
                         const SampleSpec& spec, Witness* witness) {
  const auto pts = sample_points(field.dim_d(), spec);
  for (const auto& x : pts) {
    const double lhs = lyapunov_generator(field, sigma, x);
    const double rhs = a - c * std::pow(1.0 + x.squaredNorm(), sigma);
    if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) {
      if (witness) *witness = Witness{x, lhs - rhs, 0.0, -1, "A phi - (a - c phi) > 0"};
      return false;
    }
  }
  return true;
}

SupEstimate sup_with_trend(const std::vector<Point>& points, const std::vector<double>& values,
                           const SampleSpec& spec) {
  if (points.empty() || points.size() != values.size())
    throw InvalidArgument("sup_with_trend: need paired, nonempty samples");
  SupEstimate est;
  est.annulus_max.assign(spec.annuli, std::numeric_limits<double>::quiet_NaN());
  std::size_t at = 0;
  for (std::size_t s = 0; s < points.size(); ++s) {
    if (std::isnan(values[s])) throw NumericalError("sup_with_trend: NaN sample value");
    if (values[s] > values[at]) at = s;
    double& slot = est.annulus_max[annulus_of(points[s], spec)];
    slot = std::isnan(slot) ? values[s] : std::max(slot, values[s]);
  }
  est.sup = values[at];
  est.witness = Witness{points[at], values[at], 0.0, -1, ""};
  // The two outermost non-empty shells decide the trend.
  std::vector<double> filled;
  for (double v : est.annulus_max)
    if (!std::isnan(v)) filled.push_back(v);
  const bool at_boundary = annulus_of(points[at], spec) == spec.annuli - 1;
  if (!at_boundary || filled.size() < 2) {
    est.trend = Trend::kBounded;
  } else {
    const double last = filled.back();
    const double prev = filled[filled.size() - 2];
    const double slack = 1e-9 * std::max(std::abs(prev), std::abs(last)) + 1e-12;
    est.trend = last <= prev + slack ? Trend::kBounded : Trend::kUnbounded;
  }
  return est;
}

GrowthResult check_growth(const CoefficientField& field, double sigma, const SampleSpec& spec) {
  require_spec(spec, "check_growth");
  const auto pts = sample_points(field.dim_d(), spec);
  require_samples(pts, "check_growth");
  std::vector<double> qr(pts.size()), br(pts.size());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const CoefficientValues v = field.evaluate(pts[s]);
    const double s2 = 1.0 + pts[s].squaredNorm();
    const double den = s2 * std::pow(s2, sigma);
    qr[s] = v.Q.cwiseAbs().maxCoeff() / den;
    br[s] = std::max(v.b.dot(pts[s]), 0.0) / den;
  }
  GrowthResult g;
  g.diffusion_ratio = sup_with_trend(pts, qr, spec);
  g.drift_ratio = sup_with_trend(pts, br, spec);
  g.c = std::max(g.diffusion_ratio.sup, g.drift_ratio.sup);
  const bool ok =
      g.diffusion_ratio.trend == Trend::kBounded && g.drift_ratio.trend == Trend::kBounded;
  g.status = ok ? Status::kPass : Status::kFail;
  return g;
}

SupEstimate estimate_Kp(const CoefficientField& field, double p, const KpConstants& k,
                        const SampleSpec& spec) {
  if (!(p > 1.0)) throw InvalidArgument("estimate_Kp: p must exceed 1");
  if (!(k.c_p > 0.0)) throw InvalidArgument("estimate_Kp: c_p must be positive");
  require_spec(spec, "estimate_Kp");
  const DerivativeBundle bundle = derivative_bundle(field, 1);
  const auto pts = sample_points(field.dim_d(), spec);
  require_samples(pts, "estimate_Kp");
  std::vector<double> vals(pts.size());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const Point& x = pts[s];
    const double mu = bundle.mu_Q(x);
    const double q1 = bundle.Q1(x);
    const double c1 = bundle.C1(x);
    vals[s] = bundle.r(x) + (1.0 - p) * mu + q1 * q1 / (4.0 * (p - 1.0) * mu) + k.c_p * c1 * c1;
  }
  return sup_with_trend(pts, vals, spec);
}

SecondOrderEstimates estimate_K12p(const CoefficientField& field, double p, const KpConstants& k,
                                   const SampleSpec& spec) {
  if (!(p > 1.0)) throw InvalidArgument("estimate_K12p: p must exceed 1");
  require_spec(spec, "estimate_K12p");
  const DerivativeBundle bundle = derivative_bundle(field, 2);
  const auto pts = sample_points(field.dim_d(), spec);
  require_samples(pts, "estimate_K12p");
  const auto& c = k.c_jp;
  std::vector<double> k1(pts.size()), k2(pts.size()), qr(pts.size()), qxr(pts.size()),
      br(pts.size());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const Point& x = pts[s];
    const double mu = bundle.mu_Q(x);
    const double r = bundle.r(x);
    const double q1 = bundle.Q1(x);
    const double q2 = bundle.Q2(x);
    const double c1 = bundle.C1(x);
    const double c2 = bundle.C2(x);
    const double b2 = bundle.B2(x);
    k1[s] = r - c[2] * mu + c[0] * c1 * c1 + 3.0 / (2.0 * (p - 1.0) * mu) * q1 * q1 + c[1] * b2;
    k2[s] =
        2.0 * r - c[5] * mu + c[3] * b2 + c[4] * c2 * c2 + 4.0 / ((p - 1.0) * mu) * q1 * q1 + q2;
    const Mat Q = field.Q(x);
    const double den = (1.0 + x.squaredNorm()) * mu;
    qr[s] = Q.norm() / den;
    qxr[s] = (Q * x).norm() / den;
    br[s] = field.b(x).dot(x) / den;
  }
  SecondOrderEstimates e;
  e.K1p = sup_with_trend(pts, k1, spec);
  e.K2p = sup_with_trend(pts, k2, spec);
  e.q_ratio = sup_with_trend(pts, qr, spec);
  e.qx_ratio = sup_with_trend(pts, qxr, spec);
  e.drift_ratio = sup_with_trend(pts, br, spec);
  return e;
}

std::vector<std::pair<double, double>> scan_Kp(const CoefficientField& field, double p,
                                               const std::vector<double>& cp_grid,
                                               const SampleSpec& spec) {
  std::vector<std::pair<double, double>> out;
  for (double cp : cp_grid) {
    KpConstants k;
    k.c_p = cp;
    out.emplace_back(cp, estimate_Kp(field, p, k, spec).sup);
  }
  return out;
}

PropertyReport spectral_check_C(const CoefficientField& field, const std::vector<Point>& points,
                                double eig_tol, double angle_tol) {
  if (points.empty()) throw InvalidArgument("spectral_check_C: no sample points");
  double worst_re = -std::numeric_limits<double>::infinity();
  double worst_angle = 0.0;
  std::optional<Witness> failure;
  Witness tightest{points.front(), worst_re, 0.0, -1, ""};
  for (const auto& x : points) {
    const Mat c = field.evaluate(x).C;
    const double tol = eig_tol * std::max(1.0, c.norm());
    Eigen::EigenSolver<Mat> es(c, false);
    if (es.info() != Eigen::Success) throw NumericalError("spectral_check_C: eigensolver failed");
    const Eigen::VectorXcd lam = es.eigenvalues();
    double max_re = -std::numeric_limits<double>::infinity();
    int on_axis = 0;
    bool axis_is_zero = true;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      max_re = std::max(max_re, lam(i).real());
      if (std::abs(lam(i).real()) <= tol) {
        ++on_axis;
        if (std::abs(lam(i)) > tol) axis_is_zero = false;
      }
    }
    if (max_re > worst_re) {
      worst_re = max_re;
      tightest = Witness{x, max_re, 0.0, -1, "largest real part of sigma(C(x))"};
    }
    std::string problem;
    if (max_re > tol)
      problem = "eigenvalue with positive real part";
    else if (on_axis != 1 || !axis_is_zero)
      problem = "zero is not the only imaginary-axis eigenvalue";
    if (problem.empty()) {
      Eigen::JacobiSVD<Mat> right(c, Eigen::ComputeFullV);
      Eigen::JacobiSVD<Mat> left(c.transpose(), Eigen::ComputeFullV);
      const Vec v = right.matrixV().col(c.cols() - 1);
      const Vec w = left.matrixV().col(c.cols() - 1);
      const double angle = (v - v.dot(w) * w).norm();
      worst_angle = std::max(worst_angle, angle);
      if (angle > angle_tol) problem = "Ker C(x) differs from Ker C(x)^T";
      if (!problem.empty() && !failure) failure = Witness{x, angle, 0.0, -1, problem};
    } else if (!failure) {
      failure = Witness{x, max_re, 0.0, -1, problem};
    }
  }
  PropertyReport rep = make_report("spectral_structure", !failure, worst_re, eig_tol, eig_tol,
                                   failure ? *failure : tightest);
  rep.metadata["max_kernel_angle"] = format_double(worst_angle);
  rep.metadata["points"] = std::to_string(points.size());
  return rep;
}

HypothesisReport certify_standing_hypotheses(const CoefficientField& field, const SampleSpec& spec,
                                             double sigma) {
  require_spec(spec, "certify_standing_hypotheses");
  const auto pts = sample_points(field.dim_d(), spec);
  require_samples(pts, "certify_standing_hypotheses");

  HypothesisReport rep;
  rep.sample_spec = spec;
  HypothesisRecord reg;
  reg.name = "regularity";
  for (const auto& x : pts) {
    try {
      field.evaluate(x);
    } catch (const Error& e) {
      reg.status = Status::kFail;
      reg.witness = Witness{x, std::numeric_limits<double>::quiet_NaN(), 0.0, -1, e.what()};
      break;
    }
  }
  if (!reg.witness) reg.status = Status::kPass;
  reg.constants["smoothness_order"] = field.smoothness_order();
  const bool usable = reg.status == Status::kPass;
  rep.records.push_back(std::move(reg));
  if (!usable) {
    for (const char* name : {"ellipticity", "dissipativity", "lyapunov", "offdiagonal_sign",
                             "common_kernel", "irreducibility"}) {
      HypothesisRecord r;
      r.name = name;
      r.note = "skipped: coefficient evaluation failed";
      rep.records.push_back(std::move(r));
    }
    return rep;
  }

  const HypothesisReport base = check_hypotheses(field, spec);
  rep.records.push_back(*base.find("ellipticity"));
  rep.records.push_back(*base.find("dissipativity"));

  HypothesisRecord lyap;
  lyap.name = "lyapunov";
  const LyapunovResult lr = check_lyapunov(field, sigma, spec);
  lyap.status = lr.status;
  lyap.witness = lr.witness;
  lyap.constants["sigma"] = sigma;
  if (lr.status == Status::kPass) {
    lyap.constants["a"] = lr.a;
    lyap.constants["c"] = lr.c;
  }
  rep.records.push_back(std::move(lyap));

  rep.records.push_back(*base.find("offdiagonal_sign"));

  HypothesisRecord ker;
  ker.name = "common_kernel";
  try {
    const KernelVector kv = compute_common_kernel(field, spec);
    ker.status = Status::kPass;
    ker.constants["residual"] = kv.residual;
    ker.constants["kernel_tol"] = kv.kernel_tol;
    for (Eigen::Index j = 0; j < kv.xi.size(); ++j)
      ker.constants["xi_" + std::to_string(j + 1)] = kv.xi(j);
  } catch (const DegenerateInput& e) {
    ker.status = Status::kInconclusive;
    ker.note = e.what();
    ker.witness = Witness{pts.front(), 0.0, 0.0, -1, e.what()};
  } catch (const NumericalError& e) {
    ker.status = Status::kFail;
    ker.note = e.what();
    ker.witness = Witness{pts.front(), 0.0, 0.0, -1, e.what()};
  }
  rep.records.push_back(std::move(ker));

  rep.records.push_back(*base.find("irreducibility"));
  return rep;
}

}  // namespace kolmo
