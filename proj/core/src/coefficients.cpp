#include "kolmo/coefficients.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

#include "kolmo/error.hpp"

namespace kolmo {

namespace {

bool all_finite(const Mat& m) { return m.allFinite(); }

std::vector<Mat> zeros(int count, int rows, int cols) {
  return std::vector<Mat>(count, Mat::Zero(rows, cols));
}

}  // namespace

CoefficientField::CoefficientField(int dim_d, int dim_m, int smoothness_order, FieldFunctions fns,
                                   std::string label)
    : dim_d_(dim_d), dim_m_(dim_m), smoothness_order_(smoothness_order), label_(std::move(label)) {
  if (dim_d < 1) throw InvalidArgument("CoefficientField: dim_d must be >= 1");
  if (dim_m < 1) throw InvalidArgument("CoefficientField: dim_m must be >= 1");
  if (smoothness_order < 1 || smoothness_order > 3)
    throw InvalidArgument("CoefficientField: smoothness_order must be 1, 2 or 3");
  if (!fns.Q || !fns.b || !fns.C)
    throw InvalidArgument("CoefficientField: Q, b and C are required");
  if (!fns.jac_b || !fns.dQ || !fns.dC)
    throw InvalidArgument("CoefficientField: first derivatives are required");
  if (smoothness_order >= 2 && (!fns.d2Q || !fns.d2C || !fns.d2b))
    throw InvalidArgument("CoefficientField: smoothness_order >= 2 needs second derivatives");
  fns_ = std::make_shared<const FieldFunctions>(std::move(fns));
}

void CoefficientField::check_point(const Point& x) const {
  if (x.size() != dim_d_) throw InvalidArgument("CoefficientField: point has wrong dimension");
  if (!x.allFinite()) throw InvalidArgument("CoefficientField: non-finite evaluation point");
}

Mat CoefficientField::Q(const Point& x) const {
  check_point(x);
  return fns_->Q(x);
}

Vec CoefficientField::b(const Point& x) const {
  check_point(x);
  return fns_->b(x);
}

Mat CoefficientField::C(const Point& x) const {
  check_point(x);
  return fns_->C(x);
}

CoefficientValues CoefficientField::evaluate(const Point& x) const {
  check_point(x);
  CoefficientValues v{fns_->Q(x), fns_->b(x), fns_->C(x)};
  if (v.Q.rows() != dim_d_ || v.Q.cols() != dim_d_ || v.b.size() != dim_d_ ||
      v.C.rows() != dim_m_ || v.C.cols() != dim_m_)
    throw NumericalError("CoefficientField: coefficient has wrong shape");
  if (!all_finite(v.Q) || !v.b.allFinite() || !all_finite(v.C))
    throw NumericalError("CoefficientField: non-finite coefficient value");
  const double qn = v.Q.norm();
  if ((v.Q - v.Q.transpose()).norm() > 1e-12 * qn)
    throw NumericalError("CoefficientField: Q(x) is not symmetric");
  return v;
}

Mat zeta3_matrix(double z1, double z2, double z3) {
  Mat c(3, 3);
  c << -z1 - z2, z1, z2, z2, -z1 - z2 - z3, z1 + z3, z1, z2 + z3, -z1 - z2 - z3;
  return c;
}

CoefficientField make_builtin(const BuiltinFamily& fam) {
  const int d = fam.dim_d;
  const int m = fam.dim_m;
  if (d < 1) throw InvalidArgument("make_builtin: dim_d must be >= 1");
  if (fam.Q0.rows() != d || fam.Q0.cols() != d)
    throw InvalidArgument("make_builtin: Q0 must be d x d");
  if ((fam.Q0 - fam.Q0.transpose()).norm() > 1e-12 * fam.Q0.norm())
    throw InvalidArgument("make_builtin: Q0 must be symmetric");
  Eigen::LLT<Mat> llt(fam.Q0);
  if (llt.info() != Eigen::Success)
    throw InvalidArgument("make_builtin: Q0 must be positive definite");
  if (!(fam.gamma >= 0.0)) throw InvalidArgument("make_builtin: gamma must be >= 0");
  if (!(fam.beta >= 0.0)) throw InvalidArgument("make_builtin: beta must be >= 0");
  if (!(fam.b0 > 0.0)) throw InvalidArgument("make_builtin: b0 must be > 0");

  Mat shape;  // C(x) = c(x) * shape, or constant
  bool constant = false;
  switch (fam.coupling) {
    case CouplingKind::kExchange2:
      if (m != 2) throw InvalidArgument("make_builtin: exchange2 requires m = 2");
      shape.resize(2, 2);
      shape << -1.0, 1.0, 1.0, -1.0;
      break;
    case CouplingKind::kZeta3:
      if (m != 3) throw InvalidArgument("make_builtin: zeta3 requires m = 3");
      shape = zeta3_matrix(1.0, 2.0, 3.0);
      break;
    case CouplingKind::kConstantMatrix:
      if (fam.constant_C.rows() != m || fam.constant_C.cols() != m)
        throw InvalidArgument("make_builtin: constant_C must be m x m");
      if (!fam.constant_C.allFinite())
        throw InvalidArgument("make_builtin: constant_C must be finite");
      shape = fam.constant_C;
      constant = true;
      break;
  }

  const Mat Q0 = fam.Q0;
  const double g = fam.gamma;
  const double be = fam.beta;
  const double b0 = fam.b0;

  FieldFunctions f;
  f.Q = [Q0, g](const Point& x) -> Mat { return std::pow(1.0 + x.squaredNorm(), g) * Q0; };
  f.b = [b0, be](const Point& x) -> Vec { return -b0 * std::pow(1.0 + x.squaredNorm(), be) * x; };
  f.jac_b = [b0, be, d](const Point& x) -> Mat {
    const double s = 1.0 + x.squaredNorm();
    Mat j = std::pow(s, be) * Mat::Identity(d, d) +
            2.0 * be * std::pow(s, be - 1.0) * (x * x.transpose());
    return -b0 * j;
  };
  f.dQ = [Q0, g, d](const Point& x) {
    const double s = 1.0 + x.squaredNorm();
    std::vector<Mat> out(d);
    for (int k = 0; k < d; ++k) out[k] = 2.0 * g * std::pow(s, g - 1.0) * x(k) * Q0;
    return out;
  };
  f.d2Q = [Q0, g, d](const Point& x) {
    const double s = 1.0 + x.squaredNorm();
    std::vector<Mat> out(d * d);
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        double w = 4.0 * g * (g - 1.0) * std::pow(s, g - 2.0) * x(k) * x(l);
        if (k == l) w += 2.0 * g * std::pow(s, g - 1.0);
        out[k * d + l] = w * Q0;
      }
    return out;
  };
  f.d2b = [b0, be, d](const Point& x) {
    const double s = 1.0 + x.squaredNorm();
    const double p1 = 2.0 * be * std::pow(s, be - 1.0);
    const double p2 = 4.0 * be * (be - 1.0) * std::pow(s, be - 2.0);
    std::vector<Vec> out(d * d, Vec::Zero(d));
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        Vec& v = out[k * d + l];
        for (int i = 0; i < d; ++i) {
          double w = 0.0;
          if (i == l) w += p1 * x(k);
          if (i == k) w += p1 * x(l);
          if (k == l) w += p1 * x(i);
          w += p2 * x(i) * x(k) * x(l);
          v(i) = -b0 * w;
        }
      }
    return out;
  };

  if (constant) {
    f.C = [shape](const Point&) -> Mat { return shape; };
    f.dC = [d, m](const Point&) { return zeros(d, m, m); };
    f.d2C = [d, m](const Point&) { return zeros(d * d, m, m); };
  } else {
    // c(x) = 1 / (1 + |x|^2)
    f.C = [shape](const Point& x) -> Mat { return shape / (1.0 + x.squaredNorm()); };
    f.dC = [shape, d](const Point& x) {
      const double s = 1.0 + x.squaredNorm();
      std::vector<Mat> out(d);
      for (int k = 0; k < d; ++k) out[k] = (-2.0 * x(k) / (s * s)) * shape;
      return out;
    };
    f.d2C = [shape, d](const Point& x) {
      const double s = 1.0 + x.squaredNorm();
      std::vector<Mat> out(d * d);
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double w = 8.0 * x(k) * x(l) / (s * s * s);
          if (k == l) w -= 2.0 / (s * s);
          out[k * d + l] = w * shape;
        }
      return out;
    };
  }

  const char* kind = fam.coupling == CouplingKind::kExchange2 ? "exchange2"
                     : fam.coupling == CouplingKind::kZeta3   ? "zeta3"
                                                              : "constant_matrix";
  return CoefficientField(d, m, 2, std::move(f), std::string("builtin/") + kind);
}

// ---------------------------------------------------------------------------

DerivativeBundle::DerivativeBundle(CoefficientField field, int order)
    : field_(std::move(field)), order_(order) {}

void DerivativeBundle::require(int level, const char* what) const {
  if (order_ < level)
    throw InvalidArgument(std::string("DerivativeBundle: ") + what + " needs derivative order " +
                          std::to_string(level));
}

Mat DerivativeBundle::jac_b(const Point& x) const {
  require(1, "jac_b");
  return field_.functions().jac_b(x);
}
std::vector<Mat> DerivativeBundle::dQ(const Point& x) const {
  require(1, "dQ");
  return field_.functions().dQ(x);
}
std::vector<Mat> DerivativeBundle::dC(const Point& x) const {
  require(1, "dC");
  return field_.functions().dC(x);
}
std::vector<Mat> DerivativeBundle::d2Q(const Point& x) const {
  require(2, "d2Q");
  return field_.functions().d2Q(x);
}
std::vector<Mat> DerivativeBundle::d2C(const Point& x) const {
  require(2, "d2C");
  return field_.functions().d2C(x);
}
std::vector<Vec> DerivativeBundle::d2b(const Point& x) const {
  require(2, "d2b");
  return field_.functions().d2b(x);
}

double DerivativeBundle::r(const Point& x) const {
  const Mat j = jac_b(x);
  const Mat sym = 0.5 * (j + j.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double DerivativeBundle::mu_Q(const Point& x) const {
  Eigen::SelfAdjointEigenSolver<Mat> es(field_.Q(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

double first_order_norm(const std::vector<Mat>& parts) {
  double acc = 0.0;
  for (const auto& p : parts) acc += p.squaredNorm();
  return std::sqrt(acc);
}

// Distinct multi-indices of length two: (k, l) with k <= l.
double second_order_norm(const std::vector<Mat>& parts, int d) {
  double acc = 0.0;
  for (int k = 0; k < d; ++k)
    for (int l = k; l < d; ++l) acc += parts[k * d + l].squaredNorm();
  return std::sqrt(acc);
}

}  // namespace

double DerivativeBundle::Q1(const Point& x) const { return first_order_norm(dQ(x)); }
double DerivativeBundle::C1(const Point& x) const { return first_order_norm(dC(x)); }
double DerivativeBundle::Q2(const Point& x) const {
  return second_order_norm(d2Q(x), field_.dim_d());
}
double DerivativeBundle::C2(const Point& x) const {
  return second_order_norm(d2C(x), field_.dim_d());
}
double DerivativeBundle::B2(const Point& x) const {
  double acc = 0.0;
  for (const auto& v : d2b(x)) acc += v.squaredNorm();
  return std::sqrt(acc);
}

DerivativeBundle derivative_bundle(const CoefficientField& field, int order) {
  if (order < 1 || order > 2) throw InvalidArgument("derivative_bundle: order must be 1 or 2");
  if (field.smoothness_order() < order)
    throw InvalidArgument("derivative_bundle: field smoothness_order " +
                          std::to_string(field.smoothness_order()) + " is below requested order " +
                          std::to_string(order));
  return DerivativeBundle(field, order);
}

}  // namespace kolmo
