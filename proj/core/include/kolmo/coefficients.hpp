#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kolmo/types.hpp"

namespace kolmo {

/// Values of the three coefficients at one point.
struct CoefficientValues {
  Mat Q;  // d x d, symmetric
  Vec b;  // d
  Mat C;  // m x m
};

/// Callables describing a coefficient field and, optionally, its analytic
/// derivatives. Derivative lists are indexed by direction: `dQ(x)[k]` is
/// the partial derivative of Q along x_k, `d2Q(x)[k * d + l]` the mixed
/// second derivative along x_k, x_l.
struct FieldFunctions {
  std::function<Mat(const Point&)> Q;
  std::function<Vec(const Point&)> b;
  std::function<Mat(const Point&)> C;

  // Required for smoothness order >= 1.
  std::function<Mat(const Point&)> jac_b;  // (i, k) = d b_i / d x_k
  std::function<std::vector<Mat>(const Point&)> dQ;
  std::function<std::vector<Mat>(const Point&)> dC;

  // Required for smoothness order >= 2.
  std::function<std::vector<Mat>(const Point&)> d2Q;
  std::function<std::vector<Mat>(const Point&)> d2C;
  std::function<std::vector<Vec>(const Point&)> d2b;
};

/// Diffusion Q, drift b and coupling C of a weakly coupled Kolmogorov
/// system  A u = Tr(Q D^2 u) + <b, grad u> + C u.
///
/// Immutable and cheap to copy (shared state).
class CoefficientField {
 public:
  /// `smoothness_order` in {1, 2, 3} says how many derivative levels `fns`
  /// provides analytically (levels above 2 have no callables; 3 only
  /// records that the field is smoother).
  CoefficientField(int dim_d, int dim_m, int smoothness_order, FieldFunctions fns,
                   std::string label = "custom");

  int dim_d() const { return dim_d_; }
  int dim_m() const { return dim_m_; }
  int smoothness_order() const { return smoothness_order_; }
  const std::string& label() const { return label_; }

  /// Validated evaluation; throws InvalidArgument on non-finite or
  /// mis-sized x, NumericalError on non-finite or non-symmetric output.
  CoefficientValues evaluate(const Point& x) const;

  Mat Q(const Point& x) const;
  Vec b(const Point& x) const;
  Mat C(const Point& x) const;

  const FieldFunctions& functions() const { return *fns_; }

 private:
  void check_point(const Point& x) const;

  int dim_d_;
  int dim_m_;
  int smoothness_order_;
  std::shared_ptr<const FieldFunctions> fns_;
  std::string label_;
};

enum class CouplingKind {
  kExchange2,       // m = 2, C = c(x) [[-1, 1], [1, -1]], c = 1 / (1 + |x|^2)
  kZeta3,           // m = 3 zero row/column-sum family, zeta_i = i / (1 + |x|^2)
  kConstantMatrix,  // user matrix, constant in x
};

/// Parameters of the builtin family  Q(x) = (1+|x|^2)^gamma Q0,
/// b(x) = -b0 x (1+|x|^2)^beta, with C chosen by `coupling`.
struct BuiltinFamily {
  int dim_d = 1;
  int dim_m = 2;
  double gamma = 0.0;
  double beta = 1.0;
  double b0 = 1.0;
  Mat Q0 = Mat::Identity(1, 1);
  CouplingKind coupling = CouplingKind::kExchange2;
  Mat constant_C;  // used by kConstantMatrix only
};

/// Builds a builtin field with analytic first and second derivatives.
/// beta = 0, gamma = 0 gives the Ornstein-Uhlenbeck drift b = -b0 x.
CoefficientField make_builtin(const BuiltinFamily& family);

/// Matrix of the three-component family with the given zeta values.
Mat zeta3_matrix(double zeta1, double zeta2, double zeta3);

/// Analytic derivatives of a field plus the scalar quantities built from
/// them (r, mu_Q and the Frobenius-type norms of derivatives).
class DerivativeBundle {
 public:
  DerivativeBundle(CoefficientField field, int order);

  int order() const { return order_; }
  const CoefficientField& field() const { return field_; }

  Mat jac_b(const Point& x) const;
  std::vector<Mat> dQ(const Point& x) const;
  std::vector<Mat> dC(const Point& x) const;
  std::vector<Mat> d2Q(const Point& x) const;
  std::vector<Mat> d2C(const Point& x) const;
  std::vector<Vec> d2b(const Point& x) const;

  /// Largest eigenvalue of the symmetrized drift Jacobian.
  double r(const Point& x) const;
  /// Smallest eigenvalue of Q(x).
  double mu_Q(const Point& x) const;
  /// (sum_{|alpha|=1} |D^alpha Q|^2)^(1/2), entrywise Euclidean norm.
  double Q1(const Point& x) const;
  /// Same over distinct multi-indices of length two.
  double Q2(const Point& x) const;
  double C1(const Point& x) const;
  double C2(const Point& x) const;
  /// (sum_{i,j} |D_ij b|^2)^(1/2).
  double B2(const Point& x) const;

 private:
  void require(int level, const char* what) const;

  CoefficientField field_;
  int order_;
};

/// Throws InvalidArgument when the field does not supply `order` analytic
/// derivative levels.
DerivativeBundle derivative_bundle(const CoefficientField& field, int order);

}  // namespace kolmo
