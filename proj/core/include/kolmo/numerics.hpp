#pragma once

#include <span>
#include <vector>

#include "kolmo/types.hpp"

namespace kolmo {

/// Least-squares line y = slope * x + intercept; `residual` is the RMS of
/// the fit residuals.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// `count` geometrically spaced values from `lo` to `hi` inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
Mat expm(const Mat& a);

/// Trapezoid rule over an increasing abscissa.
double trapezoid(std::span<const double> t, std::span<const double> y);

}  // namespace kolmo
