#pragma once

#include <Eigen/Core>

namespace kolmo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// A point of R^d.
using Point = Eigen::VectorXd;

}  // namespace kolmo
