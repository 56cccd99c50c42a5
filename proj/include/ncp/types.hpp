#pragma once

#include <Eigen/Dense>

namespace ncp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace ncp
