#pragma once

#include <Eigen/Dense>

namespace bsecg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace bsecg
