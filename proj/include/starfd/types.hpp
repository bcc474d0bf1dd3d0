#pragma once

#include <complex>

#include <Eigen/Dense>

namespace starfd {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace starfd
