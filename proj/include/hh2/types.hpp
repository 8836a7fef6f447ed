#pragma once

#include <complex>

#include <Eigen/Dense>

namespace hh2 {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;
using Index = Eigen::Index;

}  // namespace hh2
