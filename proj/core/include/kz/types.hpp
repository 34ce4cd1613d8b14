#pragma once

#include <complex>

#include <Eigen/Dense>

namespace kz {

// Everything downstream works over complex Hilbert spaces of finite
// dimension, so dense Eigen types are the natural carriers.
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexOperator = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

}  // namespace kz
