#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ellspin {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RMatrix4 = Eigen::Matrix4cd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace ellspin
