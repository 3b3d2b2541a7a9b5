#pragma once

#include <complex>
#include <Eigen/Dense>

namespace tbc2d {

using Real = double;
using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Real pi = 3.14159265358979323846;

// exp(-i pi/4), the phase carried by the half-order boundary operators
inline const Complex phase_m4 = Complex(std::sqrt(0.5), -std::sqrt(0.5));
// exp(+i pi/4)
inline const Complex phase_p4 = Complex(std::sqrt(0.5), std::sqrt(0.5));

}  // namespace tbc2d
