#pragma once

#include <complex>

#include <Eigen/Core>

namespace spd {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPsdTol = 1e-10;
inline constexpr double kRankTolFactor = 1e-10;    // relative to the largest singular value
inline constexpr double kCommuteTolFactor = 1e-10; // scaled by matrix dimension

}  // namespace spd
