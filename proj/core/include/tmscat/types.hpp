#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace tmscat {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Closed interval on the scattering axis.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// The channel-mixing matrix sigma_3 + i sigma_2 = [[1, 1], [-1, -1]]. Nilpotent.
inline Mat2 channel_mixer() {
  Mat2 m;
  m << 1.0, 1.0, -1.0, -1.0;
  return m;
}

}  // namespace tmscat
