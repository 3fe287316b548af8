#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance runner.

#include "loopopt/loop_curve.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <numbers>
#include <vector>

namespace loopopt::testing {

// (1 - d_s^2)^{-1}(-gamma_ss) mode by mode on an arclength-uniform grid.
inline GridArray fourier_h1_length_gradient(const LoopCurve& gamma, double length) {
  Eigen::FFT<double> fft;
  const auto n = static_cast<Eigen::Index>(gamma.size());
  GridArray out(n, 2);
  for (int col = 0; col < 2; ++col) {
    std::vector<double> x(gamma.points().col(col).data(), gamma.points().col(col).data() + n);
    std::vector<std::complex<double>> xh;
    fft.fwd(xh, x);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index k = i <= n / 2 ? i : i - n;
      const double ks = 2 * std::numbers::pi * static_cast<double>(k) / length;
      xh[i] *= (i == n / 2) ? 0.0 : ks * ks / (1.0 + ks * ks);
    }
    std::vector<double> y;
    fft.inv(y, xh);
    for (Eigen::Index j = 0; j < n; ++j) out(j, col) = y[j];
  }
  return out;
}

// Projection onto the grid kernel of d/dtheta: constants and the alternating mode.
inline TangentField kernel_projection(const TangentField& u) {
  const auto n = static_cast<Eigen::Index>(u.size());
  GridArray out(n, 2);
  for (int col = 0; col < 2; ++col) {
    double mean = 0.0, alt = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      mean += u.vectors()(j, col) / n;
      alt += (j % 2 ? -1.0 : 1.0) * u.vectors()(j, col) / n;
    }
    for (Eigen::Index j = 0; j < n; ++j) out(j, col) = mean + (j % 2 ? -1.0 : 1.0) * alt;
  }
  return TangentField(std::move(out));
}

}  // namespace loopopt::testing
