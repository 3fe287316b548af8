#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

// Fourier tools on the uniform periodic grid theta_j = 2*pi*j/N, N even.
// Odd-order derivatives annihilate the Nyquist mode, so the first-derivative
// operator is real and antisymmetric and D^2 := D * D.
namespace loopopt::spectral {

using Spectrum = std::vector<std::complex<double>>;

Spectrum forward(const Eigen::VectorXd& samples);
Eigen::VectorXd inverse(const Spectrum& coeffs);

/// Signed integer wavenumber of FFT bin i, with the Nyquist bin mapped to 0.
double wavenumber(std::size_t i, std::size_t n);

/// d/dtheta applied `order` times.
Eigen::VectorXd derivative(const Eigen::VectorXd& samples, int order = 1);

/// Mean-free antiderivative F with F(0) = 0 of the mean-free part of samples.
Eigen::VectorXd antiderivative(const Eigen::VectorXd& samples);

/// Dense first-derivative matrix; D * f equals derivative(f).
Eigen::MatrixXd differentiation_matrix(std::size_t n);

/// Applies u_hat[k] *= multiplier(k) for every FFT bin (k from wavenumber()).
template <class Fn>
Eigen::VectorXd apply_symbol(const Eigen::VectorXd& samples, Fn&& multiplier) {
  Spectrum s = forward(samples);
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) s[i] *= multiplier(wavenumber(i, n));
  return inverse(s);
}

/// Trigonometric interpolant of the grid samples evaluated at arbitrary
/// parameters. The Nyquist mode is split symmetrically (cosine term).
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Eigen::VectorXd& samples);
  double operator()(double theta) const;
  double derivative(double theta) const;

 private:
  double mean_;
  double nyquist_;
  std::vector<std::complex<double>> positive_;  // bins 1 .. n/2-1, scaled by 2/n
  std::size_t n_;
};

}  // namespace loopopt::spectral
