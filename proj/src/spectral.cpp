#include "loopopt/spectral.hpp"

#include "loopopt/error.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace loopopt::spectral {

Spectrum forward(const Eigen::VectorXd& samples) {
  Eigen::FFT<double> fft;
  std::vector<double> in(samples.data(), samples.data() + samples.size());
  Spectrum out;
  fft.fwd(out, in);
  return out;
}

Eigen::VectorXd inverse(const Spectrum& coeffs) {
  Eigen::FFT<double> fft;
  Spectrum out;
  fft.inv(out, coeffs);
  Eigen::VectorXd r(static_cast<Eigen::Index>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) r(static_cast<Eigen::Index>(i)) = out[i].real();
  return r;
}

double wavenumber(std::size_t i, std::size_t n) {
  if (2 * i == n) return 0.0;
  return i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
}

Eigen::VectorXd derivative(const Eigen::VectorXd& samples, int order) {
  if (order < 0) throw ValidationError("derivative order must be nonnegative");
  if (order == 0) return samples;
  const std::complex<double> i_unit(0.0, 1.0);
  return apply_symbol(samples, [&](double k) {
    std::complex<double> m(1.0, 0.0);
    for (int i = 0; i < order; ++i) m *= i_unit * k;
    return m;
  });
}

Eigen::VectorXd antiderivative(const Eigen::VectorXd& samples) {
  const std::complex<double> i_unit(0.0, 1.0);
  Eigen::VectorXd f = apply_symbol(samples, [&](double k) {
    return k == 0.0 ? std::complex<double>(0.0) : 1.0 / (i_unit * k);
  });
  f.array() -= f(0);
  return f;
}

Eigen::MatrixXd differentiation_matrix(std::size_t n) {
  const auto sz = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(sz, sz);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (Eigen::Index i = 0; i < sz; ++i) {
    for (Eigen::Index j = 0; j < sz; ++j) {
      if (i == j) continue;
      const Eigen::Index m = i - j;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(static_cast<double>(m) * h / 2.0);
    }
  }
  return d;
}

TrigInterpolant::TrigInterpolant(const Eigen::VectorXd& samples) : n_(static_cast<std::size_t>(samples.size())) {
  const Spectrum s = forward(samples);
  const double scale = 1.0 / static_cast<double>(n_);
  mean_ = s[0].real() * scale;
  nyquist_ = s[n_ / 2].real() * scale;
  positive_.resize(n_ / 2 - 1);
  for (std::size_t k = 1; k < n_ / 2; ++k) positive_[k - 1] = 2.0 * scale * s[k];
}

double TrigInterpolant::operator()(double theta) const {
  double acc = mean_ + nyquist_ * std::cos(0.5 * static_cast<double>(n_) * theta);
  for (std::size_t k = 1; k <= positive_.size(); ++k) {
    const double a = static_cast<double>(k) * theta;
    acc += positive_[k - 1].real() * std::cos(a) - positive_[k - 1].imag() * std::sin(a);
  }
  return acc;
}

double TrigInterpolant::derivative(double theta) const {
  // The Nyquist term is dropped, matching the grid derivative.
  double acc = 0.0;
  for (std::size_t k = 1; k <= positive_.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double a = kk * theta;
    acc += -kk * (positive_[k - 1].real() * std::sin(a) + positive_[k - 1].imag() * std::cos(a));
  }
  return acc;
}

}  // namespace loopopt::spectral
