#pragma once

#include "loopopt/loop_curve.hpp"

#include <optional>
#include <string>
#include <vector>

namespace loopopt {

/// Flat-L2 length gradients along c_k = ((-1)^k / k) id, k = 1 .. k_max.
struct SequenceReport {
  std::vector<int> k_values;
  std::vector<double> curve_norms;
  std::vector<TangentField> grad_fields;  // thinned: at most 64 fields
  std::vector<int> grad_field_k;
  /// consecutive_grad_gaps[i] = |grad(c_{k_i + 1}) - grad(c_{k_i})|_{L2}.
  std::vector<double> consecutive_grad_gaps;
};

SequenceReport oscillating_sequence(int k_max, std::size_t n);

/// CSV "k,curve_norm,grad_gap"; the gap column is empty on the last row.
std::string sequence_csv(const SequenceReport& r);

struct RegularityReport {
  double length = 0.0;
  std::vector<int> modes;
  std::vector<double> curve_mag;   // |gamma_hat_k|
  std::vector<double> source_mag;  // |(-gamma_ss)_hat_k| = k_s^2 |gamma_hat_k|
  std::vector<double> grad_mag;    // |(grad L)_hat_k| from the kernel quadrature
  std::optional<double> curve_exponent;
  std::optional<double> source_exponent;
  std::optional<double> grad_exponent;
  /// max_k | grad_mag_k - source_mag_k / (1 + k_s^2) |.
  double diagonal_residual = 0.0;
  std::string flag;
};

/// Fourier decay of the H1 length gradient on the arclength reparametrization
/// of c, for modes 0 .. modes-1. Exponents are fitted where more than two
/// modes sit above the 1e-12 relative floor.
RegularityReport h1_gradient_regularity(const LoopCurve& c, int modes);

/// CSV "mode,curve_mag,grad_mag".
std::string regularity_csv(const RegularityReport& r);

}  // namespace loopopt
