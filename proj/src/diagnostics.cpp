#include "loopopt/diagnostics.hpp"

#include "loopopt/error.hpp"
#include "loopopt/io.hpp"
#include "loopopt/loopspace.hpp"
#include "loopopt/metrics.hpp"
#include "loopopt/objectives.hpp"
#include "loopopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace loopopt {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |v_hat_k| for a plane field, normalized so that cos(k theta) e_x has magnitude 1/2.
std::vector<double> mode_magnitudes(const GridArray& v, int modes) {
  const spectral::Spectrum fx = spectral::forward(v.col(0));
  const spectral::Spectrum fy = spectral::forward(v.col(1));
  const double n = static_cast<double>(v.rows());
  std::vector<double> out(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) {
    out[static_cast<std::size_t>(k)] = std::sqrt(std::norm(fx[k]) + std::norm(fy[k])) / n;
  }
  return out;
}

// Least-squares slope of log mag against log k over modes k >= 1 above the floor.
std::optional<double> decay_exponent(const std::vector<double>& mag) {
  double top = 0.0;
  for (std::size_t k = 1; k < mag.size(); ++k) top = std::max(top, mag[k]);
  if (top == 0.0) return std::nullopt;
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k < mag.size(); ++k) {
    if (mag[k] > 1e-12 * top) {
      lx.push_back(std::log(static_cast<double>(k)));
      ly.push_back(std::log(mag[k]));
    }
  }
  if (lx.size() <= 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

SequenceReport oscillating_sequence(int k_max, std::size_t n) {
  if (k_max < 2) throw ValidationError("oscillating_sequence: k_max must be at least 2");
  const ObjectiveSpec length = ObjectiveSpec::length();
  const MetricSpec flat = MetricSpec::flat_l2();
  const LoopCurve id = sample_circle(1.0, n);
  const int stride = (k_max + 63) / 64;

  SequenceReport r;
  std::optional<TangentField> previous;
  for (int k = 1; k <= k_max; ++k) {
    const double scale = (k % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(k);
    const LoopCurve ck(scale * id.points());
    const TangentField g = gradient(length, flat, ck);
    r.k_values.push_back(k);
    r.curve_norms.push_back(norm(flat, ck, position_field(ck)));
    if (previous) r.consecutive_grad_gaps.push_back(norm(flat, ck, g - *previous));
    if ((k - 1) % stride == 0) {
      r.grad_fields.push_back(g);
      r.grad_field_k.push_back(k);
    }
    previous = g;
  }
  return r;
}

std::string sequence_csv(const SequenceReport& r) {
  std::ostringstream os;
  os << "k,curve_norm,grad_gap\n";
  for (std::size_t i = 0; i < r.k_values.size(); ++i) {
    os << r.k_values[i] << ',' << format_double(r.curve_norms[i]) << ',';
    if (i < r.consecutive_grad_gaps.size()) os << format_double(r.consecutive_grad_gaps[i]);
    os << '\n';
  }
  return os.str();
}

RegularityReport h1_gradient_regularity(const LoopCurve& c, int modes) {
  if (modes < 1) throw ValidationError("h1_gradient_regularity: modes must be positive");
  require_immersion(c);
  RegularityReport r;
  // Equal chords: a polygon sampled at equal arclength steps. Its spectral
  // speed rings at the corners, so the polygon length is used directly.
  const Eigen::VectorXd chords = chord_speed(c);
  const bool equal_chords = (chords.array() - chords.mean()).abs().maxCoeff() <= 1e-10 * chords.mean();
  std::optional<LoopCurve> gamma;
  if (is_arclength_uniform(c, 1e-10)) {
    gamma = c;
    r.length = arclength(c);
  } else if (equal_chords) {
    gamma = c;
    r.length = kTwoPi * chords.mean();
  } else {
    gamma = resample_arclength(c);
    r.length = arclength(*gamma);
  }
  const int n = static_cast<int>(gamma->size());
  modes = std::min(modes, n / 2);
  const TangentField u = h1_length_gradient_kernel(*gamma, r.length);
  r.curve_mag = mode_magnitudes(gamma->points(), modes);
  r.grad_mag = mode_magnitudes(u.vectors(), modes);
  for (int k = 0; k < modes; ++k) {
    const double ks = kTwoPi * k / r.length;
    r.modes.push_back(k);
    r.source_mag.push_back(ks * ks * r.curve_mag[static_cast<std::size_t>(k)]);
    const double expected = r.source_mag.back() / (1.0 + ks * ks);
    r.diagonal_residual = std::max(r.diagonal_residual, std::abs(r.grad_mag[static_cast<std::size_t>(k)] - expected));
  }
  r.curve_exponent = decay_exponent(r.curve_mag);
  r.source_exponent = decay_exponent(r.source_mag);
  r.grad_exponent = decay_exponent(r.grad_mag);

  double top = 0.0;
  for (int k = 1; k < modes; ++k) top = std::max(top, r.curve_mag[static_cast<std::size_t>(k)]);
  const bool reaches_floor = modes > 1 && r.curve_mag.back() <= 1e-12 * std::max(top, 1.0);
  if (!r.curve_exponent && !r.grad_exponent) {
    r.flag = "spectral floor";
  } else if (reaches_floor) {
    r.flag = "no finite-order obstruction at this resolution";
  } else {
    r.flag = "algebraic decay";
  }
  return r;
}

std::string regularity_csv(const RegularityReport& r) {
  std::ostringstream os;
  os << "mode,curve_mag,grad_mag\n";
  for (std::size_t i = 0; i < r.modes.size(); ++i) {
    os << r.modes[i] << ',' << format_double(r.curve_mag[i]) << ',' << format_double(r.grad_mag[i]) << '\n';
  }
  return os.str();
}

}  // namespace loopopt
