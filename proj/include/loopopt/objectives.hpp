#pragma once

#include "loopopt/loop_curve.hpp"
#include "loopopt/metrics.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace loopopt {

enum class ObjectiveKind { Length, TrackIdentity, TrackRegularized, LoopEnergy };

/// Functionals on closed plane curves:
///  - Length:           int |c'| dtheta
///  - TrackIdentity:    int |c(theta) - (cos theta, sin theta)|^2 dtheta
///  - TrackRegularized: int |c - g|^2 dtheta + lambda int |c|^2 dtheta
///  - LoopEnergy:       1/2 int |c'|^2 dtheta (flat target R^2)
class ObjectiveSpec {
 public:
  static ObjectiveSpec length();
  static ObjectiveSpec track_identity();
  static ObjectiveSpec track_regularized(LoopCurve target, double lambda);
  static ObjectiveSpec loop_energy();

  ObjectiveKind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  const std::optional<LoopCurve>& target() const noexcept { return target_; }
  const std::optional<double>& f_low() const noexcept { return f_low_; }
  ObjectiveSpec& with_f_low(double f_low);

  /// Length and every gradient under a speed-weighted metric need c' != 0.
  bool needs_immersion(const MetricSpec& m) const;

 private:
  ObjectiveSpec(ObjectiveKind kind, std::optional<LoopCurve> target, double lambda);

  ObjectiveKind kind_;
  std::optional<LoopCurve> target_;
  double lambda_ = 0.0;
  std::optional<double> f_low_;
};

/// CLI spelling: length | track-id | track-reg | energy.
ObjectiveKind parse_objective(std::string_view name);
std::string objective_name(ObjectiveKind kind);

/// g(theta) = (cos theta, 3/2 sin theta), the default tracking target.
LoopCurve default_tracking_target(std::size_t n);

/// Unique critical point g / (1 + lambda) of TrackRegularized.
LoopCurve tracking_minimizer(const ObjectiveSpec& o);

double value(const ObjectiveSpec& o, const LoopCurve& c);

/// Directional derivative Df(c)[v] of the discrete functional.
double differential(const ObjectiveSpec& o, const LoopCurve& c, const TangentField& v);

/// Flat-L2 representer w of the differential: Df(c)[v] = flat_inner(w, v).
TangentField flat_representer(const ObjectiveSpec& o, const LoopCurve& c);

/// Riemannian gradient, analytic where a closed form exists:
///  (Length, FlatL2)        -k N_c
///  (Length, InvariantL2)   -k N_c / |c'|   (curvature vector)
///  (Length, InvariantH1)   gamma - G * gamma with the periodic Green's kernel
///                          cosh(|s - t| - L/2) / (2 sinh(L/2)) on the
///                          arclength reparametrization
///  (TrackIdentity, FlatL2) 2 (c - id)
///  (TrackRegularized, FlatL2) 2 ((1 + lambda) c - g)
///  (LoopEnergy, InvariantH1) -s (1 - d_s^2)^{-1} c_ss on curves of constant speed s
/// and riesz(m, c, flat_representer(o, c)) otherwise.
TangentField gradient(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c);

/// Always the Riesz route.
TangentField numeric_gradient(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c);

/// H1 length gradient on an arclength-uniform curve by trapezoidal kernel
/// quadrature (with the h^2/12 correction for the kernel's kink at s = t).
TangentField h1_length_gradient_kernel(const LoopCurve& gamma);

/// Same quadrature with the node spacing taken as length / N and no check
/// that gamma is arclength-uniform (used on sampled polygons, whose spectral
/// speed is polluted by Gibbs oscillations at the corners).
TangentField h1_length_gradient_kernel(const LoopCurve& gamma, double length);

/// Riemannian Hessian Hess f(c)[v] = d(grad f)(c; v) - B_m(c, v, grad f).
/// Exact 2(1 + lambda) v for the tracking objectives under FlatL2; otherwise
/// the derivative of the gradient is a central difference.
TangentField hessian_apply(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                           const TangentField& v);

/// Finite-difference branch of hessian_apply, exposed for cross-checks.
/// The stencil c +- t v shrinks (up to 40 halvings) to stay immersed.
TangentField hessian_apply_fd(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                              const TangentField& v);

}  // namespace loopopt
