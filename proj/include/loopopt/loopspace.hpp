#pragma once

#include "loopopt/loop_curve.hpp"

#include <optional>
#include <utility>

// Discrete differential calculus on closed plane curves. Derivatives are
// spectral, integrals are uniform trapezoidal sums with weight 2*pi/N.
namespace loopopt {

/// Spectral derivative c'(theta_j).
TangentField derivative(const LoopCurve& c);
TangentField derivative(const TangentField& v);

/// |c'(theta_j)|; zero speed is reported, not rejected.
Eigen::VectorXd speed(const LoopCurve& c);

/// Chord speeds N/(2*pi) * |c_{j+1} - c_j|.
Eigen::VectorXd chord_speed(const LoopCurve& c);

/// Default immersion threshold 1e-8 * max speed.
double default_immersion_eps(const LoopCurve& c);

/// True iff both the spectral speed and the chord speed stay above eps at
/// every node. A repeated sample (zero chord) is treated as a vanishing
/// derivative even where the spectral interpolant rings.
bool is_immersion(const LoopCurve& c, double eps);
bool is_immersion(const LoopCurve& c);

/// Throws GeometryError("not an immersion") unless is_immersion(c).
void require_immersion(const LoopCurve& c);

/// True iff every curve on the chart segment c + tau*step, tau in [0,1],
/// stays immersed with threshold eps. Both nodal derivatives and chords are
/// affine in tau, so this reduces to point-to-segment distances.
bool segment_stays_immersed(const LoopCurve& c, const TangentField& step, double eps);

/// Trapezoidal integral of a scalar grid function over S^1.
double integrate(const Eigen::VectorXd& f);

/// L(c) = int |c'| dtheta.
double arclength(const LoopCurve& c);

/// Signed enclosed area (1/2) int (x y' - y x') dtheta; positive for
/// counterclockwise curves.
double enclosed_area(const LoopCurve& c);

/// (c', N_c) with N_c = (-y', x'), i.e. c' rotated by +pi/2 and not normalized.
std::pair<TangentField, TangentField> tangent_normal(const LoopCurve& c);

/// Unit tangent c'/|c'|.
TangentField unit_tangent(const LoopCurve& c);

/// k = (x' y'' - y' x'') / |c'|^3; +1/r on counterclockwise circles.
Eigen::VectorXd signed_curvature(const LoopCurve& c);

/// Cumulative arclength S(theta_j) from theta = 0 (spectral antiderivative of
/// the speed), S(0) = 0.
Eigen::VectorXd cumulative_arclength(const LoopCurve& c);

/// True iff the speed is constant up to rel_tol * mean speed.
bool is_arclength_uniform(const LoopCurve& c, double rel_tol = 1e-12);

/// Arclength reparametrization gamma(s_i), s_i = i*L/N, starting at c(0).
/// Parameters are found by monotone cubic inversion of the cumulative
/// arclength, polished by Newton's method on the spectral arclength function,
/// and the curve is evaluated by trigonometric interpolation.
LoopCurve resample_arclength(const LoopCurve& c);

/// Parameters theta with S(theta) = i*L/N, i = 0..N-1.
Eigen::VectorXd arclength_parameters(const LoopCurve& c);

/// Square-root velocity transform q = c'/sqrt|c'|.
TangentField srvt(const LoopCurve& c);

/// c(theta) = base + int_0^theta |q| q dt. Throws GeometryError("SRVT image
/// not closed") if the mean of |q| q exceeds 1e-6 times its max norm.
LoopCurve srvt_inverse(const TangentField& q, const Eigen::Vector2d& base);

/// Directional derivative of the SRVT map at c in direction u:
/// u'/sqrt|c'| - <u', c'> c' / (2 |c'|^{5/2}).
TangentField srvt_differential(const LoopCurve& c, const TangentField& u);

}  // namespace loopopt
