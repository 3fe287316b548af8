#include "loopopt/objectives.hpp"

#include "loopopt/error.hpp"
#include "loopopt/loopspace.hpp"
#include "loopopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace loopopt {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

LoopCurve identity_curve(std::size_t n) { return sample_circle(1.0, n); }

// Periodic Green's function of (1 - d^2/ds^2) on a circle of length L,
// cosh(r - L/2) / (2 sinh(L/2)) for r in [0, L], in overflow-free form.
double green_kernel(double r, double length) {
  return (std::exp(r - length) + std::exp(-r)) / (-2.0 * std::expm1(-length));
}

TangentField length_gradient_h1(const LoopCurve& c) {
  if (is_arclength_uniform(c)) return h1_length_gradient_kernel(c);
  const Eigen::VectorXd theta = arclength_parameters(c);
  const spectral::TrigInterpolant fx(c.points().col(0));
  const spectral::TrigInterpolant fy(c.points().col(1));
  GridArray gamma(theta.size(), 2);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    gamma(i, 0) = fx(theta(i));
    gamma(i, 1) = fy(theta(i));
  }
  // The resampled nodes are equally spaced in arclength along c itself; the
  // trigonometric interpolant through them is only approximately so.
  const double length = arclength(c);
  const TangentField on_gamma = h1_length_gradient_kernel(LoopCurve(std::move(gamma)), length);
  // Pull back to the nodes of c: node theta_j sits at arclength S(theta_j).
  const Eigen::VectorXd cum = cumulative_arclength(c);
  const spectral::TrigInterpolant gx(on_gamma.vectors().col(0));
  const spectral::TrigInterpolant gy(on_gamma.vectors().col(1));
  GridArray out(cum.size(), 2);
  for (Eigen::Index j = 0; j < cum.size(); ++j) {
    const double sigma = kTwoPi * cum(j) / length;
    out(j, 0) = gx(sigma);
    out(j, 1) = gy(sigma);
  }
  return TangentField(std::move(out));
}

TangentField energy_gradient_h1_constant_speed(const LoopCurve& c) {
  // Constant speed s: grad E = -s (1 - d_s^2)^{-1} c_ss, i.e. mode k of c is
  // multiplied by s k^2 / (s^2 + k^2) in the theta variable.
  const double s = speed(c).mean();
  GridArray out(static_cast<Eigen::Index>(c.size()), 2);
  for (int k = 0; k < 2; ++k) {
    out.col(k) = spectral::apply_symbol(c.points().col(k), [s](double kk) {
      return std::complex<double>(s * kk * kk / (s * s + kk * kk));
    });
  }
  return TangentField(std::move(out));
}

}  // namespace

ObjectiveSpec::ObjectiveSpec(ObjectiveKind kind, std::optional<LoopCurve> target, double lambda)
    : kind_(kind), target_(std::move(target)), lambda_(lambda) {
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) throw ValidationError("lambda must be a finite value >= 0");
  if (target_.has_value() != (kind_ == ObjectiveKind::TrackRegularized)) {
    throw ValidationError("a target curve is required exactly for the regularized tracking objective");
  }
}

ObjectiveSpec ObjectiveSpec::length() { return ObjectiveSpec(ObjectiveKind::Length, std::nullopt, 0.0); }
ObjectiveSpec ObjectiveSpec::track_identity() {
  return ObjectiveSpec(ObjectiveKind::TrackIdentity, std::nullopt, 0.0).with_f_low(0.0);
}
ObjectiveSpec ObjectiveSpec::track_regularized(LoopCurve target, double lambda) {
  ObjectiveSpec o(ObjectiveKind::TrackRegularized, std::move(target), lambda);
  o.f_low_ = value(o, tracking_minimizer(o));
  return o;
}
ObjectiveSpec ObjectiveSpec::loop_energy() {
  return ObjectiveSpec(ObjectiveKind::LoopEnergy, std::nullopt, 0.0).with_f_low(0.0);
}

ObjectiveSpec& ObjectiveSpec::with_f_low(double f_low) {
  f_low_ = f_low;
  return *this;
}

bool ObjectiveSpec::needs_immersion(const MetricSpec& m) const {
  return kind_ == ObjectiveKind::Length || m.needs_immersion();
}

ObjectiveKind parse_objective(std::string_view name) {
  if (name == "length") return ObjectiveKind::Length;
  if (name == "track-id") return ObjectiveKind::TrackIdentity;
  if (name == "track-reg") return ObjectiveKind::TrackRegularized;
  if (name == "energy") return ObjectiveKind::LoopEnergy;
  throw ValidationError("unknown objective '" + std::string(name) + "' (expected length|track-id|track-reg|energy)");
}

std::string objective_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Length: return "length";
    case ObjectiveKind::TrackIdentity: return "track-id";
    case ObjectiveKind::TrackRegularized: return "track-reg";
    case ObjectiveKind::LoopEnergy: return "energy";
  }
  return "?";
}

LoopCurve default_tracking_target(std::size_t n) {
  return sample_curve(n, [](double t) { return Eigen::Vector2d(std::cos(t), 1.5 * std::sin(t)); });
}

LoopCurve tracking_minimizer(const ObjectiveSpec& o) {
  if (o.kind() != ObjectiveKind::TrackRegularized) throw ValidationError("tracking_minimizer needs a target");
  return LoopCurve(o.target()->points() / (1.0 + o.lambda()));
}

double value(const ObjectiveSpec& o, const LoopCurve& c) {
  const double w = kTwoPi / static_cast<double>(c.size());
  switch (o.kind()) {
    case ObjectiveKind::Length:
      return arclength(c);
    case ObjectiveKind::TrackIdentity:
      return w * (c.points() - identity_curve(c.size()).points()).squaredNorm();
    case ObjectiveKind::TrackRegularized: {
      require_same_grid(c.size(), o.target()->size());
      return w * ((c.points() - o.target()->points()).squaredNorm() + o.lambda() * c.points().squaredNorm());
    }
    case ObjectiveKind::LoopEnergy:
      return 0.5 * w * derivative(c).vectors().squaredNorm();
  }
  return 0.0;
}

double differential(const ObjectiveSpec& o, const LoopCurve& c, const TangentField& v) {
  require_same_grid(c.size(), v.size());
  switch (o.kind()) {
    case ObjectiveKind::Length:
      return flat_inner(unit_tangent(c), derivative(v));
    case ObjectiveKind::LoopEnergy:
      return flat_inner(derivative(c), derivative(v));
    default:
      return flat_inner(flat_representer(o, c), v);
  }
}

TangentField flat_representer(const ObjectiveSpec& o, const LoopCurve& c) {
  switch (o.kind()) {
    case ObjectiveKind::Length:
      return -derivative(unit_tangent(c));
    case ObjectiveKind::TrackIdentity:
      return 2.0 * displacement(c, identity_curve(c.size()));
    case ObjectiveKind::TrackRegularized:
      require_same_grid(c.size(), o.target()->size());
      return TangentField(2.0 * ((1.0 + o.lambda()) * c.points() - o.target()->points()));
    case ObjectiveKind::LoopEnergy:
      return -derivative(derivative(c));
  }
  return TangentField::zero(c.size());
}

TangentField numeric_gradient(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c) {
  return riesz(m, c, flat_representer(o, c));
}

TangentField gradient(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c) {
  switch (o.kind()) {
    case ObjectiveKind::Length: {
      if (m.kind == MetricKind::FlatL2 || m.kind == MetricKind::InvariantL2) {
        const Eigen::VectorXd k = signed_curvature(c);
        auto [dc, normal] = tangent_normal(c);
        Eigen::VectorXd factor = -k;
        if (m.kind == MetricKind::InvariantL2) factor.array() /= speed(c).array();
        GridArray g = normal.vectors();
        g.col(0).array() *= factor.array();
        g.col(1).array() *= factor.array();
        return TangentField(std::move(g));
      }
      if (m.kind == MetricKind::InvariantH1) {
        require_immersion(c);
        return length_gradient_h1(c);
      }
      break;
    }
    case ObjectiveKind::TrackIdentity:
    case ObjectiveKind::TrackRegularized:
      if (m.kind == MetricKind::FlatL2) return flat_representer(o, c);
      break;
    case ObjectiveKind::LoopEnergy:
      if (m.kind == MetricKind::InvariantH1) {
        require_immersion(c);
        if (is_arclength_uniform(c)) return energy_gradient_h1_constant_speed(c);
      }
      break;
  }
  return numeric_gradient(o, m, c);
}

TangentField h1_length_gradient_kernel(const LoopCurve& gamma) {
  require_immersion(gamma);
  if (!is_arclength_uniform(gamma, 1e-8)) {
    throw ValidationError("h1_length_gradient_kernel: curve is not parametrized proportionally to arclength");
  }
  return h1_length_gradient_kernel(gamma, arclength(gamma));
}

TangentField h1_length_gradient_kernel(const LoopCurve& gamma, double length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("kernel quadrature needs a positive length");
  const auto n = static_cast<Eigen::Index>(gamma.size());
  const double h = length / static_cast<double>(n);
  // G(|s_i - s_j|) depends on |i - j| only.
  Eigen::VectorXd kernel(n);
  for (Eigen::Index m = 0; m < n; ++m) kernel(m) = green_kernel(h * static_cast<double>(m), length);
  const GridArray& g = gamma.points();
  GridArray out(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (Eigen::Index j = 0; j < n; ++j) acc += kernel(std::abs(i - j)) * g.row(j).transpose();
    // Trapezoid plus the Euler-Maclaurin term for the unit jump of G' at s = t.
    const Eigen::Vector2d conv = h * acc - (h * h / 12.0) * g.row(i).transpose();
    out.row(i) = g.row(i) - conv.transpose();
  }
  return TangentField(std::move(out));
}

TangentField hessian_apply(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                           const TangentField& v) {
  require_same_grid(c.size(), v.size());
  if (m.kind == MetricKind::FlatL2) {
    if (o.kind() == ObjectiveKind::TrackIdentity) return 2.0 * v;
    if (o.kind() == ObjectiveKind::TrackRegularized) return 2.0 * (1.0 + o.lambda()) * v;
  }
  return hessian_apply_fd(o, m, c, v);
}

TangentField hessian_apply_fd(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                              const TangentField& v) {
  require_same_grid(c.size(), v.size());
  const double vmax = v.vectors().cwiseAbs().maxCoeff();
  if (vmax == 0.0) return TangentField::zero(c.size());
  double t = 1e-5 * (1.0 + c.points().cwiseAbs().maxCoeff()) / vmax;
  const bool guard = o.needs_immersion(m);
  const double eps = guard ? default_immersion_eps(c) : 0.0;
  int halvings = 0;
  while (guard && !(segment_stays_immersed(c - t * v, 2.0 * t * v, eps))) {
    if (++halvings > 40) throw GeometryError("cannot keep finite-difference stencil immersed");
    t *= 0.5;
  }
  TangentField d = gradient(o, m, c + t * v);
  d -= gradient(o, m, c - t * v);
  d *= 1.0 / (2.0 * t);
  if (m.kind != MetricKind::FlatL2) d -= spray_bilinear(m, c, v, gradient(o, m, c));
  return d;
}

}  // namespace loopopt
