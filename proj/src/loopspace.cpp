#include "loopopt/loopspace.hpp"

#include "loopopt/error.hpp"
#include "loopopt/spectral.hpp"

#include <cmath>
// Older Boost pchip headers call unqualified isnan.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace loopopt {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridArray differentiate(const GridArray& a, int order = 1) {
  GridArray out(a.rows(), 2);
  out.col(0) = spectral::derivative(a.col(0), order);
  out.col(1) = spectral::derivative(a.col(1), order);
  return out;
}

Eigen::VectorXd row_norms(const GridArray& a) { return a.rowwise().norm(); }

// Distance from the origin to the segment [a, b] in the plane.
double origin_segment_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return a.norm();
  const double tau = std::clamp(-a.dot(d) / len2, 0.0, 1.0);
  return (a + tau * d).norm();
}

}  // namespace

TangentField derivative(const LoopCurve& c) { return TangentField(differentiate(c.points())); }

TangentField derivative(const TangentField& v) { return TangentField(differentiate(v.vectors())); }

Eigen::VectorXd speed(const LoopCurve& c) { return row_norms(differentiate(c.points())); }

Eigen::VectorXd chord_speed(const LoopCurve& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  const double scale = static_cast<double>(n) / kTwoPi;
  Eigen::VectorXd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j) = scale * (c.points().row((j + 1) % n) - c.points().row(j)).norm();
  }
  return out;
}

double default_immersion_eps(const LoopCurve& c) {
  return std::max(1e-8 * speed(c).maxCoeff(), std::numeric_limits<double>::min());
}

bool is_immersion(const LoopCurve& c, double eps) {
  if (!(eps > 0.0)) throw ValidationError("is_immersion: eps must be positive");
  return speed(c).minCoeff() > eps && chord_speed(c).minCoeff() > eps;
}

bool is_immersion(const LoopCurve& c) { return is_immersion(c, default_immersion_eps(c)); }

void require_immersion(const LoopCurve& c) {
  if (!is_immersion(c)) throw GeometryError("not an immersion");
}

bool segment_stays_immersed(const LoopCurve& c, const TangentField& step, double eps) {
  require_same_grid(c.size(), step.size());
  const GridArray dc = differentiate(c.points());
  const GridArray ds = differentiate(step.vectors());
  const auto n = static_cast<Eigen::Index>(c.size());
  const double scale = static_cast<double>(n) / kTwoPi;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Vector2d a = dc.row(j).transpose();
    const Eigen::Vector2d b = a + ds.row(j).transpose();
    if (!(origin_segment_distance(a, b) > eps)) return false;
    const Eigen::Index next = (j + 1) % n;
    const Eigen::Vector2d ca = scale * (c.points().row(next) - c.points().row(j)).transpose();
    const Eigen::Vector2d cb =
        ca + scale * (step.vectors().row(next) - step.vectors().row(j)).transpose();
    if (!(origin_segment_distance(ca, cb) > eps)) return false;
  }
  return true;
}

double integrate(const Eigen::VectorXd& f) { return kTwoPi / static_cast<double>(f.size()) * f.sum(); }

double arclength(const LoopCurve& c) { return integrate(speed(c)); }

double enclosed_area(const LoopCurve& c) {
  const GridArray d = differentiate(c.points());
  const Eigen::VectorXd integrand =
      c.points().col(0).cwiseProduct(d.col(1)) - c.points().col(1).cwiseProduct(d.col(0));
  return 0.5 * integrate(integrand);
}

std::pair<TangentField, TangentField> tangent_normal(const LoopCurve& c) {
  require_immersion(c);
  GridArray d = differentiate(c.points());
  GridArray normal(d.rows(), 2);
  normal.col(0) = -d.col(1);
  normal.col(1) = d.col(0);
  return {TangentField(std::move(d)), TangentField(std::move(normal))};
}

TangentField unit_tangent(const LoopCurve& c) {
  require_immersion(c);
  GridArray d = differentiate(c.points());
  const Eigen::VectorXd s = row_norms(d);
  d.col(0).array() /= s.array();
  d.col(1).array() /= s.array();
  return TangentField(std::move(d));
}

Eigen::VectorXd signed_curvature(const LoopCurve& c) {
  require_immersion(c);
  const GridArray d1 = differentiate(c.points());
  const GridArray d2 = differentiate(d1);
  const Eigen::VectorXd s = row_norms(d1);
  const Eigen::VectorXd cross = d1.col(0).cwiseProduct(d2.col(1)) - d1.col(1).cwiseProduct(d2.col(0));
  return cross.array() / s.array().cube();
}

Eigen::VectorXd cumulative_arclength(const LoopCurve& c) {
  const Eigen::VectorXd s = speed(c);
  return s.mean() * parameter_grid(c.size()) + spectral::antiderivative(s);
}

bool is_arclength_uniform(const LoopCurve& c, double rel_tol) {
  const Eigen::VectorXd s = speed(c);
  const double mean = s.mean();
  return (s.array() - mean).abs().maxCoeff() <= rel_tol * mean;
}

Eigen::VectorXd arclength_parameters(const LoopCurve& c) {
  require_immersion(c);
  const std::size_t n = c.size();
  const Eigen::VectorXd s = speed(c);
  const double mean_speed = s.mean();
  const double length = kTwoPi * mean_speed;
  const Eigen::VectorXd periodic = spectral::antiderivative(s);
  const spectral::TrigInterpolant periodic_fn(periodic);
  const Eigen::VectorXd theta_grid = parameter_grid(n);

  auto cumulative = [&](double theta) { return mean_speed * theta + periodic_fn(theta); };
  auto cumulative_rate = [&](double theta) { return mean_speed + periodic_fn.derivative(theta); };

  std::vector<double> knots_s(n + 1), knots_theta(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    knots_s[j] = mean_speed * theta_grid(static_cast<Eigen::Index>(j)) + periodic(static_cast<Eigen::Index>(j));
    knots_theta[j] = theta_grid(static_cast<Eigen::Index>(j));
  }
  knots_s[n] = length;
  knots_theta[n] = kTwoPi;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(knots_s[j + 1] > knots_s[j])) throw GeometryError("arclength is not strictly increasing");
  }
  const double end_slope = 1.0 / s(0);
  boost::math::interpolators::pchip<std::vector<double>> inverse(std::move(knots_s), std::move(knots_theta),
                                                                 end_slope, end_slope);

  Eigen::VectorXd theta(static_cast<Eigen::Index>(n));
  theta(0) = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double target = length * static_cast<double>(i) / static_cast<double>(n);
    double t = inverse(target);
    for (int iter = 0; iter < 30; ++iter) {
      const double rate = cumulative_rate(t);
      if (!(rate > 0.0)) throw GeometryError("arclength inversion failed: nonpositive speed");
      const double delta = (cumulative(t) - target) / rate;
      t -= delta;
      if (std::abs(delta) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(t))) break;
    }
    theta(static_cast<Eigen::Index>(i)) = t;
  }
  return theta;
}

LoopCurve resample_arclength(const LoopCurve& c) {
  const Eigen::VectorXd theta = arclength_parameters(c);
  const spectral::TrigInterpolant fx(c.points().col(0));
  const spectral::TrigInterpolant fy(c.points().col(1));
  GridArray out(theta.size(), 2);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    out(i, 0) = fx(theta(i));
    out(i, 1) = fy(theta(i));
  }
  return LoopCurve(std::move(out));
}

TangentField srvt(const LoopCurve& c) {
  require_immersion(c);
  GridArray d = differentiate(c.points());
  const Eigen::VectorXd root = row_norms(d).cwiseSqrt();
  d.col(0).array() /= root.array();
  d.col(1).array() /= root.array();
  return TangentField(std::move(d));
}

LoopCurve srvt_inverse(const TangentField& q, const Eigen::Vector2d& base) {
  const Eigen::VectorXd mag = row_norms(q.vectors());
  if (!(mag.minCoeff() > 0.0)) throw ValidationError("srvt_inverse: q has a zero entry");
  GridArray w = q.vectors();
  w.col(0).array() *= mag.array();
  w.col(1).array() *= mag.array();
  const Eigen::Vector2d mean = w.colwise().mean().transpose();
  const double max_norm = row_norms(w).maxCoeff();
  if (mean.norm() > 1e-6 * max_norm) throw GeometryError("SRVT image not closed");
  const Eigen::VectorXd theta = parameter_grid(q.size());
  GridArray pts(w.rows(), 2);
  for (int k = 0; k < 2; ++k) {
    pts.col(k) = spectral::antiderivative(w.col(k)) + mean(k) * theta;
    pts.col(k).array() += base(k);
  }
  return LoopCurve(std::move(pts));
}

TangentField srvt_differential(const LoopCurve& c, const TangentField& u) {
  require_same_grid(c.size(), u.size());
  require_immersion(c);
  const GridArray dc = differentiate(c.points());
  const GridArray du = differentiate(u.vectors());
  GridArray out(dc.rows(), 2);
  for (Eigen::Index j = 0; j < dc.rows(); ++j) {
    const Eigen::Vector2d cp = dc.row(j).transpose();
    const Eigen::Vector2d up = du.row(j).transpose();
    const double s = cp.norm();
    const Eigen::Vector2d r = up / std::sqrt(s) - (up.dot(cp) / (2.0 * std::pow(s, 2.5))) * cp;
    out.row(j) = r.transpose();
  }
  return TangentField(std::move(out));
}

}  // namespace loopopt
