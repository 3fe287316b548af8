#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace loopopt {

/// N samples of a plane field over the uniform grid theta_j = 2*pi*j/N.
/// Column 0 holds x components, column 1 holds y components.
using GridArray = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Closed plane curve sampled on the uniform parameter grid.
///
/// The grid size is even and at least 8 so that the spectral differentiator
/// is well defined. Periodicity is implicit: index N is identified with 0.
/// A LoopCurve is not required to be an immersion; curve-dependent
/// operations that need a nonvanishing derivative check this themselves.
class LoopCurve {
 public:
  explicit LoopCurve(GridArray points);

  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
  const GridArray& points() const noexcept { return points_; }
  Eigen::Vector2d point(std::size_t j) const { return points_.row(static_cast<Eigen::Index>(j)).transpose(); }

 private:
  GridArray points_;
};

/// Element of T_c Imm(S^1, R^2) ~ C^inf(S^1, R^2): one plane vector per node.
class TangentField {
 public:
  explicit TangentField(GridArray vectors);
  static TangentField zero(std::size_t n);

  std::size_t size() const noexcept { return static_cast<std::size_t>(vectors_.rows()); }
  const GridArray& vectors() const noexcept { return vectors_; }
  Eigen::Vector2d vector(std::size_t j) const { return vectors_.row(static_cast<Eigen::Index>(j)).transpose(); }

  TangentField& operator+=(const TangentField& other);
  TangentField& operator-=(const TangentField& other);
  TangentField& operator*=(double s);

 private:
  GridArray vectors_;
};

TangentField operator+(TangentField a, const TangentField& b);
TangentField operator-(TangentField a, const TangentField& b);
TangentField operator*(double s, TangentField a);
TangentField operator-(TangentField a);

/// Chart addition c + v (Imm is open in C^inf(S^1, R^2)).
LoopCurve operator+(const LoopCurve& c, const TangentField& v);
LoopCurve operator-(const LoopCurve& c, const TangentField& v);

/// Pointwise difference a - b as a tangent field.
TangentField displacement(const LoopCurve& a, const LoopCurve& b);

/// Curve points viewed as a tangent field (the position field).
TangentField position_field(const LoopCurve& c);

/// Throws ValidationError unless a and b share a grid.
void require_same_grid(std::size_t a, std::size_t b);

/// Uniform parameter nodes theta_j = 2*pi*j/n.
Eigen::VectorXd parameter_grid(std::size_t n);

/// radius * (cos theta, sin theta), counterclockwise.
LoopCurve sample_circle(double radius, std::size_t n);

/// Samples theta -> (fx(theta), fy(theta)) on the uniform grid.
template <class Fn>
LoopCurve sample_curve(std::size_t n, Fn&& fn) {
  GridArray pts(static_cast<Eigen::Index>(n), 2);
  const Eigen::VectorXd theta = parameter_grid(n);
  for (Eigen::Index j = 0; j < pts.rows(); ++j) {
    const Eigen::Vector2d p = fn(theta(j));
    pts(j, 0) = p.x();
    pts(j, 1) = p.y();
  }
  return LoopCurve(std::move(pts));
}

template <class Fn>
TangentField sample_field(std::size_t n, Fn&& fn) {
  GridArray v(static_cast<Eigen::Index>(n), 2);
  const Eigen::VectorXd theta = parameter_grid(n);
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const Eigen::Vector2d p = fn(theta(j));
    v(j, 0) = p.x();
    v(j, 1) = p.y();
  }
  return TangentField(std::move(v));
}

}  // namespace loopopt
