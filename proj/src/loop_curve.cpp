#include "loopopt/loop_curve.hpp"

#include "loopopt/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace loopopt {
namespace {

void check_grid(const GridArray& a, const char* what) {
  const auto n = a.rows();
  if (n < 8 || n % 2 != 0) {
    throw ValidationError(std::string(what) + ": grid size must be even and >= 8, got " + std::to_string(n));
  }
  if (!a.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

}  // namespace

LoopCurve::LoopCurve(GridArray points) : points_(std::move(points)) { check_grid(points_, "LoopCurve"); }

TangentField::TangentField(GridArray vectors) : vectors_(std::move(vectors)) {
  check_grid(vectors_, "TangentField");
}

TangentField TangentField::zero(std::size_t n) {
  return TangentField(GridArray::Zero(static_cast<Eigen::Index>(n), 2));
}

TangentField& TangentField::operator+=(const TangentField& other) {
  require_same_grid(size(), other.size());
  vectors_ += other.vectors_;
  return *this;
}

TangentField& TangentField::operator-=(const TangentField& other) {
  require_same_grid(size(), other.size());
  vectors_ -= other.vectors_;
  return *this;
}

TangentField& TangentField::operator*=(double s) {
  vectors_ *= s;
  return *this;
}

TangentField operator+(TangentField a, const TangentField& b) { return a += b; }
TangentField operator-(TangentField a, const TangentField& b) { return a -= b; }
TangentField operator*(double s, TangentField a) { return a *= s; }
TangentField operator-(TangentField a) { return a *= -1.0; }

LoopCurve operator+(const LoopCurve& c, const TangentField& v) {
  require_same_grid(c.size(), v.size());
  return LoopCurve(c.points() + v.vectors());
}

LoopCurve operator-(const LoopCurve& c, const TangentField& v) {
  require_same_grid(c.size(), v.size());
  return LoopCurve(c.points() - v.vectors());
}

TangentField displacement(const LoopCurve& a, const LoopCurve& b) {
  require_same_grid(a.size(), b.size());
  return TangentField(a.points() - b.points());
}

TangentField position_field(const LoopCurve& c) { return TangentField(c.points()); }

void require_same_grid(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ValidationError("grid mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

Eigen::VectorXd parameter_grid(std::size_t n) {
  Eigen::VectorXd theta(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    theta(j) = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  }
  return theta;
}

LoopCurve sample_circle(double radius, std::size_t n) {
  if (!(radius > 0.0)) throw ValidationError("sample_circle: radius must be positive");
  if (n < 8 || n % 2 != 0) throw ValidationError("sample_circle: n must be even and >= 8");
  return sample_curve(n, [radius](double t) { return Eigen::Vector2d(radius * std::cos(t), radius * std::sin(t)); });
}

}  // namespace loopopt
