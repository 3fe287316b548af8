#include "loopopt/metrics.hpp"

#include "loopopt/error.hpp"
#include "loopopt/loopspace.hpp"
#include "loopopt/spectral.hpp"

#include <cmath>
#include <numbers>

namespace loopopt {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double weight(std::size_t n) { return kTwoPi / static_cast<double>(n); }

Eigen::VectorXd checked_speed(const LoopCurve& c) {
  require_immersion(c);
  return speed(c);
}

// Pointwise factor of the SRVT pullback: Dq(u)_j = A_j u'_j with
// A^T A = (I - 3/4 t t^T) / s.
Eigen::Matrix2d elastic_weight(const Eigen::Vector2d& cp) {
  const double s = cp.norm();
  return (Eigen::Matrix2d::Identity() - 0.75 * cp * cp.transpose() / (s * s)) / s;
}

// Mean and Nyquist coefficients: P u = mean + nyq * (-1)^j.
std::pair<Eigen::Vector2d, Eigen::Vector2d> kernel_coefficients(const GridArray& u) {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d nyq = Eigen::Vector2d::Zero();
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const Eigen::Vector2d r = u.row(j).transpose();
    mean += r;
    nyq += (j % 2 == 0 ? 1.0 : -1.0) * r;
  }
  const double n = static_cast<double>(u.rows());
  return {mean / n, nyq / n};
}

TangentField scale_rows(const GridArray& a, const Eigen::VectorXd& f) {
  GridArray out = a;
  out.col(0).array() *= f.array();
  out.col(1).array() *= f.array();
  return TangentField(std::move(out));
}

TangentField riesz_h1(const LoopCurve& c, const TangentField& w) {
  const Eigen::VectorXd s = checked_speed(c);
  const auto n = static_cast<Eigen::Index>(c.size());
  GridArray out(n, 2);
  const double mean = s.mean();
  if ((s.array() - mean).abs().maxCoeff() <= 1e-12 * mean) {
    // Constant speed: s u - u''/s = w is diagonal in Fourier space.
    for (int k = 0; k < 2; ++k) {
      out.col(k) = spectral::apply_symbol(w.vectors().col(k), [mean](double kk) {
        return std::complex<double>(mean / (mean * mean + kk * kk));
      });
    }
    return TangentField(std::move(out));
  }
  const Eigen::MatrixXd d = spectral::differentiation_matrix(c.size());
  Eigen::MatrixXd op = d.transpose() * s.cwiseInverse().asDiagonal() * d;
  op.diagonal() += s;
  const Eigen::LLT<Eigen::MatrixXd> llt(op);
  if (llt.info() != Eigen::Success) throw GeometryError("invariant H1 system is not positive definite");
  out = llt.solve(w.vectors());
  return TangentField(std::move(out));
}

Eigen::MatrixXd elastic_gram(const LoopCurve& c) {
  require_immersion(c);
  const auto n = static_cast<Eigen::Index>(c.size());
  const TangentField dc = derivative(c);
  Eigen::VectorXd wxx(n), wxy(n), wyy(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Matrix2d w = elastic_weight(dc.vectors().row(j).transpose());
    wxx(j) = w(0, 0);
    wxy(j) = w(0, 1);
    wyy(j) = w(1, 1);
  }
  const Eigen::MatrixXd d = spectral::differentiation_matrix(c.size());
  const Eigen::MatrixXd dt = d.transpose();
  Eigen::MatrixXd g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = dt * wxx.asDiagonal() * d;
  g.topRightCorner(n, n) = dt * wxy.asDiagonal() * d;
  g.bottomLeftCorner(n, n) = g.topRightCorner(n, n).transpose();
  g.bottomRightCorner(n, n) = dt * wyy.asDiagonal() * d;
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = (1.0 + ((i + j) % 2 == 0 ? 1.0 : -1.0)) / static_cast<double>(n);
  }
  g.topLeftCorner(n, n) += p;
  g.bottomRightCorner(n, n) += p;
  return g;
}

TangentField riesz_elastic(const LoopCurve& c, const TangentField& w) {
  const auto n = static_cast<Eigen::Index>(c.size());
  const Eigen::LLT<Eigen::MatrixXd> llt(elastic_gram(c));
  if (llt.info() != Eigen::Success) throw GeometryError("elastic system is not positive definite");
  Eigen::VectorXd rhs(2 * n);
  rhs << w.vectors().col(0), w.vectors().col(1);
  const Eigen::VectorXd u = llt.solve(rhs);
  GridArray out(n, 2);
  out.col(0) = u.head(n);
  out.col(1) = u.tail(n);
  return TangentField(std::move(out));
}

}  // namespace

MetricSpec parse_metric(std::string_view name) {
  if (name == "flat-l2") return MetricSpec::flat_l2();
  if (name == "inv-l2") return MetricSpec::invariant_l2();
  if (name == "inv-h1") return MetricSpec::invariant_h1();
  if (name == "elastic") return MetricSpec::elastic();
  throw ValidationError("unknown metric '" + std::string(name) + "' (expected flat-l2|inv-l2|inv-h1|elastic)");
}

std::string metric_name(const MetricSpec& m) {
  switch (m.kind) {
    case MetricKind::FlatL2: return "flat-l2";
    case MetricKind::InvariantL2: return "inv-l2";
    case MetricKind::InvariantH1: return "inv-h1";
    case MetricKind::ElasticSRVT: return "elastic";
  }
  return "?";
}

double flat_inner(const TangentField& u, const TangentField& v) {
  require_same_grid(u.size(), v.size());
  const GridArray& a = u.vectors();
  const GridArray& b = v.vectors();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) acc += a(j, 0) * b(j, 0) + a(j, 1) * b(j, 1);
  return weight(u.size()) * acc;
}

double inner(const MetricSpec& m, const LoopCurve& c, const TangentField& u, const TangentField& v) {
  require_same_grid(c.size(), u.size());
  require_same_grid(c.size(), v.size());
  const GridArray& a = u.vectors();
  const GridArray& b = v.vectors();
  switch (m.kind) {
    case MetricKind::FlatL2:
      return flat_inner(u, v);
    case MetricKind::InvariantL2: {
      const Eigen::VectorXd s = checked_speed(c);
      double acc = 0.0;
      for (Eigen::Index j = 0; j < a.rows(); ++j) acc += s(j) * (a(j, 0) * b(j, 0) + a(j, 1) * b(j, 1));
      return weight(c.size()) * acc;
    }
    case MetricKind::InvariantH1: {
      const Eigen::VectorXd s = checked_speed(c);
      const GridArray da = derivative(u).vectors();
      const GridArray db = derivative(v).vectors();
      double acc = 0.0;
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        acc += s(j) * (a(j, 0) * b(j, 0) + a(j, 1) * b(j, 1)) +
               (da(j, 0) * db(j, 0) + da(j, 1) * db(j, 1)) / s(j);
      }
      return weight(c.size()) * acc;
    }
    case MetricKind::ElasticSRVT: {
      const TangentField qa = srvt_differential(c, u);
      const TangentField qb = srvt_differential(c, v);
      const auto [mean_a, nyq_a] = kernel_coefficients(a);
      const auto [mean_b, nyq_b] = kernel_coefficients(b);
      const double n = static_cast<double>(c.size());
      return flat_inner(qa, qb) + weight(c.size()) * n * (mean_a.dot(mean_b) + nyq_a.dot(nyq_b));
    }
  }
  return 0.0;
}

double norm(const MetricSpec& m, const LoopCurve& c, const TangentField& u) {
  return std::sqrt(std::max(0.0, inner(m, c, u, u)));
}

TangentField riesz(const MetricSpec& m, const LoopCurve& c, const TangentField& w) {
  require_same_grid(c.size(), w.size());
  switch (m.kind) {
    case MetricKind::FlatL2:
      return w;
    case MetricKind::InvariantL2:
      return scale_rows(w.vectors(), checked_speed(c).cwiseInverse());
    case MetricKind::InvariantH1:
      return riesz_h1(c, w);
    case MetricKind::ElasticSRVT:
      return riesz_elastic(c, w);
  }
  return w;
}

TangentField spray_quadratic(const MetricSpec& m, const LoopCurve& c, const TangentField& v) {
  require_same_grid(c.size(), v.size());
  const auto n = static_cast<Eigen::Index>(c.size());
  if (m.kind == MetricKind::FlatL2) return TangentField::zero(c.size());

  const Eigen::VectorXd s = checked_speed(c);
  const GridArray dc = derivative(c).vectors();
  const GridArray dv = derivative(v).vectors();
  const GridArray& vv = v.vectors();

  if (m.kind == MetricKind::InvariantL2 || m.kind == MetricKind::InvariantH1) {
    const bool h1 = m.kind == MetricKind::InvariantH1;
    GridArray at(n, 2), extra(n, 2), rhs(n, 2);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Vector2d t = dc.row(j).transpose() / s(j);
      const Eigen::Vector2d p = dv.row(j).transpose();
      const Eigen::Vector2d q = vv.row(j).transpose();
      double a = 0.5 * q.squaredNorm();
      if (h1) a -= 0.5 * p.squaredNorm() / (s(j) * s(j));
      const double b = t.dot(p);
      at.row(j) = (a * t).transpose();
      rhs.row(j) = (-b * q).transpose();
      if (h1) extra.row(j) = ((b / (s(j) * s(j))) * p).transpose();
    }
    rhs -= derivative(TangentField(at)).vectors();
    if (h1) rhs -= derivative(TangentField(extra)).vectors();
    return riesz(m, c, TangentField(std::move(rhs)));
  }

  // ElasticSRVT: the kernel projection term does not depend on c.
  GridArray alpha(n, 2), beta(n, 2);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Vector2d cp = dc.row(j).transpose();
    const Eigen::Vector2d p = dv.row(j).transpose();
    const double sj = s(j);
    const double s3 = sj * sj * sj;
    const double s5 = s3 * sj * sj;
    const double cpp = cp.dot(p);
    const double pp = p.squaredNorm();
    alpha.row(j) = (-pp * cp / s3 - 1.5 * cpp * p / s3 + 2.25 * cpp * cpp * cp / s5).transpose();
    beta.row(j) = (-(cpp / s3) * p - 0.75 * ((cpp * p + pp * cp) / s3 - 3.0 * cpp * cpp * cp / s5)).transpose();
  }
  GridArray rhs = derivative(TangentField(beta)).vectors() - 0.5 * derivative(TangentField(alpha)).vectors();
  return riesz(m, c, TangentField(std::move(rhs)));
}

TangentField spray_bilinear(const MetricSpec& m, const LoopCurve& c, const TangentField& u,
                            const TangentField& w) {
  TangentField sum = spray_quadratic(m, c, u + w);
  sum -= spray_quadratic(m, c, u);
  sum -= spray_quadratic(m, c, w);
  return 0.5 * std::move(sum);
}

}  // namespace loopopt
