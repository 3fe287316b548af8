#include "loopopt/finitedim.hpp"

#include "loopopt/error.hpp"
#include "loopopt/io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loopopt::finitedim {
namespace {

void require_dim(const FiniteMetricField& g, const Vector& a, const char* what) {
  if (a.size() != g.dim) throw ValidationError(std::string(what) + ": dimension mismatch");
}

// d/dx g(x; a, b) in direction w, central difference.
double d1g(const FiniteMetricField& g, const Vector& x, const Vector& a, const Vector& b, const Vector& w,
           double h) {
  return (g(x + h * w, a, b) - g(x - h * w, a, b)) / (2.0 * h);
}

}  // namespace

double twisted_inner(const Vector& p, const Vector& x, const Vector& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    s += x(i) * y(i) / (n * n * n);
  }
  return std::exp(-p.squaredNorm()) * s;
}

Vector twisted_gradient(const Vector& df, const Vector& p) {
  Vector out(df.size());
  const double scale = std::exp(p.squaredNorm());
  for (Eigen::Index i = 0; i < df.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    out(i) = scale * n * n * n * df(i);
  }
  return out;
}

FiniteMetricField FiniteMetricField::euclidean(int d) {
  return {d, [](const Vector&, const Vector& v, const Vector& w) { return v.dot(w); }, "euclidean"};
}

FiniteMetricField FiniteMetricField::twisted(int d) {
  return {d, [](const Vector& x, const Vector& v, const Vector& w) { return twisted_inner(x, v, w); }, "twisted"};
}

FiniteMetricField FiniteMetricField::conformal(int d, std::function<double(const Vector&)> phi) {
  return {d,
          [phi = std::move(phi)](const Vector& x, const Vector& v, const Vector& w) {
            return std::exp(2.0 * phi(x)) * v.dot(w);
          },
          "conformal"};
}

double default_fd_step(const Vector& x) { return 1e-5 * (1.0 + x.norm()); }

ChristoffelResult christoffel_solve(const FiniteMetricField& g, const Vector& x, const Vector& v,
                                    double fd_step) {
  require_dim(g, x, "christoffel_solve");
  require_dim(g, v, "christoffel_solve");
  if (!(fd_step > 0.0)) throw ValidationError("christoffel_solve: fd_step must be positive");
  const int d = g.dim;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd gram(d, d);
  Vector rhs(d);
  for (int i = 0; i < d; ++i) {
    const Vector ei = id.col(i);
    for (int j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = g(x, ei, id.col(j));
    rhs(i) = 0.5 * d1g(g, x, v, v, ei, fd_step) - d1g(g, x, v, ei, v, fd_step);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) throw GeometryError("christoffel_solve: metric is not positive definite at x");
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw GeometryError("christoffel_solve: Cholesky failed");
  return {llt.solve(rhs), hi / lo};
}

Vector spray_bilinear(const FiniteMetricField& g, const Vector& x, const Vector& u, const Vector& w,
                      double fd_step) {
  return 0.5 * (christoffel_solve(g, x, u + w, fd_step).gamma - christoffel_solve(g, x, u, fd_step).gamma -
                christoffel_solve(g, x, w, fd_step).gamma);
}

double metric_compat_check(const FiniteMetricField& g, const Vector& x, const VectorField& X,
                           const VectorField& Y, const VectorField& Z, double fd_step) {
  require_dim(g, x, "metric_compat_check");
  const double h = fd_step;
  const Vector xv = X(x), yv = Y(x), zv = Z(x);
  const Vector xp = x + h * xv, xm = x - h * xv;
  const double lhs = (g(xp, Y(xp), Z(xp)) - g(xm, Y(xm), Z(xm))) / (2.0 * h);
  const Vector dy = (Y(xp) - Y(xm)) / (2.0 * h);
  const Vector dz = (Z(xp) - Z(xm)) / (2.0 * h);
  const Vector nabla_y = dy - spray_bilinear(g, x, xv, yv, h);
  const Vector nabla_z = dz - spray_bilinear(g, x, xv, zv, h);
  return std::abs(lhs - g(x, nabla_y, zv) - g(x, yv, nabla_z));
}

std::vector<GrowthRow> christoffel_growth(const std::vector<int>& dims,
                                          const std::function<FiniteMetricField(int)>& family,
                                          const std::function<Vector(int)>& base_point) {
  std::vector<GrowthRow> rows;
  for (int d : dims) {
    if (d < 1) throw ValidationError("christoffel_growth: dimensions must be positive");
    const FiniteMetricField g = family(d);
    const Vector x = base_point(d);
    const double h = default_fd_step(x);
    GrowthRow row;
    row.dim = d;
    for (int n = 0; n < d; ++n) {
      const ChristoffelResult r = christoffel_solve(g, x, Vector::Unit(d, n), h);
      row.max_gamma = std::max(row.max_gamma, r.gamma.norm());
      row.condition = r.condition;
    }
    rows.push_back(row);
  }
  return rows;
}

Vector harmonic_point(int d) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x(i) = 1.0 / static_cast<double>(i + 1);
  return x;
}

std::vector<GrowthRow> twisted_christoffel_growth(const std::vector<int>& dims) {
  return christoffel_growth(dims, &FiniteMetricField::twisted, &harmonic_point);
}

std::string growth_csv(const std::vector<GrowthRow>& rows) {
  std::ostringstream os;
  os << "d,max_gamma\n";
  for (const auto& r : rows) os << r.dim << ',' << format_double(r.max_gamma) << '\n';
  return os.str();
}

}  // namespace loopopt::finitedim
