#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

// Truncated sequence spaces: the twisted l2 metric and metric-spray
// (Christoffel) data of smooth metrics on R^d, computed from the metric alone.
namespace loopopt::finitedim {

using Vector = Eigen::VectorXd;

/// e^{-|p|^2} sum_{n=1}^d x_n y_n / n^3.
double twisted_inner(const Vector& p, const Vector& x, const Vector& y);

/// Gradient for the twisted metric: component n is e^{|p|^2} n^3 df_n.
Vector twisted_gradient(const Vector& df, const Vector& p);

/// Smooth metric g(x; v, w) on an open subset of R^d.
struct FiniteMetricField {
  int dim = 0;
  std::function<double(const Vector& x, const Vector& v, const Vector& w)> evaluate;
  std::string name;

  double operator()(const Vector& x, const Vector& v, const Vector& w) const { return evaluate(x, v, w); }

  static FiniteMetricField euclidean(int d);
  static FiniteMetricField twisted(int d);
  /// e^{2 phi(x)} <v, w>.
  static FiniteMetricField conformal(int d, std::function<double(const Vector&)> phi);
};

/// Default central-difference step 1e-5 (1 + |x|).
double default_fd_step(const Vector& x);

struct ChristoffelResult {
  Vector gamma;
  double condition = 1.0;  // spectral condition number of the Gram matrix
};

/// Solves g(x; Gamma(x, v), e_i) = 1/2 d_1 g(x; v, v; e_i) - d_1 g(x; v, e_i; v)
/// for i = 1..d. Throws GeometryError if the Gram matrix is not SPD.
ChristoffelResult christoffel_solve(const FiniteMetricField& g, const Vector& x, const Vector& v,
                                    double fd_step);

/// B(x, u, w) = (Gamma(u + w) - Gamma(u) - Gamma(w)) / 2.
Vector spray_bilinear(const FiniteMetricField& g, const Vector& x, const Vector& u, const Vector& w,
                      double fd_step);

using VectorField = std::function<Vector(const Vector&)>;

/// |X.g(Y, Z) - g(nabla_X Y, Z) - g(Y, nabla_X Z)| at x, with
/// nabla_X Y = dY(x; X) - B(x, X, Y). All derivatives are central differences.
double metric_compat_check(const FiniteMetricField& g, const Vector& x, const VectorField& X,
                           const VectorField& Y, const VectorField& Z, double fd_step);

struct GrowthRow {
  int dim = 0;
  double max_gamma = 0.0;  // max_n |Gamma(x0, e_n)|
  double condition = 1.0;
};

/// For each d: max over unit coordinate directions of |Gamma(x0(d), e_n)|.
std::vector<GrowthRow> christoffel_growth(const std::vector<int>& dims,
                                          const std::function<FiniteMetricField(int)>& family,
                                          const std::function<Vector(int)>& base_point);

/// Twisted metric at the truncations of the l2 point x0 = (1/n)_n.
std::vector<GrowthRow> twisted_christoffel_growth(const std::vector<int>& dims);

/// Truncation of (1/n)_n to dimension d.
Vector harmonic_point(int d);

/// CSV "d,max_gamma".
std::string growth_csv(const std::vector<GrowthRow>& rows);

}  // namespace loopopt::finitedim
