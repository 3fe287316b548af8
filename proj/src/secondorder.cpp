#include "loopopt/secondorder.hpp"

#include "loopopt/error.hpp"
#include "loopopt/loopspace.hpp"

#include "json.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace loopopt {

TaylorReport taylor_check(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                          const TangentField& v, std::vector<double> t_values, TaylorOptions options) {
  require_same_grid(c.size(), v.size());
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("taylor_check: t values must be positive");
  }
  std::sort(t_values.begin(), t_values.end(), std::greater<>());
  t_values.erase(std::unique(t_values.begin(), t_values.end()), t_values.end());

  const bool guard = o.needs_immersion(m);
  if (guard) require_immersion(c);
  const double eps = guard ? default_immersion_eps(c) : 0.0;

  const double f0 = value(o, c);
  TaylorReport report;
  const bool zero_v = v.vectors().cwiseAbs().maxCoeff() == 0.0;
  double slope = 0.0;
  double curvature = 0.0;
  if (!zero_v) {
    const TangentField g = gradient(o, m, c);
    slope = inner(m, c, g, v);
    if (m.kind != MetricKind::FlatL2) curvature -= inner(m, c, g, spray_quadratic(m, c, v));
    if (options.include_hessian) curvature += inner(m, c, hessian_apply(o, m, c, v), v);
  }
  for (double t : t_values) {
    if (guard && !segment_stays_immersed(c, t * v, eps)) continue;
    const double ft = value(o, c + t * v);
    report.t_values.push_back(t);
    report.remainders.push_back(std::abs(ft - (f0 + t * slope + 0.5 * t * t * curvature)));
  }
  if (report.t_values.empty()) throw GeometryError("taylor_check: every t leaves the immersion set");

  // Fit only remainders clearly above roundoff in f.
  const double floor = 32.0 * DBL_EPSILON * (1.0 + std::abs(f0));
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < report.t_values.size(); ++i) {
    if (report.remainders[i] > floor) {
      lx.push_back(std::log(report.t_values[i]));
      ly.push_back(std::log(report.remainders[i]));
    }
  }
  if (lx.size() >= 2) {
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
    report.fitted_order = sxy / sxx;
  }
  return report;
}

TangentField fourier_probe(std::size_t n, int coordinate, std::size_t k, bool sine) {
  if (coordinate != 0 && coordinate != 1) throw ValidationError("fourier_probe: coordinate must be 0 or 1");
  if (k > n / 2) throw ValidationError("fourier_probe: wavenumber above Nyquist");
  if (sine && (k == 0 || k == n / 2)) throw ValidationError("fourier_probe: sine mode vanishes on the grid");
  GridArray v = GridArray::Zero(static_cast<Eigen::Index>(n), 2);
  const Eigen::VectorXd theta = parameter_grid(n);
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const double a = static_cast<double>(k) * theta(j);
    v(j, coordinate) = sine ? std::sin(a) : std::cos(a);
  }
  return TangentField(std::move(v));
}

double rayleigh_quotient(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                         const TangentField& v) {
  const double nv = norm(m, c, v);
  if (!(nv > 0.0)) throw ValidationError("rayleigh_quotient: zero direction");
  return inner(m, c, hessian_apply(o, m, c, v), v) / (nv * nv);
}

CoercivityEstimate coercivity_estimate(const ObjectiveSpec& o, const MetricSpec& m,
                                       const LoopCurve& c, std::size_t n_random, std::uint64_t seed) {
  const std::size_t n = c.size();
  std::vector<TangentField> probes;
  for (int coord = 0; coord < 2; ++coord) {
    probes.push_back(fourier_probe(n, coord, 0, false));
    for (std::size_t k = 1; k < n / 2; ++k) {
      probes.push_back(fourier_probe(n, coord, k, false));
      probes.push_back(fourier_probe(n, coord, k, true));
    }
    probes.push_back(fourier_probe(n, coord, n / 2, false));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t r = 0; r < n_random; ++r) {
    GridArray v(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index j = 0; j < v.rows(); ++j) {
      v(j, 0) = normal(rng);
      v(j, 1) = normal(rng);
    }
    probes.emplace_back(std::move(v));
  }

  std::vector<double> quotients;
  quotients.reserve(probes.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    quotients.push_back(rayleigh_quotient(o, m, c, probes[i]));
    if (quotients[i] < quotients[best]) best = i;
  }
  const double mu = quotients[best];
  const std::size_t count = probes.size();
  CoercivityEstimate est{mu, count, std::move(probes[best]), seed, std::move(quotients)};
  return est;
}

std::string point_class_name(PointClass pc) {
  switch (pc) {
    case PointClass::NotCritical: return "NotCritical";
    case PointClass::Critical: return "Critical";
    case PointClass::SecondOrderCritical: return "SecondOrderCritical";
    case PointClass::CoerciveMinimizerCandidate: return "CoerciveMinimizerCandidate";
  }
  return "?";
}

Classification classify_point(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                              double grad_tol, std::size_t n_random, std::uint64_t seed) {
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
  Classification out;
  out.grad_norm = norm(m, c, gradient(o, m, c));
  if (out.grad_norm >= grad_tol) return out;
  out.point_class = PointClass::Critical;
  out.coercivity = coercivity_estimate(o, m, c, n_random, seed);
  const auto& q = out.coercivity->quotients;
  if (std::all_of(q.begin(), q.end(), [](double x) { return x >= -1e-8; })) {
    out.point_class = PointClass::SecondOrderCritical;
    if (out.coercivity->mu_hat >= 1e-6) out.point_class = PointClass::CoerciveMinimizerCandidate;
  }
  return out;
}

std::string classification_json(const Classification& c) {
  nlohmann::ordered_json j;
  j["class"] = point_class_name(c.point_class);
  j["grad_norm"] = c.grad_norm;
  if (c.coercivity) {
    j["mu_hat"] = c.coercivity->mu_hat;
    j["probes"] = c.coercivity->probes;
    j["seed"] = c.coercivity->seed;
  } else {
    j["mu_hat"] = nullptr;
    j["probes"] = 0;
    j["seed"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace loopopt
