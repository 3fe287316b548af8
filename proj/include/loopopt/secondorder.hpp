#pragma once

#include "loopopt/loop_curve.hpp"
#include "loopopt/metrics.hpp"
#include "loopopt/objectives.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace loopopt {

struct TaylorReport {
  std::vector<double> t_values;
  std::vector<double> remainders;
  /// Least-squares slope of log remainder against log t; empty when fewer
  /// than two remainders are above the roundoff floor.
  std::optional<double> fitted_order;
};

struct TaylorOptions {
  bool include_hessian = true;
};

/// Compares f(c + t v) with the second-order model
///   f(c) + t g(grad f, v) + t^2/2 [g(Hess f[v], v) + g(grad f, a)],
/// where a = -Gamma(c, v) is the covariant acceleration of the chart line.
TaylorReport taylor_check(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                          const TangentField& v, std::vector<double> t_values,
                          TaylorOptions options = {});

struct CoercivityEstimate {
  double mu_hat = 0.0;
  std::size_t probes = 0;
  TangentField min_direction;
  std::uint64_t seed = 0;
  /// Rayleigh quotient per probe: Fourier basis first (per coordinate, mode 0,
  /// cos/sin for 1 .. N/2-1, Nyquist), then the Gaussian probes.
  std::vector<double> quotients;
};

/// Fourier basis probe: coordinate (0 = x, 1 = y), wavenumber and phase
/// (false = cosine, true = sine).
TangentField fourier_probe(std::size_t n, int coordinate, std::size_t k, bool sine);

CoercivityEstimate coercivity_estimate(const ObjectiveSpec& o, const MetricSpec& m,
                                       const LoopCurve& c, std::size_t n_random,
                                       std::uint64_t seed = 20240601);

/// Rayleigh quotient g(Hess f[v], v) / |||v|||^2.
double rayleigh_quotient(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                         const TangentField& v);

enum class PointClass { NotCritical, Critical, SecondOrderCritical, CoerciveMinimizerCandidate };

std::string point_class_name(PointClass pc);

struct Classification {
  PointClass point_class = PointClass::NotCritical;
  double grad_norm = 0.0;
  std::optional<CoercivityEstimate> coercivity;
};

Classification classify_point(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c,
                              double grad_tol, std::size_t n_random,
                              std::uint64_t seed = 20240601);

/// {"class": ..., "grad_norm": ..., "mu_hat": ..., "probes": ..., "seed": ...}
std::string classification_json(const Classification& c);

}  // namespace loopopt
