#pragma once

#include "loopopt/loop_curve.hpp"

#include <string>
#include <string_view>

namespace loopopt {

enum class MetricKind { FlatL2, InvariantL2, InvariantH1, ElasticSRVT };

/// Weak Riemannian inner product on tangent fields of a LoopCurve.
///
///  - FlatL2:      int <u, v> dtheta
///  - InvariantL2: int <u, v> |c'| dtheta
///  - InvariantH1: InvariantL2(u, v) + InvariantL2(u_s, v_s), u_s = u'/|c'|
///  - ElasticSRVT: FlatL2(Dq(u), Dq(v)) + FlatL2(P u, P v), where Dq is the
///    SRVT differential and P projects onto the kernel of d/dtheta on the
///    grid (constants and the Nyquist mode).
struct MetricSpec {
  MetricKind kind = MetricKind::FlatL2;

  static MetricSpec flat_l2() { return {MetricKind::FlatL2}; }
  static MetricSpec invariant_l2() { return {MetricKind::InvariantL2}; }
  static MetricSpec invariant_h1() { return {MetricKind::InvariantH1}; }
  static MetricSpec elastic() { return {MetricKind::ElasticSRVT}; }

  bool needs_immersion() const { return kind != MetricKind::FlatL2; }
};

/// CLI spelling: flat-l2 | inv-l2 | inv-h1 | elastic.
MetricSpec parse_metric(std::string_view name);
std::string metric_name(const MetricSpec& m);

/// (2*pi/N) sum <u_j, v_j>.
double flat_inner(const TangentField& u, const TangentField& v);

double inner(const MetricSpec& m, const LoopCurve& c, const TangentField& u, const TangentField& v);
double norm(const MetricSpec& m, const LoopCurve& c, const TangentField& u);

/// Solves inner(m, c, u, v) = flat_inner(w, v) for all grid fields v.
TangentField riesz(const MetricSpec& m, const LoopCurve& c, const TangentField& w);

/// Quadratic form Gamma(c, v) of the metric spray in the global chart:
///   g(Gamma(c, v), w) = 1/2 d_1 g(c; v, v; w) - d_1 g(c; v, w; v).
/// Zero for FlatL2.
TangentField spray_quadratic(const MetricSpec& m, const LoopCurve& c, const TangentField& v);

/// Polarization B(c, u, w) = (Gamma(u + w) - Gamma(u) - Gamma(w)) / 2.
TangentField spray_bilinear(const MetricSpec& m, const LoopCurve& c, const TangentField& u,
                            const TangentField& w);

}  // namespace loopopt
