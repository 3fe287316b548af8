#include "loopopt/error.hpp"
#include "loopopt/loopspace.hpp"
#include "loopopt/objectives.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <unsupported/Eigen/FFT>
#include <gtest/gtest.h>

#include <numbers>

using namespace loopopt;
using loopopt::testing::ellipse;
using loopopt::testing::fourier_h1_length_gradient;
using loopopt::testing::max_abs;
using loopopt::testing::random_curve;
using loopopt::testing::random_smooth_field;

namespace {

constexpr double kPi = std::numbers::pi;

const MetricSpec kMetrics[] = {MetricSpec::flat_l2(), MetricSpec::invariant_l2(), MetricSpec::invariant_h1(),
                               MetricSpec::elastic()};

std::vector<ObjectiveSpec> all_objectives(std::size_t n) {
  return {ObjectiveSpec::length(), ObjectiveSpec::track_identity(),
          ObjectiveSpec::track_regularized(default_tracking_target(n), 0.7), ObjectiveSpec::loop_energy()};
}

std::string label(const ObjectiveSpec& o, const MetricSpec& m) { return objective_name(o.kind()) + "/" + metric_name(m); }

}  // namespace

TEST(Objectives, ParseAndSpecInvariants) {
  for (auto kind : {ObjectiveKind::Length, ObjectiveKind::TrackIdentity, ObjectiveKind::TrackRegularized,
                    ObjectiveKind::LoopEnergy}) {
    EXPECT_EQ(parse_objective(objective_name(kind)), kind);
  }
  EXPECT_THROW(parse_objective("area"), ValidationError);
  EXPECT_THROW(ObjectiveSpec::track_regularized(default_tracking_target(16), -0.1), ValidationError);
  EXPECT_FALSE(ObjectiveSpec::length().target().has_value());
}

TEST(Objectives, Values) {
  EXPECT_NEAR(value(ObjectiveSpec::length(), sample_circle(3.0, 32)), 6 * kPi, 1e-12);
  EXPECT_EQ(value(ObjectiveSpec::track_identity(), sample_circle(1.0, 32)), 0.0);
  const ObjectiveSpec o = ObjectiveSpec::track_regularized(default_tracking_target(64), 0.7);
  EXPECT_NEAR(value(o, tracking_minimizer(o)), 0.7 / 1.7 * 13 * kPi / 4, 1e-10);
  EXPECT_NEAR(*o.f_low(), 0.7 / 1.7 * 13 * kPi / 4, 1e-10);
  EXPECT_NEAR(value(ObjectiveSpec::loop_energy(), sample_circle(2.0, 16)), 0.5 * 2 * kPi * 4, 1e-12);
}

TEST(Objectives, DifferentialExamples) {
  const LoopCurve c = sample_circle(1.0, 32);
  EXPECT_NEAR(differential(ObjectiveSpec::length(), c, position_field(c)), 2 * kPi, 1e-12);
  EXPECT_NEAR(differential(ObjectiveSpec::loop_energy(), c, position_field(c)), 2 * kPi, 1e-12);
  std::mt19937_64 rng(1);
  EXPECT_NEAR(differential(ObjectiveSpec::track_identity(), c, random_smooth_field(32, rng)), 0.0, 1e-14);
  const LoopCurve flat(GridArray::Constant(8, 2, 0.0));
  EXPECT_THROW(differential(ObjectiveSpec::length(), flat, TangentField::zero(8)), GeometryError);
}

TEST(Objectives, DifferentialMatchesValueToSecondOrder) {
  std::mt19937_64 rng(2);
  const LoopCurve c = random_curve(64, rng);
  const TangentField v = random_smooth_field(64, rng);
  for (const auto& o : all_objectives(64)) {
    const double d = differential(o, c, v);
    std::vector<double> errs;
    for (double h : {1e-2, 1e-3, 1e-4}) {
      const double fd = (value(o, c + h * v) - value(o, c - h * v)) / (2 * h);
      errs.push_back(std::abs(fd - d));
    }
    if (o.kind() == ObjectiveKind::Length) {
      // Non-quadratic: the error must fall like h^2.
      EXPECT_GE(std::log10(errs[0] / errs[1]), 1.9);
      EXPECT_GE(std::log10(errs[1] / errs[2]), 1.9);
    } else {
      // Quadratic objectives: central differences are exact up to roundoff.
      for (double e : errs) EXPECT_LT(e, 1e-9 * (1 + std::abs(d)));
    }
  }
}

TEST(Objectives, AnalyticGradientExamples) {
  const LoopCurve c = sample_circle(1.0, 32);
  EXPECT_LT(max_abs(gradient(ObjectiveSpec::length(), MetricSpec::invariant_l2(), c).vectors() - c.points()), 1e-8);
  EXPECT_LT(max_abs(gradient(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), c).vectors()), 1e-15);
  // Length(r id) = 2 pi |r|, so the flat gradient is sgn(r) id (g(id, id) = 2 pi).
  for (int k = 1; k <= 5; ++k) {
    for (double sign : {1.0, -1.0}) {
      const LoopCurve ck(sign / k * c.points());
      const GridArray g = gradient(ObjectiveSpec::length(), MetricSpec::flat_l2(), ck).vectors();
      EXPECT_LT(max_abs(g - sign * c.points()), 1e-8) << sign / k;
    }
  }
}

// The H1 length gradient carries the O(h^4) error of the kernel quadrature,
// hence N = 128.
TEST(Objectives, GradientDifferentialCompatibilityAllPairs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const LoopCurve c = random_curve(128, rng);
    for (const auto& o : all_objectives(128)) {
      for (const auto& m : kMetrics) {
        const TangentField g = gradient(o, m, c);
        for (int i = 0; i < 32; ++i) {
          const TangentField v = random_smooth_field(128, rng);
          const double scale = norm(m, c, g) * norm(m, c, v);
          EXPECT_LT(std::abs(inner(m, c, g, v) - differential(o, c, v)), 1e-6 * scale) << label(o, m);
        }
      }
    }
  }
}

TEST(Objectives, AnalyticBranchesAgreeWithRiesz) {
  std::mt19937_64 rng(4);
  const LoopCurve curves[] = {random_curve(128, rng), ellipse(128), sample_circle(0.7, 128)};
  for (const auto& c : curves) {
    for (const auto& o : all_objectives(128)) {
      for (const auto& m : kMetrics) {
        const GridArray a = gradient(o, m, c).vectors();
        const GridArray b = numeric_gradient(o, m, c).vectors();
        EXPECT_LT(max_abs(a - b), 1e-6 * max_abs(b)) << label(o, m);
      }
    }
  }
}

TEST(Objectives, KernelQuadratureMatchesFourierSolve) {
  const LoopCurve gamma = resample_arclength(ellipse(512));
  const double length = arclength(gamma);
  const GridArray kernel = h1_length_gradient_kernel(gamma).vectors();
  const GridArray oracle = fourier_h1_length_gradient(gamma, length);
  EXPECT_LT(max_abs(kernel - oracle), 1e-5 * max_abs(oracle));
  // Uniform check tolerance: a non-uniform grid is refused.
  EXPECT_THROW(h1_length_gradient_kernel(ellipse(64)), ValidationError);
}

TEST(Objectives, H1LengthGradientOnNonUniformGridPullsBack) {
  // Gradient at a node of c equals the kernel gradient at the same point of gamma.
  const LoopCurve c = ellipse(256);
  const GridArray g = gradient(ObjectiveSpec::length(), MetricSpec::invariant_h1(), c).vectors();
  const LoopCurve gamma = resample_arclength(c);
  const GridArray gk = h1_length_gradient_kernel(gamma).vectors();
  // theta = 0 and theta = pi are fixed by the symmetric reparametrization.
  EXPECT_LT((g.row(0) - gk.row(0)).norm(), 1e-8);
  EXPECT_LT((g.row(128) - gk.row(128)).norm(), 1e-8);
}

TEST(Objectives, EnergyGradientConstantSpeedBranch) {
  const LoopCurve c = sample_circle(2.0, 32);
  // Mode-1 curve at speed 2: multiplier s k^2 / (s^2 + k^2) = 2/5.
  EXPECT_LT(max_abs(gradient(ObjectiveSpec::loop_energy(), MetricSpec::invariant_h1(), c).vectors() -
                    0.4 * c.points()),
            1e-12);
}

TEST(Objectives, HessianClosedForms) {
  std::mt19937_64 rng(5);
  const TangentField v = random_smooth_field(64, rng);
  const LoopCurve c = random_curve(64, rng);
  const ObjectiveSpec reg = ObjectiveSpec::track_regularized(default_tracking_target(64), 0.7);
  EXPECT_LT(max_abs(hessian_apply(reg, MetricSpec::flat_l2(), c, v).vectors() - 3.4 * v.vectors()), 1e-14);
  EXPECT_LT(max_abs(hessian_apply(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), c, v).vectors() -
                    2.0 * v.vectors()),
            1e-14);
  const GridArray fd = hessian_apply_fd(reg, MetricSpec::flat_l2(), c, v).vectors();
  EXPECT_LT(max_abs(fd - 3.4 * v.vectors()), 1e-6 * max_abs(3.4 * v.vectors()));
}

// N = 128 for the same reason as the compatibility test: the inv-h1 length
// Hessian differentiates the quadrature-based gradient.
TEST(Objectives, HessianIsSymmetric) {
  std::mt19937_64 rng(6);
  const LoopCurve curves[] = {sample_circle(1.0, 128), random_curve(128, rng)};
  for (const auto& c : curves) {
    for (const auto& o : all_objectives(128)) {
      for (const auto& m : kMetrics) {
        const TangentField u = random_smooth_field(128, rng), v = random_smooth_field(128, rng);
        const double a = inner(m, c, hessian_apply(o, m, c, u), v);
        const double b = inner(m, c, u, hessian_apply(o, m, c, v));
        const double scale = std::abs(a) + std::abs(b) + norm(m, c, u) * norm(m, c, v);
        EXPECT_LT(std::abs(a - b), 1e-6 * scale) << label(o, m);
      }
    }
  }
}
