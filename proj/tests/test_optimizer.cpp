#include "loopopt/error.hpp"
#include "loopopt/io.hpp"
#include "loopopt/loopspace.hpp"
#include "loopopt/optimizer.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>
#include <sstream>

using namespace loopopt;

namespace {

constexpr double kPi = std::numbers::pi;

LoopCurve cubic_start(std::size_t n) {
  return sample_curve(n, [](double t) {
    const double x = std::cos(t), y = std::sin(t);
    return Eigen::Vector2d(x * x * x, x + y);
  });
}

DescentTrace run(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c0, double alpha, std::size_t iters) {
  RgdSettings s;
  s.rule = StepRule::constant(alpha);
  s.max_iter = iters;
  s.grad_tol = 0.0;
  return rgd(o, m, c0, s);
}

double isoperimetric_ratio(const LoopCurve& c) {
  const double l = arclength(c);
  return l * l / (4 * kPi * enclosed_area(c));
}

}  // namespace

TEST(StepRule, Validation) {
  EXPECT_THROW(StepRule::constant(0.0), ValidationError);
  EXPECT_THROW(StepRule::constant(-1.0), ValidationError);
  try {
    StepRule::constant(0.0);
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "step size must be positive");
  }
  StepRule r = StepRule::constant(0.1);
  r.shrink = 1.0;
  EXPECT_THROW(r.validate(), ValidationError);
}

TEST(Rgd, TrackIdentityContraction) {
  const DescentTrace t = run(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), cubic_start(256), 0.1, 20);
  ASSERT_EQ(t.records.size(), 21u);
  EXPECT_EQ(t.stop, StopReason::MaxIterations);
  const double f0 = t.records[0].f_value;
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    EXPECT_NEAR(t.records[k].f_value / f0, std::pow(0.64, k), 1e-10 * std::pow(0.64, k)) << k;
  }
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    const auto& r = t.records[k];
    EXPECT_NEAR(r.decrease, 0.09 * r.grad_norm * r.grad_norm, 1e-10 * r.decrease) << k;
    EXPECT_NEAR(t.records[k + 1].grad_norm / r.grad_norm, 0.8, 1e-8);
    EXPECT_EQ(r.decrease, r.f_value - t.records[k + 1].f_value);
  }
  EXPECT_EQ(t.records.back().alpha_used, 0.0);
  EXPECT_EQ(t.records.back().decrease, 0.0);
  EXPECT_TRUE(check_sufficient_decrease(t, 0.09).holds);
  const DecreaseCheck too_strict = check_sufficient_decrease(t, 0.2);
  EXPECT_FALSE(too_strict.holds);
  EXPECT_EQ(too_strict.first_violation, 0u);
}

TEST(Rgd, TrackRegularizedContraction) {
  const ObjectiveSpec o = ObjectiveSpec::track_regularized(default_tracking_target(256), 0.7);
  const DescentTrace t = run(o, MetricSpec::flat_l2(), cubic_start(256), 0.04, 20);
  const LoopCurve cstar = tracking_minimizer(o);
  const MetricSpec flat = MetricSpec::flat_l2();
  for (std::size_t k = 0; k + 1 < t.iterates.size(); ++k) {
    const double a = norm(flat, cstar, displacement(t.iterates[k], cstar));
    const double b = norm(flat, cstar, displacement(t.iterates[k + 1], cstar));
    EXPECT_NEAR(b / a, 0.864, 1e-9) << k;
    const double ga = t.records[k].f_value - *o.f_low(), gb = t.records[k + 1].f_value - *o.f_low();
    EXPECT_NEAR(gb / ga, 0.864 * 0.864, 1e-8) << k;
  }
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    const auto& r = t.records[k];
    EXPECT_NEAR(r.decrease, 0.04 * (1 - 1.7 * 0.04) * r.grad_norm * r.grad_norm, 1e-10 * r.decrease);
  }
  EXPECT_TRUE(check_sufficient_decrease(t, 0.03728).holds);
}

TEST(Rgd, CriticalStartDoesNotMove) {
  const LoopCurve id = sample_circle(1.0, 64);
  RgdSettings s;
  s.rule = StepRule::constant(0.1);
  s.max_iter = 20;
  const DescentTrace t = rgd(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), id, s);
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].grad_norm, 0.0);
  EXPECT_EQ(t.stop, StopReason::GradientTolerance);
  EXPECT_EQ(t.final_iterate().points(), id.points());
}

TEST(Rgd, StoredIteratesReproduceRecordedValues) {
  const DescentTrace t = run(ObjectiveSpec::length(), MetricSpec::invariant_l2(), loopopt::testing::ellipse(16), 1e-3, 50);
  ASSERT_EQ(t.iterates.size(), t.records.size());
  for (std::size_t i = 0; i < t.iterates.size(); ++i) {
    EXPECT_EQ(value(ObjectiveSpec::length(), t.iterates[i]), t.records[t.iterate_indices[i]].f_value);
  }
}

TEST(Rgd, ThinsLongRuns) {
  const DescentTrace t = run(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), cubic_start(16), 1e-4, 2500);
  EXPECT_EQ(t.records.size(), 2501u);
  EXPECT_EQ(t.iterate_stride, 3u);
  EXPECT_LE(t.iterates.size(), 1001u);
  EXPECT_EQ(t.iterate_indices.back(), 2500u);
}

TEST(Rgd, GuardHalvesStepsThatCrossTheOrigin) {
  // grad = c on the unit circle. alpha = 2 reflects it through the point
  // curve, alpha = 1 lands on the point curve, alpha = 1/2 is admissible.
  const DescentTrace t = run(ObjectiveSpec::length(), MetricSpec::invariant_l2(), sample_circle(1.0, 16), 2.0, 1);
  EXPECT_EQ(t.records[0].halvings, 2);
  EXPECT_EQ(t.records[0].alpha_used, 0.5);
  EXPECT_NEAR(t.records[1].f_value, kPi, 1e-12);
}

TEST(Rgd, CollapseIsReportedOrThrown) {
  RgdSettings s;
  s.rule = StepRule::constant(2.0);
  s.rule.max_halvings = 0;
  s.max_iter = 5;
  const LoopCurve c = sample_circle(1.0, 16);
  try {
    rgd(ObjectiveSpec::length(), MetricSpec::invariant_l2(), c, s);
    FAIL() << "expected AdmissibilityError";
  } catch (const AdmissibilityError& e) {
    EXPECT_STREQ(e.what(), "left admissible set");
    EXPECT_EQ(e.iteration(), 0u);
  }
  s.stop_on_collapse = true;
  const DescentTrace t = rgd(ObjectiveSpec::length(), MetricSpec::invariant_l2(), c, s);
  EXPECT_EQ(t.stop, StopReason::Collapsed);
  EXPECT_EQ(t.steps(), 0u);
}

TEST(Rgd, RejectsNonImmersedStart) {
  RgdSettings s;
  s.rule = StepRule::constant(0.1);
  EXPECT_THROW(rgd(ObjectiveSpec::length(), MetricSpec::flat_l2(), LoopCurve(GridArray::Zero(8, 2)), s), GeometryError);
  s.max_iter = 0;
  EXPECT_THROW(rgd(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), sample_circle(1, 8), s), ValidationError);
}

TEST(Rgd, CircleFlowFollowsExplicitRecursion) {
  // Invariant-L2 length gradient on a circle of radius r is c / r^2, so one
  // step maps r to r - alpha / r exactly.
  const double alpha = 1e-3;
  const DescentTrace t = run(ObjectiveSpec::length(), MetricSpec::invariant_l2(), sample_circle(1.0, 8), alpha, 450);
  double r = 1.0;
  for (std::size_t k = 0; k < t.iterates.size(); ++k) {
    EXPECT_NEAR(t.records[k].f_value / (2 * kPi), r, 1e-10) << k;
    r -= alpha / r;
  }
}

TEST(Rgd, EllipseFlowDecreasesIsoperimetricRatio) {
  const DescentTrace t =
      run(ObjectiveSpec::length(), MetricSpec::invariant_l2(), loopopt::testing::ellipse(16, 1.0, 0.5), 1e-4, 1500);
  double prev = isoperimetric_ratio(t.iterates.front());
  for (std::size_t i = 1; i < t.iterates.size(); ++i) {
    const double q = isoperimetric_ratio(t.iterates[i]);
    EXPECT_LE(q, prev + 1e-12) << t.iterate_indices[i];
    prev = q;
  }
  EXPECT_LT(prev, isoperimetric_ratio(t.iterates.front()));
}

TEST(Rgd, H1FlowOutlastsL2Flow) {
  const LoopCurve e = loopopt::testing::ellipse(16, 1.0, 0.5);
  RgdSettings s;
  s.rule = StepRule::constant(1e-3);
  s.rule.max_halvings = 0;
  s.max_iter = 3000;
  s.stop_on_collapse = true;
  const DescentTrace l2 = rgd(ObjectiveSpec::length(), MetricSpec::invariant_l2(), e, s);
  ASSERT_EQ(l2.stop, StopReason::Collapsed);
  s.max_iter = 2 * l2.steps();
  const DescentTrace h1 = rgd(ObjectiveSpec::length(), MetricSpec::invariant_h1(), e, s);
  EXPECT_NE(h1.stop, StopReason::Collapsed);
  EXPECT_GT(h1.steps(), l2.steps());
}

TEST(ConvergenceBound, Exp1HoldsForEveryK) {
  const DescentTrace t = run(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), cubic_start(256), 0.1, 20);
  const auto rows = convergence_bound(t, 0.0, 0.09);
  ASSERT_EQ(rows.size(), 20u);
  for (const auto& r : rows) EXPECT_TRUE(r.holds) << r.K;
  EXPECT_THROW(convergence_bound(t, t.records.back().f_value + 1.0, 0.09), ValidationError);
}

TEST(ConvergenceBound, SingleIterateAndOptimalStart) {
  const DescentTrace t = run(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), cubic_start(64), 0.1, 1);
  const auto rows = convergence_bound(t, 0.0, 0.09);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].min_grad_norm, t.records[0].grad_norm);
  EXPECT_NEAR(rows[0].bound, std::sqrt(t.records[0].f_value / 0.09), 1e-14);
  EXPECT_TRUE(rows[0].holds);

  RgdSettings s;
  s.rule = StepRule::constant(0.1);
  const DescentTrace opt = rgd(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), sample_circle(1, 64), s);
  const auto r0 = convergence_bound(opt, opt.records[0].f_value, 0.09);
  EXPECT_EQ(r0[0].bound, 0.0);
  EXPECT_TRUE(r0[0].holds);
}

TEST(TraceCsv, SchemaAndRoundTrip) {
  const DescentTrace t = run(ObjectiveSpec::track_identity(), MetricSpec::flat_l2(), cubic_start(32), 0.1, 3);
  std::istringstream is(trace_csv(t));
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "iter,f,grad_norm,alpha,decrease,halvings");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    EXPECT_EQ(std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr), t.records[rows].f_value);
    ++rows;
  }
  EXPECT_EQ(rows, 4u);
}
