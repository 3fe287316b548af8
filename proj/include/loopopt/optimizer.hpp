#pragma once

#include "loopopt/loop_curve.hpp"
#include "loopopt/metrics.hpp"
#include "loopopt/objectives.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace loopopt {

enum class StepKind { Constant, Backtracking };

/// Step-size rule. Both kinds halve (by `shrink`) only to keep the chart
/// segment inside the admissible set; Backtracking additionally restarts each
/// iteration from the last accepted step instead of `alpha`.
struct StepRule {
  StepKind kind = StepKind::Constant;
  double alpha = 0.1;
  double shrink = 0.5;
  int max_halvings = 40;

  static StepRule constant(double alpha);
  void validate() const;
};

struct DescentRecord {
  double f_value = 0.0;
  double grad_norm = 0.0;
  double alpha_used = 0.0;
  double decrease = 0.0;  // f_value - next f_value; 0 on the terminal row
  int halvings = 0;
};

enum class StopReason { GradientTolerance, MaxIterations, Collapsed };

/// Per-iterate ledger of a descent run. There is one record per visited
/// iterate; the last record is the terminal iterate (alpha_used = 0,
/// decrease = 0), so a run of K steps has K + 1 records.
struct DescentTrace {
  std::vector<DescentRecord> records;
  std::vector<LoopCurve> iterates;   // every `iterate_stride`-th iterate, plus the last
  std::vector<std::size_t> iterate_indices;
  std::size_t iterate_stride = 1;
  StopReason stop = StopReason::MaxIterations;

  std::size_t steps() const { return records.empty() ? 0 : records.size() - 1; }
  const LoopCurve& final_iterate() const { return iterates.back(); }
};

struct RgdSettings {
  StepRule rule;
  std::size_t max_iter = 20;
  /// Defaults to 1e-8 * (1 + grad_norm_0).
  std::optional<double> grad_tol;
  /// If true, running out of halvings ends the run with StopReason::Collapsed
  /// instead of throwing AdmissibilityError.
  bool stop_on_collapse = false;
};

/// Riemannian gradient descent in the global chart:
///   c_{k+1} = c_k - alpha_k grad f(c_k).
DescentTrace rgd(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c0,
                 const RgdSettings& settings);

struct DecreaseCheck {
  bool holds = true;
  std::optional<std::size_t> first_violation;
};

/// f(p_k) - f(p_{k+1}) >= c |||grad f(p_k)|||^2 at every step, with additive
/// slack 1e-12 (1 + |f(p_k)|).
DecreaseCheck check_sufficient_decrease(const DescentTrace& t, double c);

struct BoundRow {
  std::size_t K = 0;
  double min_grad_norm = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// min_{k<K} |||grad f(p_k)||| <= sqrt((f_0 - f_low) / c) / sqrt(K) for
/// K = 1 .. steps. Throws ValidationError if f_low exceeds a recorded value.
std::vector<BoundRow> convergence_bound(const DescentTrace& t, double f_low, double c);

/// Header "iter,f,grad_norm,alpha,decrease,halvings", 17 significant digits.
std::string trace_csv(const DescentTrace& t);

}  // namespace loopopt
