#include "loopopt/optimizer.hpp"

#include "loopopt/error.hpp"
#include "loopopt/io.hpp"
#include "loopopt/loopspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace loopopt {

StepRule StepRule::constant(double alpha) {
  StepRule r;
  r.alpha = alpha;
  r.validate();
  return r;
}

void StepRule::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("step size must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ValidationError("shrink factor must lie in (0, 1)");
  if (max_halvings < 0) throw ValidationError("max_halvings must be nonnegative");
}

DescentTrace rgd(const ObjectiveSpec& o, const MetricSpec& m, const LoopCurve& c0,
                 const RgdSettings& settings) {
  settings.rule.validate();
  if (settings.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  const bool guard = o.needs_immersion(m);
  if (guard) require_immersion(c0);
  const double eps = guard ? default_immersion_eps(c0) : 0.0;

  DescentTrace trace;
  trace.iterate_stride = settings.max_iter + 1 <= 1000 ? 1 : (settings.max_iter + 1 + 999) / 1000;

  LoopCurve c = c0;
  double f = value(o, c);
  double tol = 0.0;
  double alpha_start = settings.rule.alpha;

  for (std::size_t k = 0;; ++k) {
    if (!std::isfinite(f)) throw AdmissibilityError("non-finite objective value", k);
    const TangentField g = gradient(o, m, c);
    const double gn = norm(m, c, g);
    if (!std::isfinite(gn)) throw AdmissibilityError("non-finite gradient norm", k);
    if (k == 0) tol = settings.grad_tol.value_or(1e-8 * (1.0 + gn));

    DescentRecord rec;
    rec.f_value = f;
    rec.grad_norm = gn;

    const bool store = k % trace.iterate_stride == 0;
    auto finish = [&](StopReason why) {
      trace.records.push_back(rec);
      trace.iterates.push_back(c);
      trace.iterate_indices.push_back(k);
      trace.stop = why;
    };
    if (gn < tol) {
      finish(StopReason::GradientTolerance);
      break;
    }
    if (k == settings.max_iter) {
      finish(StopReason::MaxIterations);
      break;
    }

    double alpha = alpha_start;
    int halvings = 0;
    bool collapsed = false;
    while (guard && !segment_stays_immersed(c, -alpha * g, eps)) {
      if (halvings == settings.rule.max_halvings) {
        collapsed = true;
        break;
      }
      alpha *= settings.rule.shrink;
      ++halvings;
    }
    if (collapsed) {
      if (!settings.stop_on_collapse) throw AdmissibilityError("left admissible set", k);
      finish(StopReason::Collapsed);
      break;
    }

    LoopCurve next = c - alpha * g;
    const double f_next = value(o, next);
    if (!std::isfinite(f_next)) throw AdmissibilityError("non-finite objective value", k + 1);
    rec.alpha_used = alpha;
    rec.decrease = f - f_next;
    rec.halvings = halvings;
    trace.records.push_back(rec);
    if (store) {
      trace.iterates.push_back(c);
      trace.iterate_indices.push_back(k);
    }
    if (settings.rule.kind == StepKind::Backtracking) alpha_start = alpha;
    c = std::move(next);
    f = f_next;
  }
  return trace;
}

DecreaseCheck check_sufficient_decrease(const DescentTrace& t, double c) {
  if (t.records.size() < 2) throw ValidationError("sufficient-decrease check needs at least one step");
  if (!(c > 0.0)) throw ValidationError("decrease constant must be positive");
  DecreaseCheck out;
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    const DescentRecord& r = t.records[k];
    const double slack = 1e-12 * (1.0 + std::abs(r.f_value));
    if (r.decrease + slack < c * r.grad_norm * r.grad_norm) {
      out.holds = false;
      out.first_violation = k;
      break;
    }
  }
  return out;
}

std::vector<BoundRow> convergence_bound(const DescentTrace& t, double f_low, double c) {
  if (t.records.empty()) throw ValidationError("empty trace");
  if (!(c > 0.0)) throw ValidationError("decrease constant must be positive");
  for (const auto& r : t.records) {
    if (f_low > r.f_value) throw ValidationError("f_low exceeds a recorded objective value");
  }
  const double f0 = t.records.front().f_value;
  const double scale = std::sqrt((f0 - f_low) / c);
  std::vector<BoundRow> rows;
  // A single-iterate trace still reports K = 1.
  const std::size_t k_max = std::max<std::size_t>(1, t.records.size() - 1);
  double running = t.records.front().grad_norm;
  for (std::size_t K = 1; K <= k_max; ++K) {
    running = std::min(running, t.records[K - 1].grad_norm);
    BoundRow row;
    row.K = K;
    row.min_grad_norm = running;
    row.bound = scale / std::sqrt(static_cast<double>(K));
    row.holds = row.min_grad_norm <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

std::string trace_csv(const DescentTrace& t) {
  std::ostringstream os;
  os << "iter,f,grad_norm,alpha,decrease,halvings\n";
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    const DescentRecord& r = t.records[k];
    os << k << ',' << format_double(r.f_value) << ',' << format_double(r.grad_norm) << ','
       << format_double(r.alpha_used) << ',' << format_double(r.decrease) << ',' << r.halvings << '\n';
  }
  return os.str();
}

}  // namespace loopopt
