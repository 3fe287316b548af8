#include "loopopt/cli.hpp"

#include "loopopt/diagnostics.hpp"
#include "loopopt/error.hpp"
#include "loopopt/finitedim.hpp"
#include "loopopt/io.hpp"
#include "loopopt/loopspace.hpp"
#include "loopopt/metrics.hpp"
#include "loopopt/objectives.hpp"
#include "loopopt/optimizer.hpp"
#include "loopopt/secondorder.hpp"
#include "loopopt/svg.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>

namespace loopopt::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// theta -> (cos^3 theta, cos theta + sin theta): the map (x, y) -> (x^3, x + y)
// restricted to the unit circle.
LoopCurve cubic_start(std::size_t n) {
  return sample_curve(n, [](double t) {
    const double x = std::cos(t), y = std::sin(t);
    return Eigen::Vector2d(x * x * x, x + y);
  });
}

// Unit square traversed at constant speed (corners at theta = k pi / 2 + pi / 4).
LoopCurve square_curve(std::size_t n) {
  return sample_curve(n, [](double t) {
    const double u = std::fmod(t / (kTwoPi / 4.0) + 0.5, 4.0);
    const int side = static_cast<int>(u);
    const double s = u - side - 0.5;
    switch (side) {
      case 0: return Eigen::Vector2d(0.5, s);
      case 1: return Eigen::Vector2d(-s, 0.5);
      case 2: return Eigen::Vector2d(-0.5, -s);
      default: return Eigen::Vector2d(s, -0.5);
    }
  });
}

LoopCurve shape_curve(const std::string& shape, std::size_t n) {
  if (shape == "circle") return sample_circle(1.0, n);
  if (shape == "ellipse") {
    return sample_curve(n, [](double t) { return Eigen::Vector2d(std::cos(t), 0.5 * std::sin(t)); });
  }
  if (shape == "square") return square_curve(n);
  throw ValidationError("unknown shape '" + shape + "' (expected circle|ellipse|square)");
}

std::size_t grid_size(const RunConfig& cfg, std::size_t fallback) { return cfg.n_samples.value_or(fallback); }

LoopCurve load_or(const RunConfig& cfg, const std::optional<fs::path>& file, LoopCurve fallback) {
  if (!file) return fallback;
  LoopCurve c = read_curve_file(*file);
  if (cfg.n_samples && *cfg.n_samples != c.size()) {
    throw ValidationError("curve file " + file->string() + " has " + std::to_string(c.size()) +
                          " samples but --n-samples is " + std::to_string(*cfg.n_samples));
  }
  return c;
}

void require_objective(const RunConfig& cfg, const std::string& expected, const char* command) {
  if (cfg.objective && *cfg.objective != expected) {
    throw ValidationError(std::string(command) + " uses the " + expected + " objective");
  }
}

class Outputs {
 public:
  Outputs(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir)) {
      throw IoError("cannot create output directory " + cfg.output_dir.string());
    }
  }

  bool csv() const { return cfg_.wants("csv"); }
  bool json() const { return cfg_.wants("json"); }
  bool svg() const { return cfg_.wants("svg"); }
  // Figures always travel with the CSV of their plotted series.
  bool figure_csv() const { return csv() || svg(); }

  void write(const std::string& name, const std::string& contents) {
    const fs::path p = cfg_.output_dir / name;
    write_file_atomic(p, contents);
    out_ << "wrote " << p.string() << '\n';
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

Json points_json(const LoopCurve& c) {
  Json pts = Json::array();
  for (std::size_t j = 0; j < c.size(); ++j) pts.push_back({c.point(j).x(), c.point(j).y()});
  return pts;
}

std::string iterates_json(const DescentTrace& t, const std::string& command) {
  Json j;
  j["command"] = command;
  j["n"] = t.iterates.front().size();
  j["stride"] = t.iterate_stride;
  Json list = Json::array();
  for (std::size_t i = 0; i < t.iterates.size(); ++i) {
    list.push_back({{"k", t.iterate_indices[i]}, {"points", points_json(t.iterates[i])}});
  }
  j["iterates"] = std::move(list);
  return j.dump(1) + "\n";
}

std::string stop_name(StopReason s) {
  switch (s) {
    case StopReason::GradientTolerance: return "gradient-tolerance";
    case StopReason::MaxIterations: return "max-iterations";
    case StopReason::Collapsed: return "collapsed";
  }
  return "?";
}

// Iterates drawn in the overlay panel: k in {0, 5, 10, 20} plus the last one.
std::vector<std::size_t> snapshot_positions(const DescentTrace& t, std::size_t max_frames) {
  std::vector<std::size_t> pos;
  const std::size_t count = t.iterates.size();
  if (max_frames == 0) {
    for (std::size_t want : {0, 5, 10, 20}) {
      for (std::size_t i = 0; i < count; ++i) {
        if (t.iterate_indices[i] == want) pos.push_back(i);
      }
    }
  } else {
    const std::size_t step = std::max<std::size_t>(1, (count + max_frames - 1) / max_frames);
    for (std::size_t i = 0; i < count; i += step) pos.push_back(i);
  }
  if (pos.empty() || pos.back() != count - 1) pos.push_back(count - 1);
  return pos;
}

svg::Panel overlay_panel(const DescentTrace& t, const std::vector<std::size_t>& pos, std::string& csv) {
  svg::Panel p;
  p.title = "iterates";
  p.x_label = "x";
  p.y_label = "y";
  p.equal_aspect = true;
  p.closed = true;
  std::ostringstream os;
  os << "k,theta,x,y\n";
  for (std::size_t i : pos) {
    const LoopCurve& c = t.iterates[i];
    const std::size_t k = t.iterate_indices[i];
    const Eigen::VectorXd theta = parameter_grid(c.size());
    svg::Series s;
    s.label = "k = " + std::to_string(k);
    for (std::size_t j = 0; j < c.size(); ++j) {
      s.x.push_back(c.point(j).x());
      s.y.push_back(c.point(j).y());
      os << k << ',' << format_double(theta(static_cast<Eigen::Index>(j))) << ',' << format_double(c.point(j).x())
         << ',' << format_double(c.point(j).y()) << '\n';
    }
    p.series.push_back(std::move(s));
  }
  csv = os.str();
  return p;
}

// Decay panel of (f - f_shift) and the gradient norm.
svg::Panel decay_panel(const DescentTrace& t, double f_shift, const std::string& f_label, std::string& csv) {
  svg::Panel p;
  p.title = "functional values and gradient norms";
  p.x_label = "iteration k";
  p.log_y = true;
  svg::Series f{f_label, {}, {}}, g{"gradient norm", {}, {}};
  std::ostringstream os;
  os << "k," << f_label << ",grad_norm\n";
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    const double fv = t.records[k].f_value - f_shift;
    f.x.push_back(static_cast<double>(k));
    f.y.push_back(fv);
    g.x.push_back(static_cast<double>(k));
    g.y.push_back(t.records[k].grad_norm);
    os << k << ',' << format_double(fv) << ',' << format_double(t.records[k].grad_norm) << '\n';
  }
  p.series = {std::move(f), std::move(g)};
  csv = os.str();
  return p;
}

void write_descent_outputs(Outputs& io, const DescentTrace& t, const std::string& command, double f_shift,
                           const std::string& f_label, std::size_t max_frames) {
  if (io.csv()) io.write("trace.csv", trace_csv(t));
  if (io.json()) io.write("iterates.json", iterates_json(t, command));
  if (io.figure_csv()) {
    std::string iter_csv, decay_csv;
    const svg::Panel a = overlay_panel(t, snapshot_positions(t, max_frames), iter_csv);
    const svg::Panel b = decay_panel(t, f_shift, f_label, decay_csv);
    io.write("figure_iterates.csv", iter_csv);
    io.write("figure_decay.csv", decay_csv);
    if (io.svg()) io.write("figure.svg", svg::render({a, b}));
  }
}

int run_exp1(const RunConfig& cfg, std::ostream& out) {
  require_objective(cfg, "track-id", "exp1");
  const std::size_t n = grid_size(cfg, 256);
  const MetricSpec m = parse_metric(cfg.metric.value_or("flat-l2"));
  RgdSettings st;
  st.rule = StepRule::constant(cfg.alpha.value_or(0.1));
  st.max_iter = cfg.steps.value_or(20);
  const LoopCurve c0 = load_or(cfg, cfg.initial_file, cubic_start(n));
  const ObjectiveSpec o = ObjectiveSpec::track_identity();
  const DescentTrace t = rgd(o, m, c0, st);

  Outputs io(cfg, out);
  write_descent_outputs(io, t, "exp1", 0.0, "f", 0);
  const double f0 = t.records.front().f_value;
  out << "exp1: " << t.steps() << " steps (" << stop_name(t.stop) << "), f0 = " << format_double(f0)
      << ", f_final = " << format_double(t.records.back().f_value) << '\n';
  return kSuccess;
}

int run_exp2(const RunConfig& cfg, std::ostream& out) {
  require_objective(cfg, "track-reg", "exp2");
  const std::size_t n = grid_size(cfg, 256);
  const MetricSpec m = parse_metric(cfg.metric.value_or("flat-l2"));
  RgdSettings st;
  st.rule = StepRule::constant(cfg.alpha.value_or(0.04));
  st.max_iter = cfg.steps.value_or(20);
  const LoopCurve target = load_or(cfg, cfg.target_file, default_tracking_target(n));
  const ObjectiveSpec o = ObjectiveSpec::track_regularized(target, cfg.lambda.value_or(0.7));
  const LoopCurve c0 = load_or(cfg, cfg.initial_file, cubic_start(target.size()));
  require_same_grid(c0.size(), target.size());
  const DescentTrace t = rgd(o, m, c0, st);
  const double f_star = *o.f_low();

  Outputs io(cfg, out);
  write_descent_outputs(io, t, "exp2", f_star, "f_minus_fstar", 0);
  if (io.json()) io.write("minimizer.json", curve_to_json(tracking_minimizer(o)));
  out << "exp2: " << t.steps() << " steps (" << stop_name(t.stop) << "), f - f* from "
      << format_double(t.records.front().f_value - f_star) << " to "
      << format_double(t.records.back().f_value - f_star) << '\n';
  return kSuccess;
}

int run_flow(const RunConfig& cfg, std::ostream& out) {
  require_objective(cfg, "length", "flow");
  const std::size_t n = grid_size(cfg, 8);
  const MetricSpec m = parse_metric(cfg.metric.value_or("inv-l2"));
  RgdSettings st;
  st.rule = StepRule::constant(cfg.alpha.value_or(1e-3));
  st.max_iter = cfg.steps.value_or(1000);
  // A full step that leaves the immersions means the flow has reached its
  // singular time on this grid; report that instead of creeping on with
  // shrunken steps.
  st.rule.max_halvings = 0;
  st.stop_on_collapse = true;
  const LoopCurve c0 = load_or(cfg, cfg.initial_file, shape_curve(cfg.shape, n));
  const DescentTrace t = rgd(ObjectiveSpec::length(), m, c0, st);

  Outputs io(cfg, out);
  write_descent_outputs(io, t, "flow", 0.0, "length", 8);
  if (io.csv()) {
    const bool circle_oracle = !cfg.initial_file && cfg.shape == "circle" && m.kind == MetricKind::InvariantL2;
    std::ostringstream os;
    os << "k,length,area,isoperimetric_ratio,radius" << (circle_oracle ? ",ode_radius" : "") << '\n';
    for (std::size_t i = 0; i < t.iterates.size(); ++i) {
      const LoopCurve& c = t.iterates[i];
      const std::size_t k = t.iterate_indices[i];
      const double len = arclength(c), area = enclosed_area(c);
      os << k << ',' << format_double(len) << ',' << format_double(area) << ','
         << format_double(len * len / (2.0 * kTwoPi * area)) << ',' << format_double(len / kTwoPi);
      if (circle_oracle) {
        // dr/dt = -1/r from r(0) = 1, sampled at t = k alpha.
        const double tk = static_cast<double>(k) * st.rule.alpha;
        os << ',' << format_double(std::sqrt(std::max(0.0, 1.0 - 2.0 * tk)));
      }
      os << '\n';
    }
    io.write("flow.csv", os.str());
  }
  if (t.stop == StopReason::Collapsed) {
    out << "collapsed at iteration " << t.steps() << '\n';
  } else {
    out << "flow: " << t.steps() << " steps (" << stop_name(t.stop) << "), length "
        << format_double(t.records.front().f_value) << " -> " << format_double(t.records.back().f_value) << '\n';
  }
  return kSuccess;
}

int run_seqdiag(const RunConfig& cfg, std::ostream& out) {
  const std::size_t n = grid_size(cfg, 256);
  const SequenceReport seq = oscillating_sequence(cfg.kmax, n);
  const LoopCurve probe_curve = load_or(cfg, cfg.initial_file, shape_curve(cfg.shape, n));
  const RegularityReport reg = h1_gradient_regularity(probe_curve, static_cast<int>(probe_curve.size() / 2));

  Outputs io(cfg, out);
  const double expected_gap = 2.0 * std::sqrt(kTwoPi);
  double worst = 0.0;
  for (double g : seq.consecutive_grad_gaps) worst = std::max(worst, std::abs(g - expected_gap));
  if (io.figure_csv()) {
    io.write("seqdiag.csv", sequence_csv(seq));
    io.write("regularity.csv", regularity_csv(reg));
  }
  if (io.json()) {
    Json j;
    j["kmax"] = cfg.kmax;
    j["n"] = n;
    j["expected_gap"] = expected_gap;
    j["max_gap_deviation"] = worst;
    j["final_curve_norm"] = seq.curve_norms.back();
    Json r;
    r["length"] = reg.length;
    r["curve_exponent"] = reg.curve_exponent ? Json(*reg.curve_exponent) : Json(nullptr);
    r["source_exponent"] = reg.source_exponent ? Json(*reg.source_exponent) : Json(nullptr);
    r["grad_exponent"] = reg.grad_exponent ? Json(*reg.grad_exponent) : Json(nullptr);
    r["diagonal_residual"] = reg.diagonal_residual;
    r["flag"] = reg.flag;
    j["regularity"] = std::move(r);
    io.write("seqdiag.json", j.dump(2) + "\n");
  }
  if (io.svg()) {
    svg::Panel a;
    a.title = "c_k = ((-1)^k / k) id";
    a.x_label = "k";
    a.log_y = true;
    svg::Series norms{"curve_norm", {}, {}}, gaps{"grad_gap", {}, {}};
    for (std::size_t i = 0; i < seq.k_values.size(); ++i) {
      norms.x.push_back(seq.k_values[i]);
      norms.y.push_back(seq.curve_norms[i]);
      if (i < seq.consecutive_grad_gaps.size()) {
        gaps.x.push_back(seq.k_values[i]);
        gaps.y.push_back(seq.consecutive_grad_gaps[i]);
      }
    }
    a.series = {std::move(norms), std::move(gaps)};
    svg::Panel b;
    b.title = "H1 length gradient spectrum";
    b.x_label = "mode";
    b.log_y = true;
    svg::Series cm{"curve_mag", {}, {}}, gm{"grad_mag", {}, {}};
    for (std::size_t i = 0; i < reg.modes.size(); ++i) {
      cm.x.push_back(reg.modes[i]);
      cm.y.push_back(reg.curve_mag[i]);
      gm.x.push_back(reg.modes[i]);
      gm.y.push_back(reg.grad_mag[i]);
    }
    b.series = {std::move(cm), std::move(gm)};
    io.write("figure.svg", svg::render({a, b}));
  }
  out << "seqdiag: kmax = " << cfg.kmax << ", max |gap - 2 sqrt(2 pi)| = " << format_double(worst)
      << ", regularity flag: " << reg.flag << '\n';
  return kSuccess;
}

int run_spray(const RunConfig& cfg, std::ostream& out) {
  if (cfg.dims.empty()) throw ValidationError("--dims needs at least one dimension");
  const auto rows = finitedim::twisted_christoffel_growth(cfg.dims);
  Outputs io(cfg, out);
  if (io.figure_csv()) io.write("spray.csv", finitedim::growth_csv(rows));
  if (io.json()) {
    Json j;
    j["family"] = "twisted";
    j["base_point"] = "harmonic";
    Json list = Json::array();
    for (const auto& r : rows) list.push_back({{"d", r.dim}, {"max_gamma", r.max_gamma}, {"condition", r.condition}});
    j["rows"] = std::move(list);
    io.write("spray.json", j.dump(2) + "\n");
  }
  if (io.svg()) {
    svg::Panel p;
    p.title = "twisted metric: max_n |Gamma(x0, e_n)|";
    p.x_label = "d";
    p.log_y = true;
    svg::Series s{"max_gamma", {}, {}};
    for (const auto& r : rows) {
      s.x.push_back(r.dim);
      s.y.push_back(r.max_gamma);
    }
    p.series = {std::move(s)};
    io.write("figure.svg", svg::render({p}));
  }
  for (const auto& r : rows) out << "d = " << r.dim << ": max_gamma = " << format_double(r.max_gamma) << '\n';
  return kSuccess;
}

int run_classify(const RunConfig& cfg, std::ostream& out) {
  const std::size_t n = grid_size(cfg, 256);
  const MetricSpec m = parse_metric(cfg.metric.value_or("flat-l2"));
  const ObjectiveKind kind = parse_objective(cfg.objective.value_or("track-reg"));
  std::optional<ObjectiveSpec> o;
  std::optional<LoopCurve> fallback;
  switch (kind) {
    case ObjectiveKind::Length:
      o = ObjectiveSpec::length();
      fallback = shape_curve(cfg.shape, n);
      break;
    case ObjectiveKind::TrackIdentity:
      o = ObjectiveSpec::track_identity();
      fallback = sample_circle(1.0, n);
      break;
    case ObjectiveKind::TrackRegularized:
      o = ObjectiveSpec::track_regularized(load_or(cfg, cfg.target_file, default_tracking_target(n)),
                                           cfg.lambda.value_or(0.7));
      fallback = tracking_minimizer(*o);
      break;
    case ObjectiveKind::LoopEnergy:
      o = ObjectiveSpec::loop_energy();
      fallback = shape_curve(cfg.shape, n);
      break;
  }
  const LoopCurve c = load_or(cfg, cfg.initial_file, *fallback);
  const double grad_tol = 1e-8 * (1.0 + norm(m, c, position_field(c)));
  const Classification cls = classify_point(*o, m, c, grad_tol, 8, cfg.seed);
  Outputs io(cfg, out);
  if (io.json()) io.write("classify.json", classification_json(cls));
  out << "class: " << point_class_name(cls.point_class) << ", grad_norm = " << format_double(cls.grad_norm);
  if (cls.coercivity) out << ", mu_hat = " << format_double(cls.coercivity->mu_hat);
  out << '\n';
  return kSuccess;
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  CLI::App app{"Gradient descent and diagnostics on spaces of closed plane curves", "loopopt"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  std::size_t n_samples = 0, steps = 0;
  double alpha = 0.0, lambda = 0.0;
  std::string metric, objective, output_dir, target_file, initial_file;

  auto* o_n = app.add_option("--n-samples", n_samples, "grid size N (even, >= 8)");
  auto* o_steps = app.add_option("--steps", steps, "descent iterations");
  auto* o_alpha = app.add_option("--alpha", alpha, "constant step size");
  auto* o_lambda = app.add_option("--lambda", lambda, "regularization weight for track-reg");
  auto* o_metric = app.add_option("--metric", metric, "flat-l2 | inv-l2 | inv-h1 | elastic");
  auto* o_obj = app.add_option("--objective", objective, "length | track-id | track-reg | energy");
  auto* o_out = app.add_option("--output-dir", output_dir, "artifact directory (default $LOOPOPT_OUTPUT_DIR or .)");
  app.add_option("--format", cfg.formats, "artifact formats")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--seed", cfg.seed, "seed for random probes");
  app.add_option("--kmax", cfg.kmax, "length of the oscillating sequence");
  app.add_option("--dims", cfg.dims, "truncation dimensions, comma separated")->delimiter(',');
  auto* o_target = app.add_option("--target-file", target_file, "tracking target curve (.json or .csv)");
  auto* o_init = app.add_option("--initial-file", initial_file, "initial curve (.json or .csv)");
  app.add_option("--shape", cfg.shape, "built-in start curve: circle | ellipse | square");

  const std::pair<const char*, Command> commands[] = {
      {"exp1", Command::Exp1}, {"exp2", Command::Exp2},   {"flow", Command::Flow},
      {"seqdiag", Command::SeqDiag}, {"spray", Command::Spray}, {"classify", Command::Classify}};
  const char* const help[] = {"track the identity from (x^3, x + y), flat L2",
                              "regularized tracking of (x, 3y/2)",
                              "length descent (curve-shortening style flow)",
                              "oscillating-sequence and H1 regularity diagnostics",
                              "Christoffel growth of the twisted sequence-space metric",
                              "second-order classification of a curve"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->fallthrough();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    exit_code = code == 0 ? kSuccess : kValidation;
    return std::nullopt;
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) cfg.command = commands[i].second;
  }
  if (*o_n) cfg.n_samples = n_samples;
  if (*o_steps) cfg.steps = steps;
  if (*o_alpha) cfg.alpha = alpha;
  if (*o_lambda) cfg.lambda = lambda;
  if (*o_metric) cfg.metric = metric;
  if (*o_obj) cfg.objective = objective;
  if (*o_target) cfg.target_file = target_file;
  if (*o_init) cfg.initial_file = initial_file;
  if (*o_out) {
    cfg.output_dir = output_dir;
  } else if (const char* env = std::getenv("LOOPOPT_OUTPUT_DIR"); env && *env) {
    cfg.output_dir = env;
  }
  exit_code = kSuccess;
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.steps && *cfg.steps < 1) throw ValidationError("--steps must be at least 1");
    switch (cfg.command) {
      case Command::Exp1: return run_exp1(cfg, out);
      case Command::Exp2: return run_exp2(cfg, out);
      case Command::Flow: return run_flow(cfg, out);
      case Command::SeqDiag: return run_seqdiag(cfg, out);
      case Command::Spray: return run_spray(cfg, out);
      case Command::Classify: return run_classify(cfg, out);
    }
  } catch (const AdmissibilityError& e) {
    err << "error: " << e.what() << " (iteration " << e.iteration() << ")\n";
    return kAdmissibility;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

int main(int argc, const char* const* argv) {
  int code = kSuccess;
  const auto cfg = parse_args(argc, argv, std::cout, std::cerr, code);
  if (!cfg) return code;
  return run(*cfg, std::cout, std::cerr);
}

}  // namespace loopopt::cli
