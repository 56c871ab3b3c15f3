#include "slamobs/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "slamobs/svgplot.hpp"
#include "slamobs/tolerances.hpp"

namespace slamobs {

namespace {

constexpr double kPi = std::numbers::pi;

void require_unit_axis(const Vec3& axis, const char* what) {
  if (std::abs(axis.norm() - 1.0) > tol::unit_axis) {
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
  }
}

Mat3 axis_angle(double angle, const Vec3& axis) {
  require_unit_axis(axis, "rotation axis");
  return rodrigues(angle, axis);
}

}  // namespace

TrajectoryPreset TrajectorySpec::to_preset() const {
  TrajectoryPreset preset;
  preset.kind = kind;
  preset.omega_body = omega_body;
  preset.v_body = v_body;
  preset.switch_period = switch_period;
  preset.R0 = axis_angle(r0_angle, r0_axis);
  preset.p0 = p0;
  return preset;
}

void ExperimentConfig::validate() const {
  const auto n = landmarks.cols();
  if (n < 1) {
    throw std::invalid_argument("at least one landmark is required");
  }
  gains.validate(static_cast<int>(n));
  noise.validate();
  if (!(run.dt > 0.0)) {
    throw std::invalid_argument("dt must be positive");
  }
  if (!(run.t_end >= 0.0)) {
    throw std::invalid_argument("t_end must be nonnegative");
  }
  if (run.max_jumps_per_instant < 1) {
    throw std::invalid_argument("max_jumps_per_instant must be at least 1");
  }
  if (trajectory.kind == TrajectoryKind::figure_eight && !(trajectory.switch_period > 0.0)) {
    throw std::invalid_argument("figure-eight trajectories need a positive switch period");
  }
  require_unit_axis(trajectory.r0_axis, "trajectory R0 axis");
  require_unit_axis(initial_estimate.rhat_axis, "initial estimate axis");
  if (!std::isfinite(initial_estimate.eta_scale)) {
    throw std::invalid_argument("eta_scale must be finite");
  }
  for (double a : sweep_angles) {
    if (!std::isfinite(a)) {
      throw std::invalid_argument("sweep angles must be finite");
    }
  }
}

ExperimentConfig preset_experiment1() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::exp1_circle;
  cfg.observer = ObserverChoice::both;
  cfg.seed = 42;

  cfg.landmarks.resize(3, 4);
  cfg.landmarks.col(0) = Vec3(10, 0, 0);
  cfg.landmarks.col(1) = Vec3(0, 15, 0);
  cfg.landmarks.col(2) = Vec3(-10, 0, 0);
  cfg.landmarks.col(3) = Vec3(0, -10, 0);

  cfg.gains.k = {1.0, 1.0, 1.0, 1.0};
  cfg.gains.k_o = 0.5;
  cfg.gains.delta = 0.1;
  cfg.gains.theta = kPi / 2.0;
  cfg.gains.ell = Vec3(1, 0, 0);
  cfg.gains.q_max = 10;

  cfg.noise.range_kind = RangeNoiseKind::uniform;
  cfg.noise.range_lo = 0.0;
  cfg.noise.range_hi = 0.4;
  cfg.noise.bearing_kind = BearingNoiseKind::gaussian;
  cfg.noise.bearing_sigma = 0.05;

  cfg.run.dt = 0.01;
  cfg.run.t_end = 60.0;

  cfg.trajectory.kind = TrajectoryKind::circle;
  cfg.trajectory.omega_body = Vec3(0, 0, 0.3);
  cfg.trajectory.v_body = Vec3(2, 0, 0);
  cfg.trajectory.switch_period = 0.0;
  cfg.trajectory.r0_angle = 0.0;
  cfg.trajectory.r0_axis = Vec3(1, 0, 0);
  cfg.trajectory.p0 = Vec3::Zero();

  cfg.initial_estimate.rhat_angle = kPi / 4.0;
  cfg.initial_estimate.rhat_axis = Vec3(1, 0, 0);
  cfg.initial_estimate.phat0 = Vec3(-2, 0, 7);
  cfg.initial_estimate.eta_scale = 0.4;

  cfg.bias.b_omega = Vec3(-0.02, 0.05, 0.03);
  cfg.bias.b_v = Vec3(0.2, 0.05, 0.1);

  cfg.sweep_angles = {0.9 * kPi, 0.95 * kPi, 0.99 * kPi};
  return cfg;
}

ExperimentConfig preset_experiment2() {
  ExperimentConfig cfg = preset_experiment1();
  cfg.experiment = ExperimentKind::exp2_eight;

  cfg.trajectory.kind = TrajectoryKind::figure_eight;
  cfg.trajectory.omega_body = Vec3(0, 0, 0.4);
  cfg.trajectory.v_body = Vec3(2, 0, 0);
  cfg.trajectory.switch_period = 2.0 * kPi / 0.4;
  cfg.trajectory.p0 = Vec3(0, 0, 4);

  cfg.initial_estimate.rhat_angle = kPi / 3.0;
  cfg.initial_estimate.rhat_axis = Vec3(1, 0, 0);
  cfg.initial_estimate.phat0 = Vec3::Zero();
  cfg.initial_estimate.eta_scale = 0.4;
  return cfg;
}

ExperimentConfig preset_sweep() {
  ExperimentConfig cfg = preset_experiment1();
  cfg.noise.range_kind = RangeNoiseKind::none;
  cfg.noise.bearing_kind = BearingNoiseKind::none;
  cfg.run.t_end = 30.0;
  cfg.gains.k_o = 0.02;
  cfg.gains.theta = kPi / 4.0;
  cfg.gains.q_max = 20;
  return cfg;
}

ErrorMetrics compute_metrics(const TrueState& truth, const HybridObserverState& s,
                             const BiasVector& b, const ObserverGains& gains,
                             const MeasurementSet& meas) {
  ErrorMetrics m;
  const Mat3 Rtilde = truth.X.R * s.Xhat.R.transpose();
  m.attitude_error = rotation_angle(Rtilde);
  m.position_error = (truth.X.p - Rtilde * s.Xhat.p).norm();
  m.landmark_error = (truth.X.eta - Rtilde * s.Xhat.eta).norm();

  const BiasEstimate bhat = extract_bias(s);
  m.bias_omega_error = (b.b_omega - bhat.b_omega).norm();
  m.bias_v_error = (b.b_v - bhat.b_v).norm();

  const Eigen::MatrixXd A = build_cost_matrix(gains, s.Xhat.landmark_count());
  m.alignment_cost = cost_from_error(error_element(truth, s.Xhat), A);
  m.lyapunov_value = lyapunov(s, truth, b, gains);
  m.measured_cost = cost_from_measurements(s.Xhat, meas, gains);
  return m;
}

namespace {

bool metrics_finite(const ErrorMetrics& m) {
  return std::isfinite(m.attitude_error) && std::isfinite(m.position_error) &&
         std::isfinite(m.landmark_error) && std::isfinite(m.bias_omega_error) &&
         std::isfinite(m.bias_v_error) && std::isfinite(m.lyapunov_value) &&
         std::isfinite(m.measured_cost);
}

/// Bridges the simulator and observer into the shape the hybrid engine runs:
/// truth advances inside input_at, so each grid time samples the measurement
/// stream exactly once regardless of how many jumps follow.
class ObserverSystem {
 public:
  using State = HybridObserverState;
  using Input = MeasurementSet;

  ObserverSystem(const ExperimentConfig& cfg, bool hybrid)
      : cfg_(cfg),
        hybrid_(hybrid),
        preset_(cfg.trajectory.to_preset()),
        rng_(cfg.seed, static_cast<int>(cfg.landmarks.cols())),
        gains_(cfg.gains),
        noise_(cfg.noise) {
    gains_.literal_jump_map = cfg.literal_jump_map;
    noise_.seed = cfg.seed;
    if (cfg.literal_noise) {
      noise_.bearing_sigma = 1.0;
    }
    truth_.t = 0.0;
    truth_.X = GroupElement(preset_.R0, preset_.p0, cfg.landmarks);

    const Mat3 Rhat0 = axis_angle(cfg.initial_estimate.rhat_angle,
                                  cfg.initial_estimate.rhat_axis);
    state.Xhat = GroupElement(Rhat0, cfg.initial_estimate.phat0,
                              (cfg.initial_estimate.eta_scale * cfg.landmarks).eval());
    state.Vbhat = AlgebraElement::zero(cfg.landmarks.cols());
    state.q = 0;
  }

  State state;

  Input input_at(double t) {
    if (t > truth_.t) {
      truth_ = propagate_true(truth_, preset_, t - truth_.t);
    }
    const AlgebraElement vel = true_velocity(preset_, truth_.t);
    last_meas_ = measure_landmarks(truth_, noise_, rng_);
    last_meas_.Vm = measure_velocity(vel, cfg_.bias);
    return last_meas_;
  }

  std::optional<int> jump_index(const State& s, const Input& meas) const {
    if (!hybrid_) {
      return std::nullopt;
    }
    const JumpDecision d = jump_decision(s, meas, gains_);
    const bool fire = cfg_.run.priority == JumpPriority::jump_first
                          ? d.jump
                          : d.improvement > gains_.delta;
    if (!fire) {
      return std::nullopt;
    }
    return d.q;
  }

  State jump(const State& s, int q) {
    JumpEvent ev;
    ev.t = truth_.t;
    ev.q_from = s.q;
    ev.q_to = q;
    ev.cost_before = cost_from_measurements(s.Xhat, last_meas_, gains_);
    State next = apply_jump(s, q, gains_);
    ev.cost_after = cost_from_measurements(next.Xhat, last_meas_, gains_);
    ev.bias_bitwise_equal = s.Vbhat.omega == next.Vbhat.omega &&
                            s.Vbhat.v == next.Vbhat.v && s.Vbhat.xi == next.Vbhat.xi;
    events_.push_back(ev);
    return next;
  }

  State flow_step(const State& s, const Input& meas, double dt) const {
    const ObserverFlow f = flow(s, meas, gains_);
    GroupElement next_x = s.Xhat;
    if (cfg_.run.integrator == Integrator::rkmk4) {
      next_x = rkmk4_step(s.Xhat,
                          [&](const GroupElement& y) {
                            State probe{y, s.Vbhat, s.q};
                            return flow(probe, meas, gains_).xhat_direction;
                          },
                          dt);
    } else {
      next_x = s.Xhat * algebra_exp(f.xhat_direction, dt);
    }
    if (orthonormality_drift(next_x.R) > tol::reorthonormalize_at) {
      next_x = GroupElement(nearest_rotation(next_x.R), next_x.p, next_x.eta);
    }
    State next;
    next.Xhat = next_x;
    next.Vbhat = s.Vbhat;
    next.Vbhat.omega += dt * f.vbhat_dot.omega;
    next.Vbhat.v += dt * f.vbhat_dot.v;
    next.Vbhat.xi += dt * f.vbhat_dot.xi;
    next.q = s.q;
    return next;
  }

  void record(HybridTime time, const State& s, const Input& meas) {
    TraceRow row;
    row.t = time.t;
    row.j = time.j;
    row.q = s.q;
    row.m = compute_metrics(truth_, s, cfg_.bias, gains_, meas);
    if (!metrics_finite(row.m)) {
      throw NumericalError("metrics became non-finite at t=" + format_double(time.t) +
                           " row " + std::to_string(rows_.size()));
    }
    rows_.push_back(row);
    true_positions_.push_back(truth_.X.p);
    est_positions_.push_back(s.Xhat.p);
    max_drift_ = std::max(max_drift_, orthonormality_drift(s.Xhat.R));
  }

  double max_rotation_drift() const { return max_drift_; }

  std::vector<TraceRow> take_rows() { return std::move(rows_); }
  std::vector<JumpEvent> take_events() { return std::move(events_); }
  std::vector<Vec3> take_true_positions() { return std::move(true_positions_); }
  std::vector<Vec3> take_est_positions() { return std::move(est_positions_); }

 private:
  ExperimentConfig cfg_;
  bool hybrid_;
  TrajectoryPreset preset_;
  TrueState truth_;
  MeasurementRng rng_;
  ObserverGains gains_;
  NoiseModel noise_;
  MeasurementSet last_meas_;
  std::vector<TraceRow> rows_;
  std::vector<JumpEvent> events_;
  std::vector<Vec3> true_positions_;
  std::vector<Vec3> est_positions_;
  double max_drift_ = 0.0;
};

ErrorMetrics mean_tail_metrics(const std::vector<TraceRow>& rows, double t_end) {
  const double cutoff = 0.8 * t_end - 1e-12;
  ErrorMetrics acc;
  long count = 0;
  for (const TraceRow& row : rows) {
    if (row.t < cutoff) {
      continue;
    }
    acc.attitude_error += row.m.attitude_error;
    acc.position_error += row.m.position_error;
    acc.landmark_error += row.m.landmark_error;
    acc.bias_omega_error += row.m.bias_omega_error;
    acc.bias_v_error += row.m.bias_v_error;
    acc.lyapunov_value += row.m.lyapunov_value;
    acc.measured_cost += row.m.measured_cost;
    acc.alignment_cost += row.m.alignment_cost;
    ++count;
  }
  if (count == 0) {
    return rows.empty() ? ErrorMetrics{} : rows.back().m;
  }
  const double inv = 1.0 / static_cast<double>(count);
  acc.attitude_error *= inv;
  acc.position_error *= inv;
  acc.landmark_error *= inv;
  acc.bias_omega_error *= inv;
  acc.bias_v_error *= inv;
  acc.lyapunov_value *= inv;
  acc.measured_cost *= inv;
  acc.alignment_cost *= inv;
  return acc;
}

RunResult run_one(const ExperimentConfig& cfg, bool hybrid) {
  ObserverSystem sys(cfg, hybrid);
  const auto start = std::chrono::steady_clock::now();
  run_hybrid(sys, cfg.run);
  const auto stop = std::chrono::steady_clock::now();

  RunResult result;
  result.rows = sys.take_rows();
  result.jump_events = sys.take_events();
  result.true_positions = sys.take_true_positions();
  result.est_positions = sys.take_est_positions();
  result.jump_count = static_cast<long>(result.jump_events.size());
  result.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  result.max_rotation_drift = sys.max_rotation_drift();
  result.final_metrics = result.rows.back().m;
  result.steady_state = mean_tail_metrics(result.rows, cfg.run.t_end);
  return result;
}

void write_text_file(const std::filesystem::path& path, const std::string& text,
                     std::vector<std::string>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out) {
    throw IoError("short write to " + path.string());
  }
  files.push_back(path.string());
}

std::vector<double> column(const std::vector<TraceRow>& rows, double ErrorMetrics::*field) {
  std::vector<double> values;
  values.reserve(rows.size());
  for (const TraceRow& row : rows) {
    values.push_back(row.m.*field);
  }
  return values;
}

std::vector<double> times(const std::vector<TraceRow>& rows) {
  std::vector<double> values;
  values.reserve(rows.size());
  for (const TraceRow& row : rows) {
    values.push_back(row.t);
  }
  return values;
}

void append_series(std::vector<PlotSeries>& series, const char* label,
                   const std::optional<RunResult>& run, double ErrorMetrics::*field) {
  if (!run) {
    return;
  }
  series.push_back({label, times(run->rows), column(run->rows, field)});
}

void write_metric_plots(const std::filesystem::path& dir, const ExperimentOutput& out,
                        std::vector<std::string>& files) {
  struct Spec {
    const char* file;
    const char* title;
    const char* y_label;
    double ErrorMetrics::*field;
    bool log_y;
  };
  const Spec specs[] = {
      {"plot_attitude.svg", "Attitude error", "angle [rad]", &ErrorMetrics::attitude_error, false},
      {"plot_position.svg", "Position error", "distance [m]", &ErrorMetrics::position_error, false},
      {"plot_landmarks.svg", "Landmark error", "Frobenius norm [m]", &ErrorMetrics::landmark_error,
       false},
      {"plot_bias_omega.svg", "Gyro bias error", "norm [rad/s]", &ErrorMetrics::bias_omega_error,
       false},
      {"plot_bias_v.svg", "Velocity bias error", "norm [m/s]", &ErrorMetrics::bias_v_error, false},
      {"plot_lyapunov.svg", "Lyapunov function", "value", &ErrorMetrics::lyapunov_value, true},
      {"plot_cost.svg", "Measured cost", "value", &ErrorMetrics::measured_cost, true},
  };
  for (const Spec& spec : specs) {
    std::vector<PlotSeries> series;
    append_series(series, "hybrid", out.hybrid, spec.field);
    append_series(series, "smooth", out.smooth, spec.field);
    write_text_file(dir / spec.file,
                    line_plot_svg(spec.title, "t [s]", spec.y_label, series, spec.log_y), files);
  }
}

std::vector<double> position_axis(const std::vector<Vec3>& points, int axis) {
  std::vector<double> values;
  values.reserve(points.size());
  for (const Vec3& p : points) {
    values.push_back(p(axis));
  }
  return values;
}

void write_trajectory_plot(const std::filesystem::path& path, const ExperimentConfig& cfg,
                           const ExperimentOutput& out, int x_axis, int y_axis,
                           const char* x_label, const char* y_label,
                           std::vector<std::string>& files) {
  std::vector<PlotSeries> series;
  const RunResult* any = out.hybrid ? &*out.hybrid : (out.smooth ? &*out.smooth : nullptr);
  if (any) {
    series.push_back({"true", position_axis(any->true_positions, x_axis),
                      position_axis(any->true_positions, y_axis)});
  }
  if (out.hybrid) {
    series.push_back({"hybrid", position_axis(out.hybrid->est_positions, x_axis),
                      position_axis(out.hybrid->est_positions, y_axis)});
  }
  if (out.smooth) {
    series.push_back({"smooth", position_axis(out.smooth->est_positions, x_axis),
                      position_axis(out.smooth->est_positions, y_axis)});
  }
  std::vector<PlotMarker> markers;
  for (Eigen::Index i = 0; i < cfg.landmarks.cols(); ++i) {
    markers.push_back({cfg.landmarks(x_axis, i), cfg.landmarks(y_axis, i)});
  }
  write_text_file(path, scatter_plot_svg("Trajectory", x_label, y_label, series, markers), files);
}

}  // namespace

std::string resolve_output_dir(const ExperimentConfig& cfg) {
  if (!cfg.output_dir.empty()) {
    return cfg.output_dir;
  }
  if (const char* env = std::getenv("SLAMOBS_OUT"); env != nullptr && env[0] != '\0') {
    return env;
  }
  return "out";
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, bool write_files) {
  cfg.validate();

  ExperimentOutput out;
  if (cfg.observer != ObserverChoice::smooth) {
    out.hybrid = run_one(cfg, true);
  }
  if (cfg.observer != ObserverChoice::hybrid) {
    out.smooth = run_one(cfg, false);
  }

  if (!write_files) {
    return out;
  }

  const std::filesystem::path dir = resolve_output_dir(cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }

  if (out.hybrid) {
    write_text_file(dir / "trace_hybrid.csv", trace_to_csv(out.hybrid->rows), out.files);
  }
  if (out.smooth) {
    write_text_file(dir / "trace_smooth.csv", trace_to_csv(out.smooth->rows), out.files);
  }
  write_text_file(dir / "summary.json", summary_to_json(cfg, out), out.files);
  write_metric_plots(dir, out, out.files);
  write_trajectory_plot(dir / "plot_traj_xy.svg", cfg, out, 0, 1, "x [m]", "y [m]", out.files);
  write_trajectory_plot(dir / "plot_traj_xz.svg", cfg, out, 0, 2, "x [m]", "z [m]", out.files);
  return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg,
                                const std::vector<double>& angles) {
  std::vector<SweepRow> rows;
  for (double angle : angles) {
    ExperimentConfig swept = cfg;
    swept.observer = ObserverChoice::both;
    swept.initial_estimate.rhat_angle = angle;
    swept.initial_estimate.rhat_axis = cfg.gains.ell;
    const ExperimentOutput out = run_experiment(swept, false);

    const auto emit = [&](const char* name, const RunResult& run) {
      SweepRow row;
      row.angle_rad = angle;
      row.observer = name;
      row.jumps = run.jump_count;
      row.att_err_rad = run.final_metrics.attitude_error;
      row.pos_err_m = run.final_metrics.position_error;
      row.lyapunov_value = run.final_metrics.lyapunov_value;
      row.converged = run.final_metrics.attitude_error < 0.1;
      rows.push_back(row);
    };
    emit("hybrid", *out.hybrid);
    emit("smooth", *out.smooth);
  }
  return rows;
}

}  // namespace slamobs
