#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slamobs/hybrid.hpp"
#include "slamobs/observer.hpp"
#include "slamobs/sim.hpp"

namespace slamobs {

/// JSON text that does not describe a config (syntax or wrong shape/keys).
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem failures, annotated with the offending path.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A metric stopped being finite; carries the first offending row.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { exp1_circle, exp2_eight, custom };
enum class ObserverChoice { hybrid, smooth, both };

/// Trajectory description as configured; rotations are axis-angle so config
/// files stay human-writable. to_preset() materializes the rotation matrix.
struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::circle;
  Vec3 omega_body = Vec3::Zero();
  Vec3 v_body = Vec3::Zero();
  double switch_period = 0.0;
  double r0_angle = 0.0;
  Vec3 r0_axis = Vec3(1, 0, 0);
  Vec3 p0 = Vec3::Zero();

  TrajectoryPreset to_preset() const;
};

struct InitialEstimate {
  double rhat_angle = 0.0;
  Vec3 rhat_axis = Vec3(1, 0, 0);
  Vec3 phat0 = Vec3::Zero();
  double eta_scale = 1.0;  // estimated landmarks start at eta_scale * eta
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::custom;
  ObserverChoice observer = ObserverChoice::both;
  std::uint64_t seed = 42;
  ObserverGains gains;
  NoiseModel noise;
  HybridRunConfig run;
  TrajectorySpec trajectory;
  Mat3X landmarks = Mat3X::Zero(3, 0);
  InitialEstimate initial_estimate;
  BiasVector bias;
  bool literal_jump_map = false;
  bool literal_noise = false;  // bearing noise at unit variance when set
  std::vector<double> sweep_angles;
  std::string output_dir;

  void validate() const;  // throws std::invalid_argument
};

ExperimentConfig preset_experiment1();
ExperimentConfig preset_experiment2();

/// Antipodal-recovery study settings: experiment-1 geometry, no noise, short
/// horizon, fine jump grid. The checked-in sweep config mirrors this.
ExperimentConfig preset_sweep();

/// Canonical JSON: fixed key order, shortest round-trip numbers, 2-space
/// indent, trailing newline. serialize(parse(serialize(c))) is byte-stable.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

struct ErrorMetrics {
  double attitude_error = 0.0;   // rad
  double position_error = 0.0;   // m
  double landmark_error = 0.0;   // m, Frobenius over columns
  double bias_omega_error = 0.0;
  double bias_v_error = 0.0;
  double lyapunov_value = 0.0;
  double measured_cost = 0.0;
  double alignment_cost = 0.0;  // group-error part of lyapunov, not serialized
};

ErrorMetrics compute_metrics(const TrueState& truth, const HybridObserverState& s,
                             const BiasVector& b, const ObserverGains& gains,
                             const MeasurementSet& meas);

struct TraceRow {
  double t = 0.0;
  long j = 0;
  int q = 0;
  ErrorMetrics m;
};

struct JumpEvent {
  double t = 0.0;
  int q_from = 0;
  int q_to = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
  bool bias_bitwise_equal = false;
};

struct RunResult {
  std::vector<TraceRow> rows;
  std::vector<JumpEvent> jump_events;
  std::vector<Vec3> true_positions;  // one per row, for trajectory plots
  std::vector<Vec3> est_positions;
  long jump_count = 0;
  double wall_ms = 0.0;
  double max_rotation_drift = 0.0;  // worst ||Rhat^T Rhat - I||_F over the rows
  ErrorMetrics final_metrics;
  ErrorMetrics steady_state;  // mean over the final fifth of the horizon
};

struct ExperimentOutput {
  std::optional<RunResult> hybrid;
  std::optional<RunResult> smooth;
  std::vector<std::string> files;  // paths written, empty when not writing
};

/// Runs the configured observers against a fresh simulation sharing one
/// measurement stream. With write_files set, emits per-observer trace CSVs,
/// a summary JSON, and SVG plots into the resolved output directory.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, bool write_files);

/// Output directory resolution: config value, then SLAMOBS_OUT, then ./out.
std::string resolve_output_dir(const ExperimentConfig& cfg);

struct SweepRow {
  double angle_rad = 0.0;
  std::string observer;
  long jumps = 0;
  double att_err_rad = 0.0;
  double pos_err_m = 0.0;
  double lyapunov_value = 0.0;
  bool converged = false;  // attitude error below 0.1 rad at the horizon
};

/// Reruns cfg with the initial attitude error swept over the given angles
/// about the jump axis, both observers per angle.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg,
                                const std::vector<double>& angles);

std::string trace_to_csv(const std::vector<TraceRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string summary_to_json(const ExperimentConfig& cfg, const ExperimentOutput& out);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Runs the built-in oracle and invariant suites, appending one line per
/// suite to the report. Returns the number of failed suites.
int self_check(std::string& report);

}  // namespace slamobs
