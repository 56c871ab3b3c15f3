// Acceptance gate: ten checks, one verdict line each, spanning the operator
// layer, the observer's variational identities, and closed-loop behavior of
// both estimator variants. Exit status is the number of criteria missed.
//
// Checks 5, 7 and the middle clause of 8 target convergence of the absolute
// estimation error. The implemented update laws drive the measurement
// residuals to zero, which pins the state only up to a rotation of the whole
// scene about the origin plus a common offset, so the absolute error settles
// at that unobservable element instead of at identity. Those checks stay in
// the gate as stated and report their measured values.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slamobs/experiment.hpp"
#include "slamobs/observer.hpp"
#include "slamobs/slamobs.h"

namespace {

using namespace slamobs;

constexpr double kPi = std::numbers::pi;

std::string approx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct Criterion {
  int id = 0;
  const char* label = "";
  bool pass = false;
  std::string detail;
  std::vector<std::string> lines;  // indented context under the verdict line
  double seconds = 0.0;
  double budget = 0.0;  // wall-clock ceiling in seconds, 0 = unbounded
};

// One entry per executed jump, pooled across every scenario the gate runs.
struct CollectedJump {
  double drop = 0.0;
  bool bias_ok = false;
  double delta = 0.0;
};

void collect_jumps(const ExperimentOutput& out, double delta,
                   std::vector<CollectedJump>& sink) {
  for (const std::optional<RunResult>* run : {&out.hybrid, &out.smooth}) {
    if (!run->has_value()) {
      continue;
    }
    for (const JumpEvent& e : (*run)->jump_events) {
      sink.push_back({e.cost_before - e.cost_after, e.bias_bitwise_equal, delta});
    }
  }
}

ExperimentConfig noise_free(ExperimentConfig cfg) {
  cfg.noise.range_kind = RangeNoiseKind::none;
  cfg.noise.bearing_kind = BearingNoiseKind::none;
  return cfg;
}

void operator_oracles(Criterion& c) {
  oracle::Rng rng(401);

  int vex_misses = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 v = rng.vec3(5.0);
    if (!(vex(skew(v)) == v)) {
      ++vex_misses;
    }
  }

  double series_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double theta = rng.uniform(-kPi, kPi);
    const Vec3 axis = rng.unit_axis();
    series_gap = std::max(
        series_gap,
        (rodrigues(theta, axis) - oracle::exp_series(theta * skew(axis))).norm());
  }

  double mul_gap = 0.0;
  double inv_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const GroupElement a = rng.group(4);
    const GroupElement b = rng.group(4);
    mul_gap = std::max(mul_gap, ((a * b).matrix() - a.matrix() * b.matrix()).norm());
    inv_gap = std::max(inv_gap,
                       (a.inverse().matrix() - a.matrix().inverse()).norm());
  }

  c.pass = vex_misses == 0 && series_gap < 1e-10 && mul_gap < 1e-12 && inv_gap < 1e-12;
  c.detail = "vex(skew) mismatches " + std::to_string(vex_misses) +
             ", rotation exp vs series " + approx(series_gap) + " (< 1e-10), mul " +
             approx(mul_gap) + " / inv " + approx(inv_gap) + " vs dense (< 1e-12)";
}

void algebra_identities(Criterion& c) {
  oracle::Rng rng(402);

  double pair_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const AlgebraElement v = rng.algebra(4);
    const Eigen::MatrixXd b = rng.dense(8, 8);
    pair_gap = std::max(
        pair_gap, std::abs(frobenius_inner(v.matrix(), b) -
                           frobenius_inner(v.matrix(), algebra_project(b).matrix())));
  }

  double cyc_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::MatrixXd a = rng.dense(8, 8);
    const Eigen::MatrixXd b = rng.dense(8, 8);
    const Eigen::MatrixXd d = rng.dense(8, 8);
    const Eigen::MatrixXd e = rng.dense(8, 8);
    const double t1 = (a * b * d * e).trace();
    const double t2 = (d * e * a * b).trace();
    const double t3 = (e * a * b * d).trace();
    const double scale = std::abs(t1) + 1.0;
    cyc_gap = std::max(cyc_gap,
                       std::max(std::abs(t1 - t2), std::abs(t1 - t3)) / scale);
  }

  // The conjugation swap proj(X B) = proj(X^{-T} B) is only used on matrices
  // whose bottom rows vanish; assert it there and show it breaks elsewhere.
  double swap_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const GroupElement x = rng.group(4);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(8, 8);
    b.topRows(3) = rng.dense(3, 8, 2.0);
    swap_gap = std::max(
        swap_gap,
        (algebra_project(x.matrix() * b).matrix() -
         algebra_project(x.inverse().matrix().transpose() * b).matrix())
            .norm());
  }
  const GroupElement xg = rng.group(4);
  const Eigen::MatrixXd bg = rng.dense(8, 8, 2.0);
  const double generic_gap =
      (algebra_project(xg.matrix() * bg).matrix() -
       algebra_project(xg.inverse().matrix().transpose() * bg).matrix())
          .norm();

  c.pass = pair_gap < 1e-12 && cyc_gap < 1e-10 && swap_gap < 1e-12 &&
           generic_gap > 1e-3;
  c.detail = "pairing " + approx(pair_gap) + " (< 1e-12), cyclic trace " +
             approx(cyc_gap) + " rel (< 1e-10); swap holds on zero-bottom-row inputs (" +
             approx(swap_gap) + ") and fails generically (" + approx(generic_gap) + ")";
}

void gradient_check(Criterion& c) {
  oracle::Rng rng(403);
  const double eps = 1e-6;
  double worst_rel = 0.0;

  for (const Eigen::Index n : {Eigen::Index(1), Eigen::Index(4)}) {
    for (int i = 0; i < 100; ++i) {
      ObserverGains gains;
      gains.k.clear();
      for (Eigen::Index j = 0; j < n; ++j) {
        gains.k.push_back(rng.uniform(0.5, 2.0));
      }
      const GroupElement y = rng.group(n, 2.0);
      const Eigen::MatrixXd a = build_cost_matrix(gains, n);
      const AlgebraElement grad = cost_gradient(y, a);
      const AlgebraElement h = rng.algebra(n, 1.0);

      const double plus = cost_from_error(y * algebra_exp(h, eps), a);
      const double minus = cost_from_error(y * algebra_exp(h, -eps), a);
      const double fd = (plus - minus) / (2.0 * eps);
      const double analytic = frobenius_inner(grad.matrix(), h.matrix());
      worst_rel = std::max(worst_rel,
                           std::abs(fd - analytic) / (1.0 + std::abs(analytic)));
    }
  }

  c.pass = worst_rel < 1e-5;
  c.detail = "100 random error/direction pairs per landmark count in {1, 4}, worst "
             "relative gap " + approx(worst_rel) + " (< 1e-05)";
}

void cost_equivalence(Criterion& c) {
  oracle::Rng rng(404);
  double worst = 0.0;

  for (int i = 0; i < 500; ++i) {
    const GroupElement x = rng.group(4, 6.0);
    const GroupElement xhat = rng.group(4, 6.0);
    ObserverGains gains;
    gains.k.clear();
    for (int j = 0; j < 4; ++j) {
      gains.k.push_back(rng.uniform(0.2, 3.0));
    }
    const TrueState truth{x, 0.0};
    const NoiseModel clean;
    MeasurementRng mrng(1, 4);
    const MeasurementSet meas = measure_landmarks(truth, clean, mrng);

    const double from_meas = cost_from_measurements(xhat, meas, gains);
    const double from_err =
        cost_from_error(error_element(truth, xhat), build_cost_matrix(gains, 4));
    worst = std::max(worst, std::abs(from_meas - from_err));
  }

  c.pass = worst < 1e-10;
  c.detail = "500 noise-free instances, worst absolute gap " + approx(worst) +
             " (< 1e-10)";
}

double max_flow_rise(const RunResult& run) {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < run.rows.size(); ++i) {
    if (run.rows[i + 1].j != run.rows[i].j) {
      continue;  // jump row, covered by the jump-decrease check
    }
    worst = std::max(worst,
                     run.rows[i + 1].m.lyapunov_value - run.rows[i].m.lyapunov_value);
  }
  return worst;
}

void flow_monotonicity(Criterion& c, std::vector<CollectedJump>& jumps) {
  ExperimentConfig cfg = noise_free(preset_experiment1());
  cfg.observer = ObserverChoice::both;
  const ExperimentOutput out = run_experiment(cfg, false);
  collect_jumps(out, cfg.gains.delta, jumps);

  const double hybrid_rise = max_flow_rise(*out.hybrid);
  const double smooth_rise = max_flow_rise(*out.smooth);
  const bool time_ok = out.hybrid->wall_ms < 10e3 && out.smooth->wall_ms < 10e3;

  c.pass = hybrid_rise <= 1e-8 && smooth_rise <= 1e-8 && time_ok;
  c.detail = "worst per-step rise over 60 s: hybrid " + approx(hybrid_rise) +
             ", smooth " + approx(smooth_rise) + " (allowed 1e-08)";
  if (!time_ok) {
    c.detail += "; a run exceeded 10 s";
  }
}

void jump_discipline(Criterion& c, const std::vector<CollectedJump>& jumps) {
  double worst_margin = std::numeric_limits<double>::infinity();
  bool bias_ok = true;
  for (const CollectedJump& e : jumps) {
    worst_margin = std::min(worst_margin, e.drop - (e.delta - 1e-9));
    bias_ok = bias_ok && e.bias_ok;
  }

  c.pass = !jumps.empty() && worst_margin >= 0.0 && bias_ok;
  if (jumps.empty()) {
    c.detail = "no jumps executed anywhere, nothing to verify";
    return;
  }
  c.detail = std::to_string(jumps.size()) +
             " jumps pooled from all scenario runs, smallest margin above the "
             "required drop " + approx(worst_margin) + ", bias bitwise preserved: " +
             (bias_ok ? "yes" : "NO");
}

struct ConvergenceRun {
  std::string name;
  ErrorMetrics m;
  double wall_s = 0.0;
};

bool within_bounds(const ErrorMetrics& m) {
  return m.attitude_error < 1e-2 && m.position_error < 1e-2 &&
         m.landmark_error < 5e-2 && m.bias_omega_error < 1e-2 &&
         m.bias_v_error < 1e-2;
}

std::vector<ConvergenceRun> convergence_runs(double dt,
                                             std::vector<CollectedJump>& jumps) {
  std::vector<ConvergenceRun> runs;
  const struct {
    const char* name;
    ExperimentConfig (*make)();
  } scenarios[] = {{"circle", &preset_experiment1},
                   {"figure-eight", &preset_experiment2}};
  for (const auto& sc : scenarios) {
    ExperimentConfig cfg = noise_free(sc.make());
    cfg.run.dt = dt;
    cfg.observer = ObserverChoice::both;
    const ExperimentOutput out = run_experiment(cfg, false);
    collect_jumps(out, cfg.gains.delta, jumps);
    runs.push_back({std::string(sc.name) + " hybrid", out.hybrid->final_metrics,
                    out.hybrid->wall_ms / 1e3});
    runs.push_back({std::string(sc.name) + " smooth", out.smooth->final_metrics,
                    out.smooth->wall_ms / 1e3});
  }
  return runs;
}

void convergence(Criterion& c, std::vector<CollectedJump>& jumps) {
  const auto describe = [&](double dt, const std::vector<ConvergenceRun>& runs) {
    for (const ConvergenceRun& r : runs) {
      c.lines.push_back("dt " + approx(dt) + " " + r.name + ": att " +
                        approx(r.m.attitude_error) + " rad, pos " +
                        approx(r.m.position_error) + " m, lmk " +
                        approx(r.m.landmark_error) + " m, bias " +
                        approx(r.m.bias_omega_error) + " / " +
                        approx(r.m.bias_v_error));
    }
  };
  const auto all_ok = [](const std::vector<ConvergenceRun>& runs) {
    bool ok = true;
    for (const ConvergenceRun& r : runs) {
      ok = ok && within_bounds(r.m) && r.wall_s < 30.0;
    }
    return ok;
  };

  const auto coarse = convergence_runs(0.01, jumps);
  describe(0.01, coarse);
  if (all_ok(coarse)) {
    c.pass = true;
    c.detail = "att/pos < 0.01, lmk < 0.05, bias < 0.01 at t = 60 s, met at dt 0.01";
    return;
  }

  const auto fine = convergence_runs(0.001, jumps);
  describe(0.001, fine);
  c.pass = all_ok(fine);
  c.detail = std::string("att/pos < 0.01, lmk < 0.05, bias < 0.01 at t = 60 s: ") +
             (c.pass ? "missed at dt 0.01, met at dt 0.001"
                     : "missed at dt 0.01 and at dt 0.001");
}

void antipodal_separation(Criterion& c, std::vector<CollectedJump>& jumps) {
  const ExperimentConfig cfg = preset_sweep();
  bool all_jumped = true;
  bool all_recovered = true;
  bool all_separated = true;

  for (const double angle : cfg.sweep_angles) {
    ExperimentConfig swept = cfg;
    swept.observer = ObserverChoice::both;
    swept.initial_estimate.rhat_angle = angle;
    swept.initial_estimate.rhat_axis = cfg.gains.ell;
    const ExperimentOutput out = run_experiment(swept, false);
    collect_jumps(out, swept.gains.delta, jumps);

    const RunResult& h = *out.hybrid;
    const RunResult& s = *out.smooth;
    all_jumped = all_jumped && h.jump_count >= 1;
    all_recovered = all_recovered && h.final_metrics.attitude_error < 0.1;
    all_separated = all_separated && s.final_metrics.lyapunov_value >
                                         h.final_metrics.lyapunov_value;
    c.lines.push_back(
        "angle " + approx(angle) + " rad: hybrid jumps " +
        std::to_string(h.jump_count) + ", att " +
        approx(h.final_metrics.attitude_error) + " rad, V " +
        approx(h.final_metrics.lyapunov_value) + "; smooth att " +
        approx(s.final_metrics.attitude_error) + " rad, V " +
        approx(s.final_metrics.lyapunov_value));
  }

  c.pass = all_jumped && all_recovered && all_separated;
  c.detail = std::string("hybrid jumped: ") + (all_jumped ? "yes" : "NO") +
             "; hybrid att < 0.1 rad at t = 30 s: " + (all_recovered ? "yes" : "NO") +
             "; smooth lyapunov above hybrid: " + (all_separated ? "yes" : "NO");
}

void constraint_preservation(Criterion& c, std::vector<CollectedJump>& jumps) {
  ExperimentConfig cfg = preset_experiment1();
  cfg.observer = ObserverChoice::hybrid;
  cfg.run.t_end = 1000.0;  // 1e5 steps at the preset dt of 0.01
  const ExperimentOutput out = run_experiment(cfg, false);
  collect_jumps(out, cfg.gains.delta, jumps);

  const double drift = out.hybrid->max_rotation_drift;
  c.pass = drift < 1e-9;
  c.detail = std::to_string(out.hybrid->rows.size()) + " snapshots, worst drift " +
             approx(drift) + " (< 1e-09)";
}

void determinism(Criterion& c) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "slamobs_acceptance_det";
  std::error_code ec;
  fs::remove_all(base, ec);

  slamobs_config* cfg = slamobs_config_preset(1);
  if (cfg == nullptr) {
    c.detail = "preset unavailable";
    return;
  }
  const std::array<fs::path, 2> dirs = {base / "a", base / "b"};
  bool ran = slamobs_config_set_duration(cfg, 10.0) == SLAMOBS_OK;
  for (const fs::path& dir : dirs) {
    ran = ran &&
          slamobs_config_set_output_dir(cfg, dir.string().c_str()) == SLAMOBS_OK &&
          slamobs_run(cfg, 1, nullptr, nullptr) == SLAMOBS_OK;
  }
  if (!ran) {
    c.detail = std::string("run failed: ") + slamobs_last_error();
    slamobs_config_destroy(cfg);
    return;
  }
  slamobs_config_destroy(cfg);

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  size_t bytes = 0;
  bool equal = true;
  for (const char* name : {"trace_hybrid.csv", "trace_smooth.csv"}) {
    const std::string a = slurp(dirs[0] / name);
    const std::string b = slurp(dirs[1] / name);
    equal = equal && !a.empty() && a == b;
    bytes += a.size();
  }
  fs::remove_all(base, ec);

  c.pass = equal;
  c.detail = "compared " + std::to_string(bytes) + " bytes of traces across two runs: " +
             (equal ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::vector<CollectedJump> jumps;
  std::vector<Criterion> results;

  const auto timed = [&](int id, const char* label, double budget, auto&& fn) {
    Criterion c;
    c.id = id;
    c.label = label;
    c.budget = budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0.0 && c.seconds > c.budget) {
      c.pass = false;
      c.detail += "; exceeded the " + approx(c.budget) + " s budget";
    }
    results.push_back(std::move(c));
  };

  timed(1, "operator layer matches dense oracles", 5.0,
        [&](Criterion& c) { operator_oracles(c); });
  timed(2, "projection pairing and trace identities hold, conjugation swap scoped",
        5.0, [&](Criterion& c) { algebra_identities(c); });
  timed(3, "cost gradient agrees with central differences", 10.0,
        [&](Criterion& c) { gradient_check(c); });
  timed(4, "measurement cost equals trace-form cost", 5.0,
        [&](Criterion& c) { cost_equivalence(c); });
  timed(5, "lyapunov value never rises along noise-free flows", 20.0,
        [&](Criterion& c) { flow_monotonicity(c, jumps); });
  timed(7, "noise-free runs reach tight absolute error bounds by t = 60 s", 0.0,
        [&](Criterion& c) { convergence(c, jumps); });
  timed(8, "antipodal starts: hybrid jumps to recovery, smooth lags", 120.0,
        [&](Criterion& c) { antipodal_separation(c, jumps); });
  timed(9, "rotation estimate stays orthonormal across 100000 steps", 0.0,
        [&](Criterion& c) { constraint_preservation(c, jumps); });
  timed(10, "fixed config and seed reproduce traces bitwise", 0.0,
        [&](Criterion& c) { determinism(c); });
  timed(6, "jumps cut the measured cost by the hysteresis width, bias untouched",
        0.0, [&](Criterion& c) { jump_discipline(c, jumps); });

  std::sort(results.begin(), results.end(),
            [](const Criterion& a, const Criterion& b) { return a.id < b.id; });

  int failed = 0;
  for (const Criterion& c : results) {
    if (!c.pass) {
      ++failed;
    }
    std::printf("[%s] %2d %s: %s (%.2f s)\n", c.pass ? "PASS" : "FAIL", c.id,
                c.label, c.detail.c_str(), c.seconds);
    for (const std::string& line : c.lines) {
      std::printf("          %s\n", line.c_str());
    }
  }
  std::printf("\n%d of 10 criteria passed\n",
              static_cast<int>(results.size()) - failed);
  return failed;
}
