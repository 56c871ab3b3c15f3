#include <json.hpp>

#include "slamobs/experiment.hpp"

// Config and summary serialization. The config writer emits one canonical
// form: fixed key order, arrays for vectors, axis-angle rotations. The parser
// is strict about shape (unknown or missing keys are errors) so typos in
// hand-written configs fail loudly instead of silently using defaults.

namespace slamobs {

namespace {

using json = nlohmann::ordered_json;

// enum <-> string tables

const char* to_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::exp1_circle: return "exp1_circle";
    case ExperimentKind::exp2_eight: return "exp2_eight";
    case ExperimentKind::custom: return "custom";
  }
  throw std::invalid_argument("unknown experiment kind");
}

const char* to_name(ObserverChoice o) {
  switch (o) {
    case ObserverChoice::hybrid: return "hybrid";
    case ObserverChoice::smooth: return "smooth";
    case ObserverChoice::both: return "both";
  }
  throw std::invalid_argument("unknown observer choice");
}

const char* to_name(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::circle: return "circle";
    case TrajectoryKind::figure_eight: return "figure_eight";
    case TrajectoryKind::custom: return "custom";
  }
  throw std::invalid_argument("unknown trajectory kind");
}

const char* to_name(JumpPriority p) {
  return p == JumpPriority::jump_first ? "jump_first" : "flow_first";
}

const char* to_name(Integrator i) {
  return i == Integrator::euler ? "euler" : "rkmk4";
}

const char* to_name(RangeNoiseKind k) {
  return k == RangeNoiseKind::none ? "none" : "uniform";
}

const char* to_name(BearingNoiseKind k) {
  return k == BearingNoiseKind::none ? "none" : "gaussian";
}

template <class Enum>
Enum from_name(const std::string& name, std::initializer_list<Enum> values,
               const char* what) {
  for (Enum v : values) {
    if (name == to_name(v)) {
      return v;
    }
  }
  throw ParseError(std::string("unknown ") + what + ": \"" + name + "\"");
}

// shape helpers

void expect_keys(const json& j, const char* where,
                 std::initializer_list<const char*> keys) {
  if (!j.is_object()) {
    throw ParseError(std::string(where) + " must be a JSON object");
  }
  for (const char* key : keys) {
    if (!j.contains(key)) {
      throw ParseError(std::string(where) + " is missing key \"" + key + "\"");
    }
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : keys) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ParseError(std::string(where) + " has unknown key \"" + item.key() + "\"");
    }
  }
}

json vec_to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

Vec3 vec_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(std::string(where) + " must be an array of three numbers");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json rotation_to_json(double angle, const Vec3& axis) {
  json j;
  j["angle"] = angle;
  j["axis"] = vec_to_json(axis);
  return j;
}

void rotation_from_json(const json& j, const char* where, double& angle, Vec3& axis) {
  expect_keys(j, where, {"angle", "axis"});
  angle = j.at("angle").get<double>();
  axis = vec_from_json(j.at("axis"), where);
}

json landmarks_to_json(const Mat3X& eta) {
  json j = json::array();
  for (Eigen::Index i = 0; i < eta.cols(); ++i) {
    j.push_back(vec_to_json(eta.col(i)));
  }
  return j;
}

Mat3X landmarks_from_json(const json& j) {
  if (!j.is_array()) {
    throw ParseError("landmarks must be an array of positions");
  }
  Mat3X eta(3, static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < eta.cols(); ++i) {
    eta.col(i) = vec_from_json(j[static_cast<size_t>(i)], "landmark");
  }
  return eta;
}

json metrics_to_json(const ErrorMetrics& m) {
  json j;
  j["att_err_rad"] = m.attitude_error;
  j["pos_err_m"] = m.position_error;
  j["lmk_err_m"] = m.landmark_error;
  j["bias_w_err"] = m.bias_omega_error;
  j["bias_v_err"] = m.bias_v_error;
  j["lyapunov"] = m.lyapunov_value;
  j["measured_cost"] = m.measured_cost;
  return j;
}

json run_to_json(const RunResult& r) {
  json j;
  j["rows"] = r.rows.size();
  j["jump_count"] = r.jump_count;
  j["wall_ms"] = r.wall_ms;
  j["final"] = metrics_to_json(r.final_metrics);
  j["steady_state"] = metrics_to_json(r.steady_state);
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = to_name(cfg.experiment);
  j["observer"] = to_name(cfg.observer);
  j["seed"] = cfg.seed;

  json gains;
  gains["k"] = cfg.gains.k;
  gains["k_o"] = cfg.gains.k_o;
  gains["delta"] = cfg.gains.delta;
  gains["theta"] = cfg.gains.theta;
  gains["ell"] = vec_to_json(cfg.gains.ell);
  gains["q_max"] = cfg.gains.q_max;
  j["gains"] = std::move(gains);

  json noise;
  noise["range"] = to_name(cfg.noise.range_kind);
  noise["range_lo"] = cfg.noise.range_lo;
  noise["range_hi"] = cfg.noise.range_hi;
  noise["bearing"] = to_name(cfg.noise.bearing_kind);
  noise["bearing_sigma"] = cfg.noise.bearing_sigma;
  j["noise"] = std::move(noise);

  json run;
  run["dt"] = cfg.run.dt;
  run["t_end"] = cfg.run.t_end;
  run["max_jumps_per_instant"] = cfg.run.max_jumps_per_instant;
  run["priority"] = to_name(cfg.run.priority);
  run["integrator"] = to_name(cfg.run.integrator);
  j["run"] = std::move(run);

  json traj;
  traj["kind"] = to_name(cfg.trajectory.kind);
  traj["omega_body"] = vec_to_json(cfg.trajectory.omega_body);
  traj["v_body"] = vec_to_json(cfg.trajectory.v_body);
  traj["switch_period"] = cfg.trajectory.switch_period;
  traj["R0"] = rotation_to_json(cfg.trajectory.r0_angle, cfg.trajectory.r0_axis);
  traj["p0"] = vec_to_json(cfg.trajectory.p0);
  j["trajectory"] = std::move(traj);

  j["landmarks"] = landmarks_to_json(cfg.landmarks);

  json init;
  init["Rhat0"] = rotation_to_json(cfg.initial_estimate.rhat_angle,
                                   cfg.initial_estimate.rhat_axis);
  init["phat0"] = vec_to_json(cfg.initial_estimate.phat0);
  init["eta_scale"] = cfg.initial_estimate.eta_scale;
  j["initial_estimate"] = std::move(init);

  json bias;
  bias["b_omega"] = vec_to_json(cfg.bias.b_omega);
  bias["b_v"] = vec_to_json(cfg.bias.b_v);
  j["bias"] = std::move(bias);

  j["literal_jump_map"] = cfg.literal_jump_map;
  j["literal_noise"] = cfg.literal_noise;

  json sweep;
  sweep["angles_rad"] = cfg.sweep_angles;
  j["sweep"] = std::move(sweep);

  j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }

  try {
    expect_keys(j, "config",
                {"experiment", "observer", "seed", "gains", "noise", "run",
                 "trajectory", "landmarks", "initial_estimate", "bias",
                 "literal_jump_map", "literal_noise", "sweep", "output_dir"});

    ExperimentConfig cfg;
    cfg.experiment = from_name<ExperimentKind>(
        j.at("experiment").get<std::string>(),
        {ExperimentKind::exp1_circle, ExperimentKind::exp2_eight, ExperimentKind::custom},
        "experiment");
    cfg.observer = from_name<ObserverChoice>(
        j.at("observer").get<std::string>(),
        {ObserverChoice::hybrid, ObserverChoice::smooth, ObserverChoice::both},
        "observer");
    cfg.seed = j.at("seed").get<std::uint64_t>();

    const json& gains = j.at("gains");
    expect_keys(gains, "gains", {"k", "k_o", "delta", "theta", "ell", "q_max"});
    cfg.gains.k = gains.at("k").get<std::vector<double>>();
    cfg.gains.k_o = gains.at("k_o").get<double>();
    cfg.gains.delta = gains.at("delta").get<double>();
    cfg.gains.theta = gains.at("theta").get<double>();
    cfg.gains.ell = vec_from_json(gains.at("ell"), "gains.ell");
    cfg.gains.q_max = gains.at("q_max").get<int>();

    const json& noise = j.at("noise");
    expect_keys(noise, "noise", {"range", "range_lo", "range_hi", "bearing", "bearing_sigma"});
    cfg.noise.range_kind = from_name<RangeNoiseKind>(
        noise.at("range").get<std::string>(),
        {RangeNoiseKind::none, RangeNoiseKind::uniform}, "range noise");
    cfg.noise.range_lo = noise.at("range_lo").get<double>();
    cfg.noise.range_hi = noise.at("range_hi").get<double>();
    cfg.noise.bearing_kind = from_name<BearingNoiseKind>(
        noise.at("bearing").get<std::string>(),
        {BearingNoiseKind::none, BearingNoiseKind::gaussian}, "bearing noise");
    cfg.noise.bearing_sigma = noise.at("bearing_sigma").get<double>();

    const json& run = j.at("run");
    expect_keys(run, "run", {"dt", "t_end", "max_jumps_per_instant", "priority", "integrator"});
    cfg.run.dt = run.at("dt").get<double>();
    cfg.run.t_end = run.at("t_end").get<double>();
    cfg.run.max_jumps_per_instant = run.at("max_jumps_per_instant").get<int>();
    cfg.run.priority = from_name<JumpPriority>(
        run.at("priority").get<std::string>(),
        {JumpPriority::jump_first, JumpPriority::flow_first}, "priority");
    cfg.run.integrator = from_name<Integrator>(
        run.at("integrator").get<std::string>(),
        {Integrator::euler, Integrator::rkmk4}, "integrator");

    const json& traj = j.at("trajectory");
    expect_keys(traj, "trajectory",
                {"kind", "omega_body", "v_body", "switch_period", "R0", "p0"});
    cfg.trajectory.kind = from_name<TrajectoryKind>(
        traj.at("kind").get<std::string>(),
        {TrajectoryKind::circle, TrajectoryKind::figure_eight, TrajectoryKind::custom},
        "trajectory kind");
    cfg.trajectory.omega_body = vec_from_json(traj.at("omega_body"), "omega_body");
    cfg.trajectory.v_body = vec_from_json(traj.at("v_body"), "v_body");
    cfg.trajectory.switch_period = traj.at("switch_period").get<double>();
    rotation_from_json(traj.at("R0"), "trajectory.R0", cfg.trajectory.r0_angle,
                       cfg.trajectory.r0_axis);
    cfg.trajectory.p0 = vec_from_json(traj.at("p0"), "p0");

    cfg.landmarks = landmarks_from_json(j.at("landmarks"));

    const json& init = j.at("initial_estimate");
    expect_keys(init, "initial_estimate", {"Rhat0", "phat0", "eta_scale"});
    rotation_from_json(init.at("Rhat0"), "initial_estimate.Rhat0",
                       cfg.initial_estimate.rhat_angle, cfg.initial_estimate.rhat_axis);
    cfg.initial_estimate.phat0 = vec_from_json(init.at("phat0"), "phat0");
    cfg.initial_estimate.eta_scale = init.at("eta_scale").get<double>();

    const json& bias = j.at("bias");
    expect_keys(bias, "bias", {"b_omega", "b_v"});
    cfg.bias.b_omega = vec_from_json(bias.at("b_omega"), "b_omega");
    cfg.bias.b_v = vec_from_json(bias.at("b_v"), "b_v");

    cfg.literal_jump_map = j.at("literal_jump_map").get<bool>();
    cfg.literal_noise = j.at("literal_noise").get<bool>();

    const json& sweep = j.at("sweep");
    expect_keys(sweep, "sweep", {"angles_rad"});
    cfg.sweep_angles = sweep.at("angles_rad").get<std::vector<double>>();

    cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config has a malformed field: ") + e.what());
  }
}

std::string summary_to_json(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  json j;
  j["experiment"] = to_name(cfg.experiment);
  j["observer"] = to_name(cfg.observer);
  j["seed"] = cfg.seed;
  j["dt"] = cfg.run.dt;
  j["t_end"] = cfg.run.t_end;
  json observers;
  if (out.hybrid) {
    observers["hybrid"] = run_to_json(*out.hybrid);
  }
  if (out.smooth) {
    observers["smooth"] = run_to_json(*out.smooth);
  }
  j["observers"] = std::move(observers);
  return j.dump(2) + "\n";
}

}  // namespace slamobs
