#include "slamobs/slamobs.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "slamobs/experiment.hpp"
#include "slamobs/hybrid.hpp"

// Thin C shell over the C++ library: owns the exception-to-status mapping and
// nothing else. All numerics live behind run_experiment and friends.

struct slamobs_config {
  slamobs::ExperimentConfig cpp;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
slamobs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SLAMOBS_OK;
  } catch (const slamobs::ParseError& e) {
    g_last_error = e.what();
    return SLAMOBS_ERR_PARSE;
  } catch (const slamobs::IoError& e) {
    g_last_error = e.what();
    return SLAMOBS_ERR_IO;
  } catch (const slamobs::NumericalError& e) {
    g_last_error = e.what();
    return SLAMOBS_ERR_NUMERICAL;
  } catch (const slamobs::ZenoError& e) {
    g_last_error = e.what();
    return SLAMOBS_ERR_NUMERICAL;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return SLAMOBS_ERR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return SLAMOBS_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SLAMOBS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SLAMOBS_ERR_INTERNAL;
  }
}

slamobs_status require(bool ok, const char* message) {
  if (ok) {
    return SLAMOBS_OK;
  }
  g_last_error = message;
  return SLAMOBS_ERR_INVALID_ARGUMENT;
}

void fill_summary(const slamobs::RunResult& run, slamobs_run_summary* out) {
  if (out == nullptr) {
    return;
  }
  const slamobs::ErrorMetrics& f = run.final_metrics;
  const slamobs::ErrorMetrics& s = run.steady_state;
  out->final_att_err_rad = f.attitude_error;
  out->final_pos_err_m = f.position_error;
  out->final_lmk_err_m = f.landmark_error;
  out->final_bias_w_err = f.bias_omega_error;
  out->final_bias_v_err = f.bias_v_error;
  out->final_lyapunov = f.lyapunov_value;
  out->final_measured_cost = f.measured_cost;
  out->steady_att_err_rad = s.attitude_error;
  out->steady_pos_err_m = s.position_error;
  out->steady_lmk_err_m = s.landmark_error;
  out->steady_bias_w_err = s.bias_omega_error;
  out->steady_bias_v_err = s.bias_v_error;
  out->steady_lyapunov = s.lyapunov_value;
  out->steady_measured_cost = s.measured_cost;
  out->jump_count = run.jump_count;
  out->rows = static_cast<int64_t>(run.rows.size());
  out->wall_ms = run.wall_ms;
}

}  // namespace

extern "C" {

const char* slamobs_version(void) { return "1.0.0"; }

const char* slamobs_last_error(void) { return g_last_error.c_str(); }

slamobs_config* slamobs_config_preset(int which) {
  slamobs_config* out = nullptr;
  const slamobs_status st = guarded([&] {
    switch (which) {
      case 1:
        out = new slamobs_config{slamobs::preset_experiment1()};
        break;
      case 2:
        out = new slamobs_config{slamobs::preset_experiment2()};
        break;
      case 3:
        out = new slamobs_config{slamobs::preset_sweep()};
        break;
      default:
        throw std::invalid_argument("unknown preset id " + std::to_string(which) +
                                    ", expected 1, 2 or 3");
    }
  });
  return st == SLAMOBS_OK ? out : nullptr;
}

slamobs_status slamobs_config_from_json(const char* text, slamobs_config** out) {
  if (const slamobs_status st = require(text != nullptr && out != nullptr,
                                        "text and out must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  return guarded([&] { *out = new slamobs_config{slamobs::config_from_json(text)}; });
}

slamobs_status slamobs_config_to_json(const slamobs_config* cfg, char** out) {
  if (const slamobs_status st =
          require(cfg != nullptr && out != nullptr, "cfg and out must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  return guarded([&] {
    const std::string text = slamobs::config_to_json(cfg->cpp);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) {
      throw std::runtime_error("out of memory");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void slamobs_string_free(char* text) { std::free(text); }

void slamobs_config_destroy(slamobs_config* cfg) { delete cfg; }

slamobs_status slamobs_config_set_seed(slamobs_config* cfg, uint64_t seed) {
  if (const slamobs_status st = require(cfg != nullptr, "cfg must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  cfg->cpp.seed = seed;
  return SLAMOBS_OK;
}

slamobs_status slamobs_config_set_dt(slamobs_config* cfg, double dt) {
  if (const slamobs_status st = require(cfg != nullptr, "cfg must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  return guarded([&] {
    if (!(dt > 0.0)) {
      throw std::invalid_argument("dt must be positive");
    }
    cfg->cpp.run.dt = dt;
  });
}

slamobs_status slamobs_config_set_duration(slamobs_config* cfg, double t_end) {
  if (const slamobs_status st = require(cfg != nullptr, "cfg must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  return guarded([&] {
    if (!(t_end >= 0.0)) {
      throw std::invalid_argument("duration must be nonnegative");
    }
    cfg->cpp.run.t_end = t_end;
  });
}

slamobs_status slamobs_config_set_observer(slamobs_config* cfg, const char* name) {
  if (const slamobs_status st = require(cfg != nullptr && name != nullptr,
                                        "cfg and name must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  return guarded([&] {
    const std::string s = name;
    if (s == "hybrid") {
      cfg->cpp.observer = slamobs::ObserverChoice::hybrid;
    } else if (s == "smooth") {
      cfg->cpp.observer = slamobs::ObserverChoice::smooth;
    } else if (s == "both") {
      cfg->cpp.observer = slamobs::ObserverChoice::both;
    } else {
      throw std::invalid_argument("unknown observer \"" + s +
                                  "\", expected hybrid, smooth or both");
    }
  });
}

slamobs_status slamobs_config_set_noise_enabled(slamobs_config* cfg, int enabled) {
  if (const slamobs_status st = require(cfg != nullptr, "cfg must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  if (enabled != 0) {
    cfg->cpp.noise.range_kind = slamobs::RangeNoiseKind::uniform;
    cfg->cpp.noise.bearing_kind = slamobs::BearingNoiseKind::gaussian;
  } else {
    cfg->cpp.noise.range_kind = slamobs::RangeNoiseKind::none;
    cfg->cpp.noise.bearing_kind = slamobs::BearingNoiseKind::none;
  }
  return SLAMOBS_OK;
}

slamobs_status slamobs_config_set_literal_jump_map(slamobs_config* cfg, int enabled) {
  if (const slamobs_status st = require(cfg != nullptr, "cfg must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  cfg->cpp.literal_jump_map = enabled != 0;
  return SLAMOBS_OK;
}

slamobs_status slamobs_config_set_literal_noise(slamobs_config* cfg, int enabled) {
  if (const slamobs_status st = require(cfg != nullptr, "cfg must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  cfg->cpp.literal_noise = enabled != 0;
  return SLAMOBS_OK;
}

slamobs_status slamobs_config_set_output_dir(slamobs_config* cfg, const char* dir) {
  if (const slamobs_status st = require(cfg != nullptr && dir != nullptr,
                                        "cfg and dir must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  cfg->cpp.output_dir = dir;
  return SLAMOBS_OK;
}

slamobs_status slamobs_run(const slamobs_config* cfg, int write_files,
                           slamobs_run_summary* hybrid_out,
                           slamobs_run_summary* smooth_out) {
  if (const slamobs_status st = require(cfg != nullptr, "cfg must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  return guarded([&] {
    const slamobs::ExperimentOutput out =
        slamobs::run_experiment(cfg->cpp, write_files != 0);
    if (out.hybrid) {
      fill_summary(*out.hybrid, hybrid_out);
    }
    if (out.smooth) {
      fill_summary(*out.smooth, smooth_out);
    }
  });
}

slamobs_status slamobs_sweep(const slamobs_config* cfg, const char* csv_path,
                             const double* angles, size_t n_angles) {
  if (const slamobs_status st = require(cfg != nullptr && csv_path != nullptr,
                                        "cfg and csv_path must be non-NULL");
      st != SLAMOBS_OK) {
    return st;
  }
  if (const slamobs_status st = require(angles != nullptr || n_angles == 0,
                                        "angles must be non-NULL when n_angles > 0");
      st != SLAMOBS_OK) {
    return st;
  }
  return guarded([&] {
    std::vector<double> list;
    if (n_angles > 0) {
      list.assign(angles, angles + n_angles);
    } else {
      list = cfg->cpp.sweep_angles;
    }
    if (list.empty()) {
      throw std::invalid_argument("no sweep angles given");
    }
    const std::string csv = slamobs::sweep_to_csv(slamobs::run_sweep(cfg->cpp, list));
    FILE* f = std::fopen(csv_path, "wb");
    if (f == nullptr) {
      throw slamobs::IoError(std::string("cannot open ") + csv_path + " for writing");
    }
    const size_t written = std::fwrite(csv.data(), 1, csv.size(), f);
    const int closed = std::fclose(f);
    if (written != csv.size() || closed != 0) {
      throw slamobs::IoError(std::string("short write to ") + csv_path);
    }
  });
}

int slamobs_self_check(char* report, size_t cap) {
  try {
    std::string text;
    const int failures = slamobs::self_check(text);
    if (report != nullptr && cap > 0) {
      const size_t n = std::min(cap - 1, text.size());
      std::memcpy(report, text.data(), n);
      report[n] = '\0';
    }
    return failures;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return -1;
  } catch (...) {
    g_last_error = "unknown failure";
    return -1;
  }
}

}  // extern "C"
