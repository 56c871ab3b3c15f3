#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slamobs/slamobs.h"

// Command line front end. Everything numerical happens behind the C API; this
// file only parses flags, shuttles strings and maps statuses to exit codes.

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

int exit_code_for(slamobs_status st) {
  switch (st) {
    case SLAMOBS_OK:
      return kExitOk;
    case SLAMOBS_ERR_NUMERICAL:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

int fail(slamobs_status st) {
  std::cerr << "error: " << slamobs_last_error() << "\n";
  return exit_code_for(st);
}

struct ConfigHandle {
  slamobs_config* ptr = nullptr;
  ~ConfigHandle() { slamobs_config_destroy(ptr); }
};

// Flags shared by `run` and `sweep`.
struct CommonFlags {
  std::string config_path;
  int experiment = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> duration;
  std::string out_dir;
  std::string noise;  // "on"/"off", empty = leave the config alone
  bool literal_jump_map = false;
  bool literal_noise = false;
  std::string observer;
};

void add_common_flags(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config_path, "JSON config file to start from")
      ->check(CLI::ExistingFile);
  cmd.add_option("--experiment", flags.experiment,
                 "built-in scenario when no --config is given")
      ->check(CLI::Range(1, 2));
  cmd.add_option("--seed", flags.seed, "master RNG seed");
  cmd.add_option("--dt", flags.dt, "integration step, seconds");
  cmd.add_option("--duration", flags.duration, "run length, seconds");
  cmd.add_option("--out", flags.out_dir, "output directory");
  cmd.add_option("--noise", flags.noise, "measurement noise on|off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd.add_flag("--literal-jump-map", flags.literal_jump_map,
               "use the unmodified published reset map");
  cmd.add_flag("--literal-noise", flags.literal_noise,
               "bearing noise at unit variance");
}

int build_config(const CommonFlags& flags, ConfigHandle& handle) {
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << flags.config_path << "\n";
      return kExitUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (const slamobs_status st = slamobs_config_from_json(text.c_str(), &handle.ptr);
        st != SLAMOBS_OK) {
      return fail(st);
    }
  } else {
    handle.ptr = slamobs_config_preset(flags.experiment);
    if (handle.ptr == nullptr) {
      return fail(SLAMOBS_ERR_INVALID_ARGUMENT);
    }
  }

  slamobs_status st = SLAMOBS_OK;
  if (st == SLAMOBS_OK && flags.seed) {
    st = slamobs_config_set_seed(handle.ptr, *flags.seed);
  }
  if (st == SLAMOBS_OK && flags.dt) {
    st = slamobs_config_set_dt(handle.ptr, *flags.dt);
  }
  if (st == SLAMOBS_OK && flags.duration) {
    st = slamobs_config_set_duration(handle.ptr, *flags.duration);
  }
  if (st == SLAMOBS_OK && !flags.out_dir.empty()) {
    st = slamobs_config_set_output_dir(handle.ptr, flags.out_dir.c_str());
  }
  if (st == SLAMOBS_OK && !flags.noise.empty()) {
    st = slamobs_config_set_noise_enabled(handle.ptr, flags.noise == "on" ? 1 : 0);
  }
  if (st == SLAMOBS_OK && flags.literal_jump_map) {
    st = slamobs_config_set_literal_jump_map(handle.ptr, 1);
  }
  if (st == SLAMOBS_OK && flags.literal_noise) {
    st = slamobs_config_set_literal_noise(handle.ptr, 1);
  }
  if (st == SLAMOBS_OK && !flags.observer.empty()) {
    st = slamobs_config_set_observer(handle.ptr, flags.observer.c_str());
  }
  return st == SLAMOBS_OK ? kExitOk : fail(st);
}

void print_summary(const char* name, const slamobs_run_summary& s) {
  std::printf("%s: rows=%lld jumps=%lld wall=%.1f ms\n", name,
              static_cast<long long>(s.rows), static_cast<long long>(s.jump_count),
              s.wall_ms);
  std::printf("  final   att=%.6g rad  pos=%.6g m  lmk=%.6g m  bw=%.6g  bv=%.6g  V=%.6g\n",
              s.final_att_err_rad, s.final_pos_err_m, s.final_lmk_err_m,
              s.final_bias_w_err, s.final_bias_v_err, s.final_lyapunov);
  std::printf("  steady  att=%.6g rad  pos=%.6g m  lmk=%.6g m  bw=%.6g  bv=%.6g  V=%.6g\n",
              s.steady_att_err_rad, s.steady_pos_err_m, s.steady_lmk_err_m,
              s.steady_bias_w_err, s.steady_bias_v_err, s.steady_lyapunov);
}

int run_command(const CommonFlags& flags) {
  ConfigHandle cfg;
  if (const int code = build_config(flags, cfg); code != kExitOk) {
    return code;
  }
  slamobs_run_summary hybrid{};
  slamobs_run_summary smooth{};
  hybrid.rows = 0;
  smooth.rows = 0;
  if (const slamobs_status st = slamobs_run(cfg.ptr, 1, &hybrid, &smooth);
      st != SLAMOBS_OK) {
    return fail(st);
  }
  if (hybrid.rows > 0) {
    print_summary("hybrid", hybrid);
  }
  if (smooth.rows > 0) {
    print_summary("smooth", smooth);
  }
  return kExitOk;
}

std::string resolve_sweep_dir(const std::string& out_flag) {
  if (!out_flag.empty()) {
    return out_flag;
  }
  if (const char* env = std::getenv("SLAMOBS_OUT"); env != nullptr && env[0] != '\0') {
    return env;
  }
  return "out";
}

int sweep_command(const CommonFlags& flags, const std::vector<double>& angles) {
  ConfigHandle cfg;
  if (const int code = build_config(flags, cfg); code != kExitOk) {
    return code;
  }
  const std::filesystem::path dir = resolve_sweep_dir(flags.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << dir.string() << ": " << ec.message() << "\n";
    return kExitUsage;
  }
  const std::filesystem::path csv = dir / "sweep_antipodal.csv";
  if (const slamobs_status st = slamobs_sweep(cfg.ptr, csv.string().c_str(),
                                              angles.empty() ? nullptr : angles.data(),
                                              angles.size());
      st != SLAMOBS_OK) {
    return fail(st);
  }
  std::printf("wrote %s\n", csv.string().c_str());
  return kExitOk;
}

int check_command() {
  std::string report(8192, '\0');
  const int failures = slamobs_self_check(report.data(), report.size());
  if (failures < 0) {
    std::cerr << "error: " << slamobs_last_error() << "\n";
    return kExitUsage;
  }
  std::fputs(report.c_str(), stdout);
  if (failures > 0) {
    std::printf("%d suite(s) failed\n", failures);
    return kExitUsage;
  }
  std::printf("all suites passed\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid SLAM observer simulator"};
  app.set_version_flag("--version", slamobs_version());
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "simulate one configuration");
  add_common_flags(*run, run_flags);
  run->add_option("--observer", run_flags.observer, "hybrid, smooth or both")
      ->check(CLI::IsMember({"hybrid", "smooth", "both"}));

  CLI::App* check = app.add_subcommand("check", "run the built-in diagnostic suites");

  CommonFlags sweep_flags;
  sweep_flags.experiment = 3;  // the antipodal study preset
  std::vector<double> sweep_angles;
  CLI::App* sweep =
      app.add_subcommand("sweep", "grid over initial attitude errors");
  sweep->add_option("--config", sweep_flags.config_path, "JSON config file to start from")
      ->check(CLI::ExistingFile);
  sweep->add_option("--seed", sweep_flags.seed, "master RNG seed");
  sweep->add_option("--out", sweep_flags.out_dir, "output directory");
  sweep->add_option("--angles", sweep_angles,
                    "initial attitude errors in radians (default: config values)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    std::cerr << app.help() << "\n";
    return kExitUsage;
  }

  if (run->parsed()) {
    return run_command(run_flags);
  }
  if (check->parsed()) {
    return check_command();
  }
  if (sweep->parsed()) {
    return sweep_command(sweep_flags, sweep_angles);
  }
  return kExitUsage;
}
