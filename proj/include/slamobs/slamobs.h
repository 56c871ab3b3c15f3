#ifndef SLAMOBS_H
#define SLAMOBS_H

/* C interface to the observer simulator. Configurations are opaque handles;
 * every fallible call returns a status code and leaves a human-readable
 * message in slamobs_last_error() on failure. The library never prints. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct slamobs_config slamobs_config;

typedef enum slamobs_status {
  SLAMOBS_OK = 0,
  SLAMOBS_ERR_INVALID_ARGUMENT = 1, /* bad values in a config or argument */
  SLAMOBS_ERR_PARSE = 2,            /* JSON text does not describe a config */
  SLAMOBS_ERR_IO = 3,               /* filesystem failure */
  SLAMOBS_ERR_NUMERICAL = 4,        /* non-finite metrics or jump runaway */
  SLAMOBS_ERR_INTERNAL = 5          /* anything unexpected */
} slamobs_status;

/* Library version as "major.minor.patch". Storage is static. */
const char* slamobs_version(void);

/* Message from the most recent failing call on this thread, empty if none. */
const char* slamobs_last_error(void);

/* Built-in configurations: 1 and 2 are the two published scenarios, 3 is the
 * antipodal sweep study. Returns NULL on unknown ids. */
slamobs_config* slamobs_config_preset(int which);

/* Parses a configuration from JSON text. On success stores a new handle in
 * *out. */
slamobs_status slamobs_config_from_json(const char* text, slamobs_config** out);

/* Serializes a configuration to canonical JSON. The string is malloc'd;
 * release it with slamobs_string_free. */
slamobs_status slamobs_config_to_json(const slamobs_config* cfg, char** out);

void slamobs_string_free(char* text);
void slamobs_config_destroy(slamobs_config* cfg);

/* Field setters used by the command line. Strings are copied. */
slamobs_status slamobs_config_set_seed(slamobs_config* cfg, uint64_t seed);
slamobs_status slamobs_config_set_dt(slamobs_config* cfg, double dt);
slamobs_status slamobs_config_set_duration(slamobs_config* cfg, double t_end);
/* "hybrid", "smooth" or "both". */
slamobs_status slamobs_config_set_observer(slamobs_config* cfg, const char* name);
/* Zero disables all measurement noise; nonzero restores the configured
 * range/bearing corruption kinds. */
slamobs_status slamobs_config_set_noise_enabled(slamobs_config* cfg, int enabled);
slamobs_status slamobs_config_set_literal_jump_map(slamobs_config* cfg, int enabled);
slamobs_status slamobs_config_set_literal_noise(slamobs_config* cfg, int enabled);
slamobs_status slamobs_config_set_output_dir(slamobs_config* cfg, const char* dir);

/* Scalar digest of one observer's run. */
typedef struct slamobs_run_summary {
  double final_att_err_rad;
  double final_pos_err_m;
  double final_lmk_err_m;
  double final_bias_w_err;
  double final_bias_v_err;
  double final_lyapunov;
  double final_measured_cost;
  double steady_att_err_rad;
  double steady_pos_err_m;
  double steady_lmk_err_m;
  double steady_bias_w_err;
  double steady_bias_v_err;
  double steady_lyapunov;
  double steady_measured_cost;
  int64_t jump_count;
  int64_t rows;
  double wall_ms;
} slamobs_run_summary;

/* Runs the configured observers. With write_files nonzero, traces, a summary
 * and plots land in the resolved output directory. hybrid_out/smooth_out may
 * be NULL; they are filled only when the matching observer ran. */
slamobs_status slamobs_run(const slamobs_config* cfg, int write_files,
                           slamobs_run_summary* hybrid_out,
                           slamobs_run_summary* smooth_out);

/* Sweeps the initial attitude error over `angles` (radians, both observers
 * per angle) and writes the basin CSV to csv_path. Uses the config's own
 * sweep angles when angles is NULL or n_angles is 0. */
slamobs_status slamobs_sweep(const slamobs_config* cfg, const char* csv_path,
                             const double* angles, size_t n_angles);

/* Runs the built-in diagnostic suites. The report (one line per suite) is
 * copied into `report`, truncated to cap-1 bytes, always NUL-terminated when
 * cap > 0. Returns the number of failed suites, or -1 on internal failure. */
int slamobs_self_check(char* report, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* SLAMOBS_H */
