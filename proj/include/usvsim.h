/* usvsim - differential-drive USV simulation, EKF localization, and
 * turning-circle analysis, exposed as a C shared-library API.
 *
 * All functions return a usv_status (0 on success). On failure,
 * usv_last_error() describes what went wrong for the calling thread.
 * Strings returned through char** out-parameters are heap-allocated and
 * must be released with usv_string_free().
 */
#ifndef USVSIM_H
#define USVSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum usv_status {
  USV_OK = 0,
  USV_ERR_INTERNAL = 1,
  USV_ERR_VALIDATION = 2, /* bad config, bad arguments, malformed input */
  USV_ERR_PROTOCOL = 3,   /* trial or calibration could not complete */
  USV_ERR_IO = 4          /* file could not be read or written */
} usv_status;

/* Opaque resolved configuration (vessel, environment, sensors, EKF, trial). */
typedef struct usv_config usv_config;

const char* usv_last_error(void);
void usv_string_free(char* s);

usv_config* usv_config_default(void);
/* NULL on failure (see usv_last_error). */
usv_config* usv_config_load(const char* path);
/* Merge a JSON fragment over the current values, e.g. flag overrides. */
usv_status usv_config_override(usv_config* cfg, const char* json_fragment);
usv_status usv_config_set_side(usv_config* cfg, const char* side);
/* Serialized resolved config. */
usv_status usv_config_to_json(const usv_config* cfg, char** json_out);
void usv_config_free(usv_config* cfg);

/* Approach-speed calibration: throttle whose steady speed is 90% of the
 * steady speed at 85% throttle. */
usv_status usv_calibrate(const usv_config* cfg, double* throttle_out,
                         double* approach_speed_out);

/* Runs one turning-circle trial and writes into out_dir:
 *   trial.jsonl, metrics.csv, compliance.txt, resolved_config.json,
 *   trajectory.svg, heading.svg, speed.svg.
 * Outputs are byte-deterministic for a given (config, seed). On
 * USV_ERR_PROTOCOL the partial log is still written. */
usv_status usv_run_trial(const usv_config* cfg, uint64_t seed,
                         const char* out_dir);

/* Replays the sensor stream of an existing log through the EKF and writes
 * the log with estimate fields filled. Refuses logs without sensor data. */
usv_status usv_ekf_replay(const usv_config* cfg, const char* log_in,
                          const char* log_out, int* applied_out,
                          int* dropped_stale_out);

/* Turning-circle metrics + IMO compliance for a logged trial.
 * source: "truth" or "estimate". The result is a JSON object with keys
 * "metrics", "compliance", "table" and "compliance_text". */
usv_status usv_metrics_json(const char* log_path, const char* source,
                            double vessel_length, char** json_out);

/* IMO turning-ability check alone: limits are 4.5L (advance) and 5L
 * (tactical diameter), strict inequality. */
usv_status usv_check_imo(double advance_m, double tactical_diameter_m,
                         double vessel_length_m, int* advance_pass_out,
                         int* td_pass_out, double* advance_limit_out,
                         double* td_limit_out);

/* Campaign report over several trial logs; writes CSV to out_csv_path
 * (pass NULL to skip) and returns the human-readable table. */
usv_status usv_report(const char* const* log_paths, int count,
                      const char* source, const char* out_csv_path,
                      char** table_out);

/* Converts an external CSV track (iso_time,lat,lon,heading_deg_compass
 * [,speed_mps]) into a trial log. Datum and heading convention must be
 * declared explicitly ("WGS84", "compass-deg"). */
usv_status usv_ingest_external(const char* csv_path, double origin_lat,
                               double origin_lon, double origin_alt,
                               const char* datum, const char* heading_convention,
                               long execute_index, const char* out_log_path);

#ifdef __cplusplus
}
#endif

#endif /* USVSIM_H */
