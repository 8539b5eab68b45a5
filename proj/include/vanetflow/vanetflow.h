/* vanetflow: coupled traffic / vehicular ad-hoc network simulator.
 *
 * Every function returns a vf_status. On failure the message is available
 * from vf_last_error() on the calling thread until the next failing call.
 * Handles are opaque; free them with the matching *_free function.
 * Strings returned through char** must be released with vf_string_free. */
#ifndef VANETFLOW_H
#define VANETFLOW_H

#include <stddef.h>
#include <stdint.h>

#if defined(VANETFLOW_BUILDING_LIBRARY)
#define VF_API __attribute__((visibility("default")))
#else
#define VF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vf_status {
  VF_OK = 0,
  VF_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer */
  VF_ERR_CONFIG = 2,           /* unknown key, bad value, failed constraint */
  VF_ERR_NOT_FOUND = 3,        /* unknown preset, index out of range */
  VF_ERR_IO = 4,
  VF_ERR_SIMULATION = 5, /* invariant violation inside a run */
  VF_ERR_INTERNAL = 6
} vf_status;

typedef struct vf_config vf_config;
typedef struct vf_result vf_result;
typedef struct vf_sweep vf_sweep;

VF_API const char* vf_last_error(void);
VF_API const char* vf_status_name(vf_status status);
VF_API const char* vf_version(void);
VF_API void vf_string_free(char* s);

/* Configuration. */
VF_API vf_status vf_config_new(vf_config** out);
VF_API vf_status vf_config_parse(const char* text, vf_config** out);
VF_API vf_status vf_config_load(const char* path, vf_config** out);
VF_API vf_status vf_config_from_preset(const char* name, vf_config** out);
VF_API vf_status vf_config_clone(const vf_config* cfg, vf_config** out);
/* Applies a `key = value` document on top of cfg. cfg is unchanged on error. */
VF_API vf_status vf_config_apply(vf_config* cfg, const char* text);
VF_API vf_status vf_config_apply_file(vf_config* cfg, const char* path);
/* Sets one key; the value may carry a unit suffix ("120 km/h"). Constraints
 * are checked by vf_config_validate and vf_run, not here. */
VF_API vf_status vf_config_set(vf_config* cfg, const char* key, const char* value);
VF_API vf_status vf_config_validate(const vf_config* cfg);
/* Canonical `key = value` lines, SI units. */
VF_API vf_status vf_config_echo(const vf_config* cfg, char** out);
VF_API void vf_config_free(vf_config* cfg);

/* Presets. Names and descriptions are static strings. */
VF_API size_t vf_preset_count(void);
VF_API vf_status vf_preset_info(size_t index, const char** name, const char** description);

/* Single run. */
typedef struct vf_summary {
  uint64_t arrivals;
  uint64_t exits;
  uint64_t infected;
  uint64_t lane_changes;
  uint64_t transmissions;
  double end_time;
  int gridlocked;
  double gridlock_time;
  int origin_congested;
  double origin_congestion_time;
} vf_summary;

VF_API vf_status vf_run(const vf_config* cfg, vf_result** out);
VF_API vf_status vf_result_summary(const vf_result* result, vf_summary* out);
/* events.csv, exits.csv, lane_changes.csv, velocity_grid.csv */
VF_API vf_status vf_result_write(const vf_result* result, const char* out_dir);
VF_API void vf_result_free(vf_result* result);

/* Paired sweep: every seed in [first_seed, last_seed] with communication on
 * and off, on up to `jobs` threads. A failing run is reported in its row. */
typedef struct vf_sweep_row {
  uint64_t seed;
  int communication;
  int ok;
  const char* error; /* empty when ok; owned by the sweep */
  vf_summary summary;
} vf_sweep_row;

VF_API vf_status vf_sweep_run(const vf_config* cfg, uint64_t first_seed,
                              uint64_t last_seed, unsigned jobs, vf_sweep** out);
VF_API size_t vf_sweep_size(const vf_sweep* sweep);
VF_API vf_status vf_sweep_row_at(const vf_sweep* sweep, size_t index, vf_sweep_row* out);
VF_API vf_status vf_sweep_median_exits(const vf_sweep* sweep, int communication,
                                       double* out);
/* sweep_summary.csv */
VF_API vf_status vf_sweep_write(const vf_sweep* sweep, const char* out_dir);
VF_API void vf_sweep_free(vf_sweep* sweep);

#ifdef __cplusplus
}
#endif

#endif /* VANETFLOW_H */
