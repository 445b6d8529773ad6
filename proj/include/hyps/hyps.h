/* C interface to the hyps library.
 *
 * Every function returns a hyps_status.  On failure the message of the most
 * recent error on the calling thread is available from hyps_last_error().
 * Strings returned through const char** stay valid until the owning handle
 * is freed; strings returned through char** must be released with
 * hyps_string_free().
 */
#ifndef HYPS_H
#define HYPS_H

#include <stddef.h>

#if defined(HYPS_BUILDING_LIBRARY)
#define HYPS_API __attribute__((visibility("default")))
#else
#define HYPS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hyps_status {
  HYPS_OK = 0,
  HYPS_ERR_CONFIG = 1,
  HYPS_ERR_INVALID_ARGUMENT = 2,
  HYPS_ERR_IO = 3,
  HYPS_ERR_NUMERICAL = 4,   /* NonFinite, NoConvergence, UnstableStep, BoxTooSmall */
  HYPS_ERR_UNSUPPORTED = 5, /* order, dimension, rough kind, size limits */
  HYPS_ERR_RUNTIME = 6,     /* anything else */
} hyps_status;

typedef enum hyps_check_status {
  HYPS_CHECK_PASS = 0,
  HYPS_CHECK_FAIL = 1,
  HYPS_CHECK_REPORT = 2,
  HYPS_CHECK_ERROR = 3,
} hyps_check_status;

typedef struct hyps_scenario hyps_scenario;
typedef struct hyps_result hyps_result;

/* Receives one summary line per check, without a trailing newline. */
typedef void (*hyps_log_fn)(const char* line, void* user);

HYPS_API const char* hyps_version(void);
HYPS_API const char* hyps_last_error(void);
HYPS_API const char* hyps_status_name(hyps_status s);
HYPS_API void hyps_string_free(char* s);

/* Preset catalog. */
HYPS_API size_t hyps_preset_count(void);
HYPS_API const char* hyps_preset_name(size_t index);
HYPS_API const char* hyps_preset_summary(size_t index);

/* Scenario handles. */
HYPS_API hyps_status hyps_scenario_from_preset(const char* name, hyps_scenario** out);
HYPS_API hyps_status hyps_scenario_from_json(const char* text, hyps_scenario** out);
HYPS_API hyps_status hyps_scenario_from_file(const char* path, hyps_scenario** out);
HYPS_API void hyps_scenario_free(hyps_scenario* s);

HYPS_API hyps_status hyps_scenario_validate(const hyps_scenario* s);
HYPS_API hyps_status hyps_scenario_to_json(const hyps_scenario* s, char** out);
HYPS_API hyps_status hyps_scenario_name(const hyps_scenario* s, const char** out);

/* Overrides of config scalars. */
HYPS_API hyps_status hyps_scenario_set_eps_count(hyps_scenario* s, int count);
HYPS_API hyps_status hyps_scenario_set_grid_M(hyps_scenario* s, int M);
HYPS_API hyps_status hyps_scenario_set_out_dir(hyps_scenario* s, const char* dir);
HYPS_API hyps_status hyps_scenario_set_jobs(hyps_scenario* s, int jobs);
HYPS_API hyps_status hyps_scenario_set_seed(hyps_scenario* s, unsigned long long seed);

/* Runs every check.  A failing check is not an error: inspect the result. */
HYPS_API hyps_status hyps_scenario_run(const hyps_scenario* s, hyps_log_fn log, void* user,
                                       hyps_result** out);

/* Results. exit code: 0 pass, 2 check failure, 4 runtime error. */
HYPS_API int hyps_result_exit_code(const hyps_result* r);
HYPS_API size_t hyps_result_check_count(const hyps_result* r);
HYPS_API hyps_status hyps_result_check(const hyps_result* r, size_t index, const char** name,
                                       hyps_check_status* status, const char** summary,
                                       int* asserting);
HYPS_API size_t hyps_result_artifact_count(const hyps_result* r);
HYPS_API const char* hyps_result_artifact(const hyps_result* r, size_t index);
HYPS_API void hyps_result_free(hyps_result* r);

#ifdef __cplusplus
}
#endif

#endif
