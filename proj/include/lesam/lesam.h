#ifndef LESAM_LESAM_H
#define LESAM_LESAM_H

/* C interface to the sharpness-aware optimization laboratory.
 *
 * All functions returning lesam_status report failures through the return
 * code; lesam_last_error() holds a thread-local message for the most recent
 * failure on the calling thread. Strings written to char** out-parameters
 * are owned by the caller and must be released with lesam_string_free().
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lesam_status {
  LESAM_OK = 0,
  LESAM_ERR_ZERO_DIRECTION = 1,
  LESAM_ERR_DIM_MISMATCH = 2,
  LESAM_ERR_CAPABILITY_MISSING = 3,
  LESAM_ERR_NO_CONVERGENCE = 4,
  LESAM_ERR_PARSE = 5,
  LESAM_ERR_VALIDATION = 6,
  LESAM_ERR_DIVERGENCE = 7,
  LESAM_ERR_IO = 8,
  LESAM_ERR_INVALID_ARGUMENT = 9,
  LESAM_ERR_INTERNAL = 10
} lesam_status;

typedef struct lesam_config lesam_config;
typedef struct lesam_result lesam_result;
typedef struct lesam_sweep_result lesam_sweep_result;

/* --- configs ---------------------------------------------------------- */

lesam_status lesam_config_parse_file(const char* path, lesam_config** out);
lesam_status lesam_config_parse_text(const char* text, lesam_config** out);

/* Apply one key = value override and re-validate. */
lesam_status lesam_config_set(lesam_config* cfg, const char* key, const char* value);

/* Canonical text form; round-trips through lesam_config_parse_text. */
lesam_status lesam_config_serialize(const lesam_config* cfg, char** out_text);

void lesam_config_free(lesam_config* cfg);

/* --- runs -------------------------------------------------------------- */

lesam_status lesam_run(const lesam_config* cfg, lesam_result** out);

lesam_status lesam_result_summary_json(const lesam_result* res, char** out_json);

/* jsonl = 0 writes CSV, nonzero writes JSON lines. */
lesam_status lesam_result_metrics_text(const lesam_result* res, int jsonl, char** out_text);
lesam_status lesam_result_write_metrics(const lesam_result* res, const char* path, int jsonl);

void lesam_result_free(lesam_result* res);

/* --- sweeps ------------------------------------------------------------ */

lesam_status lesam_sweep(const lesam_config* cfg, lesam_sweep_result** out);
int lesam_sweep_count(const lesam_sweep_result* res);
lesam_status lesam_sweep_table(const lesam_sweep_result* res, char** out_text);
lesam_status lesam_sweep_json(const lesam_sweep_result* res, char** out_json);
void lesam_sweep_free(lesam_sweep_result* res);

/* --- curvature probes --------------------------------------------------- */

/* Train per the config (run.epochs = 0 probes the initial point), then
 * report the top-k Hessian eigenvalues / a loss-surface slice at the final
 * parameters. */
lesam_status lesam_spectrum(const lesam_config* cfg, int k, char** out_json);
lesam_status lesam_landscape(const lesam_config* cfg, int dims, int grid, double span,
                             char** out_csv);

/* Median per-epoch wall time of config a over config b, diagnostics off. */
lesam_status lesam_time_compare(const lesam_config* a, const lesam_config* b, int epochs,
                                char** out_json);

/* --- errors and memory -------------------------------------------------- */

const char* lesam_last_error(void);
const char* lesam_status_name(lesam_status s);
void lesam_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LESAM_LESAM_H */
