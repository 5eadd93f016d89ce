#ifndef TATREC_H
#define TATREC_H

/* C interface to the thermoacoustic reconstruction core. All functions are
 * thread-compatible; error details for the calling thread are retrievable
 * with tat_last_error(). Strings returned through out-parameters are owned
 * by the caller and must be released with tat_string_free(). */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    TAT_OK = 0,
    TAT_ERR_ARG = 1,      /* bad argument / null pointer */
    TAT_ERR_PARSE = 2,    /* configuration could not be parsed */
    TAT_ERR_VALIDATE = 3, /* configuration failed validation */
    TAT_ERR_RUNTIME = 4,  /* a pipeline stage failed */
    TAT_ERR_IO = 5        /* missing or unreadable artifacts */
} tat_status;

typedef struct tat_scenario tat_scenario; /* opaque */

const char* tat_version(void);

/* Message describing the most recent failure on this thread ("" if none). */
const char* tat_last_error(void);

void tat_string_free(char* s);

/* --- scenario lifecycle ------------------------------------------------ */

tat_status tat_scenario_load(const char* config_path, tat_scenario** out);
tat_status tat_scenario_load_text(const char* config_json, tat_scenario** out);
void tat_scenario_free(tat_scenario* s);

/* Structural + resolution checks (CFL bound and friends); no compute. */
tat_status tat_scenario_validate(tat_scenario* s);

/* Overrides applied before a run; pass seed=0 / n_threads=0 to keep the
 * configured values. */
tat_status tat_scenario_set_seed(tat_scenario* s, unsigned long long seed);
tat_status tat_scenario_set_threads(tat_scenario* s, int n_threads);

/* Full pipeline into out_dir; artifacts and summary.json are written there.
 * On failure partial artifacts and run.log are retained. */
tat_status tat_scenario_run(tat_scenario* s, const char* out_dir);

/* --- artifacts ---------------------------------------------------------- */

/* Reads summary.json from a finished run; *out_json is malloc'd. */
tat_status tat_metrics_summary(const char* artifact_dir, char** out_json);

/* Renders the plot set (grayscale maps, fan + decay diagrams). n_written
 * and the warning list report what was skipped. */
tat_status tat_export_plots(const char* artifact_dir, int* n_written, char** out_warnings);

#ifdef __cplusplus
}
#endif

#endif /* TATREC_H */
