/* specdrive C API: opaque handles over the verification core.
 *
 * Functions returning a pointer yield NULL on failure; functions returning
 * int yield a sd_status code. sd_last_error() describes the most recent
 * failure on the calling thread. Strings returned by sd_*_render and
 * sd_export_smv are heap-allocated; release them with sd_string_free.
 */
#ifndef SPECDRIVE_H
#define SPECDRIVE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sd_model sd_model;
typedef struct sd_controller sd_controller;
typedef struct sd_specset sd_specset;
typedef struct sd_report sd_report;
typedef struct sd_stats sd_stats;

typedef enum sd_status {
  SD_OK = 0,
  SD_ERR_IO = 1,
  SD_ERR_PARSE = 2,
  SD_ERR_INVALID = 3,
  SD_ERR_BACKEND = 4,
  SD_ERR_INTERNAL = 5
} sd_status;

const char* sd_version(void);
const char* sd_last_error(void);
void sd_string_free(char* s);

/* models */
sd_model* sd_model_load(const char* path);
sd_model* sd_model_build(const char* predicate_path, int prune);
int sd_model_save(const sd_model* model, const char* path);
int sd_model_state_count(const sd_model* model);
void sd_model_free(sd_model* model);

/* controllers; loading from a step file parses the bracketed DSL against the
 * driving vocabulary */
sd_controller* sd_controller_load(const char* path);
sd_controller* sd_controller_from_steps(const char* path);
int sd_controller_state_count(const sd_controller* controller);
void sd_controller_free(sd_controller* controller);

/* specification sets */
sd_specset* sd_specs_load(const char* path);
int sd_specs_count(const sd_specset* specs);
void sd_specs_free(sd_specset* specs);

/* formal verification; the controller is completed internally */
sd_report* sd_verify(const sd_model* model, const sd_controller* controller, const sd_specset* specs);
int sd_report_total(const sd_report* report);
int sd_report_satisfied(const sd_report* report);
/* 1 when the named spec holds; 0 when it fails; -1 when absent */
int sd_report_spec_holds(const sd_report* report, const char* spec_name);
/* format: 0 = human-readable text, 1 = line-delimited records */
char* sd_report_render(const sd_report* report, int format);
void sd_report_free(sd_report* report);

/* empirical evaluation in a world walked over the scenario model */
sd_stats* sd_simulate(const sd_model* scenario_model, const sd_controller* controller,
                      const sd_specset* specs, int num_runs, int max_steps, uint64_t seed);
char* sd_stats_render(const sd_stats* stats, int format);
/* p in [0,1] for the named spec; negative when absent */
double sd_stats_p(const sd_stats* stats, const char* spec_name);
void sd_stats_free(sd_stats* stats);
/* re-runs the same seeded episodes, appending one trace log per run */
int sd_write_trace_logs(const sd_model* scenario_model, const sd_controller* controller, int num_runs,
                        int max_steps, uint64_t seed, const char* path);

/* preference-pair pipeline: sample -> align -> score -> pair -> emit.
 * backend is "mock" or "http"; fixture_dir feeds the mock backend; mode is
 * "formal" or "empirical". Returns a summary rendered as line-delimited
 * records via *summary_out (caller frees). */
int sd_rank(const char* prompts_path, const char* backend, const char* fixture_dir,
            const char* model_path, const char* specs_path, const char* out_path, int samples,
            const char* mode, uint64_t seed, int jobs, char** summary_out);

/* NuSMV module mirroring the product's labeled trajectories */
char* sd_export_smv(const sd_model* model, const sd_controller* controller, const sd_specset* specs);

#ifdef __cplusplus
}
#endif

#endif /* SPECDRIVE_H */
