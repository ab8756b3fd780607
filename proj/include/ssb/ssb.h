/*
 * C interface to the sleeping semi-bandit toolkit.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns an ssb_status; on failure ssb_last_error() describes
 * the problem (thread-local, valid until the next call on that thread).
 * Strings returned through char** are owned by the caller and released
 * with ssb_string_free.
 */
#ifndef SSB_SSB_H
#define SSB_SSB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SSB_BUILDING_LIBRARY)
#    define SSB_API __declspec(dllexport)
#  else
#    define SSB_API __declspec(dllimport)
#  endif
#else
#  define SSB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssb_status {
  SSB_OK = 0,
  SSB_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer */
  SSB_ERR_CONFIG = 2,           /* rejected configuration or precondition */
  SSB_ERR_RUNTIME = 3,          /* failure while running (bad data, broken invariant) */
  SSB_ERR_IO = 4                /* file could not be read or written */
} ssb_status;

typedef struct ssb_result ssb_result;
typedef struct ssb_trace ssb_trace;

SSB_API const char* ssb_version(void);
SSB_API const char* ssb_last_error(void);
SSB_API void ssb_string_free(char* s);

/* Experiments. spec_json is an experiment spec document (see README). */
SSB_API ssb_status ssb_run_experiment(const char* spec_json, ssb_result** out);
SSB_API void ssb_result_free(ssb_result* result);
SSB_API size_t ssb_result_checkpoint_count(const ssb_result* result);
SSB_API ssb_status ssb_result_checkpoint(const ssb_result* result, size_t index, uint64_t* round,
                                         double* mean_cum_regret, double* ci_halfwidth);
SSB_API size_t ssb_result_violations(const ssb_result* result);
/* format: "csv" or "json". CSV also writes <stem>.aggregate.csv next to path. */
SSB_API ssb_status ssb_result_export(const ssb_result* result, const char* format, const char* path);
SSB_API ssb_status ssb_result_summary_json(const ssb_result* result, char** out_json);

/* Traces. normalization: "global" or "per-link" (NULL = global). */
SSB_API ssb_status ssb_trace_ingest(const char* path, const char* normalization, ssb_trace** out);
SSB_API void ssb_trace_free(ssb_trace* trace);
SSB_API size_t ssb_trace_link_count(const ssb_trace* trace);
SSB_API size_t ssb_trace_minute_count(const ssb_trace* trace);
SSB_API size_t ssb_trace_rejected_rows(const ssb_trace* trace);
SSB_API ssb_status ssb_trace_export_json(const ssb_trace* trace, const char* path);

/* Theory reports, JSON documents. algo: "cts-g" or "cl-sg". */
SSB_API ssb_status ssb_theory_coefficient(const char* algo, char** out_json);
SSB_API ssb_status ssb_theory_lower_bound(const char* algo, uint64_t m, uint64_t horizon, int run,
                                          uint64_t runs, uint64_t seed, char** out_json);
SSB_API ssb_status ssb_theory_facts(uint64_t samples, uint64_t seed, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* SSB_SSB_H */
