/* Copyright 2026 the chatweave authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the chatweave pipeline. All objects are opaque handles,
 * all functions return a cw_status (CW_OK on success), and every string the
 * library hands out is owned by the caller and released with cw_string_free.
 * Error details for the current thread come from cw_last_error.
 */
#ifndef CHATWEAVE_H
#define CHATWEAVE_H

#include <stdint.h>

#if defined(_WIN32)
#if defined(CW_BUILDING_LIBRARY)
#define CW_API __declspec(dllexport)
#else
#define CW_API __declspec(dllimport)
#endif
#else
#define CW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cw_status {
    CW_OK = 0,
    CW_ERR_CONFIG = 1,            /* bad configuration value or document */
    CW_ERR_PARSE = 2,             /* malformed input record */
    CW_ERR_TRANSPORT = 3,         /* remote service unreachable or non-200 */
    CW_ERR_SIZE_LIMIT = 4,        /* input exceeds a documented bound */
    CW_ERR_INVALID_ARGUMENT = 5,  /* precondition violation, incl. null handles */
    CW_ERR_INSUFFICIENT_DATA = 6, /* not enough data to honor the request */
    CW_ERR_RUNTIME = 7,           /* any other pipeline failure */
    CW_ERR_UNKNOWN = 8            /* non-pipeline exception escaped */
} cw_status;

/* Message for the most recent failure on this thread. Never NULL; empty
 * before the first failure. The pointer stays valid until the next chatweave
 * call on the same thread. */
CW_API const char* cw_last_error(void);

CW_API const char* cw_version(void);

/* Releases a string any cw_* function returned through an out parameter. */
CW_API void cw_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

typedef struct cw_config cw_config;

/* Built-in defaults. Returns NULL only on allocation failure. */
CW_API cw_config* cw_config_default(void);

/* Parses a JSON config document from disk or memory. */
CW_API cw_status cw_config_load(const char* path, cw_config** out);
CW_API cw_status cw_config_parse(const char* json_text, cw_config** out);

/* Applies CHATWEAVE_* environment overrides. */
CW_API cw_status cw_config_apply_env(cw_config* config);

/* Sets a dotted key path ("extraction.delta_t") from its text form. */
CW_API cw_status cw_config_set(cw_config* config, const char* key,
                               const char* value);

/* Serializes to the JSON shape cw_config_parse accepts. */
CW_API cw_status cw_config_dump(const cw_config* config, char** out_json);

CW_API cw_status cw_config_validate(const cw_config* config);

CW_API void cw_config_free(cw_config* config);

/* ---- single-channel access -------------------------------------------- */

typedef struct cw_stream cw_stream;
typedef struct cw_pairs cw_pairs;

/* Loads one channel from its transcript and comment files: parses, sorts,
 * collapses duplicate comments, validates. Violations are fatal here; use
 * cw_run_ingest_check for a report instead. */
CW_API cw_status cw_stream_load(const char* transcript_path,
                                const char* comment_path,
                                const cw_config* config, cw_stream** out);

CW_API cw_status cw_stream_counts(const cw_stream* stream,
                                  int64_t* utterances, int64_t* comments);

CW_API void cw_stream_free(cw_stream* stream);

/* Runs dialogue extraction on one loaded channel. */
CW_API cw_status cw_extract(const cw_stream* stream, const cw_config* config,
                            cw_pairs** out);

CW_API int64_t cw_pairs_count(const cw_pairs* pairs);

/* All pairs as JSONL text, one object per line. */
CW_API cw_status cw_pairs_jsonl(const cw_pairs* pairs, char** out_text);

CW_API cw_status cw_pairs_write(const cw_pairs* pairs, const char* path);

CW_API void cw_pairs_free(cw_pairs* pairs);

/* ---- pipeline runs ----------------------------------------------------- */
/* These mirror the CLI subcommands. Paths and thresholds come from the
 * config; each writes its outputs under the configured output directory and
 * returns the machine-readable summary through out parameters. */

/* Validates every channel under the configured input directory. *out_ok is 1
 * only if every channel parses cleanly with zero violations. */
CW_API cw_status cw_run_ingest_check(const cw_config* config,
                                     char** out_report_json, int* out_ok);

/* Extracts all channels in parallel. Summary JSON fields: channels, pairs,
 * dropped, duration_ms. */
CW_API cw_status cw_run_extract(const cw_config* config,
                                char** out_summary_json);

/* Builds one text profile per channel. */
CW_API cw_status cw_run_persona(const cw_config* config,
                                int64_t* out_profiles);

/* Emits benchmark task files and their train/test splits from a previous
 * extract run. Summary JSON fields: response_pairs, addressee_sessions,
 * missing_profiles, response_train, response_test, addressee_train,
 * addressee_test. */
CW_API cw_status cw_run_taskgen(const cw_config* config,
                                char** out_summary_json);

/* Corpus statistics over a previous extract run plus the input streams. */
CW_API cw_status cw_run_stats(const cw_config* config, char** out_stats_json);

/* Runs the synthetic benchmark sweep. spec_path NULL or empty selects the
 * bundled rows. *out_rows_failed counts rows below their declared floors;
 * the run itself still returns CW_OK when rows fail. */
CW_API cw_status cw_run_bench(const cw_config* config, const char* spec_path,
                              char** out_table, int* out_rows_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CHATWEAVE_H */
