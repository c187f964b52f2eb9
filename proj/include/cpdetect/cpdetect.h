/* cpdetect: change-point tests for the cross-sectional dependence of
 * multivariate time series.
 *
 * C interface of the shared library. All objects are opaque handles owned
 * by the library; every function that can fail returns a cpd_status and
 * leaves a message retrievable through cpd_last_error() (per thread).
 */
#ifndef CPDETECT_H
#define CPDETECT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CPD_API __declspec(dllexport)
#else
#define CPD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cpd_status {
    CPD_OK = 0,
    CPD_ERR_INVALID_ARGUMENT = 1,
    CPD_ERR_PARSE = 2,
    CPD_ERR_DEGENERATE = 3,
    CPD_ERR_IO = 4,
    CPD_ERR_INTERNAL = 5
} cpd_status;

typedef struct cpd_sample cpd_sample;
typedef struct cpd_report cpd_report;

/* Library version, e.g. "0.1.0". */
CPD_API const char* cpd_version(void);

/* Message of the last failure on the calling thread; empty string if none. */
CPD_API const char* cpd_last_error(void);

/* ------------------------------------------------------------------ */
/* Samples                                                            */

/* Wraps a row-major n x d matrix (copied). Requires n >= 2, d >= 2 and
 * finite entries. */
CPD_API cpd_status cpd_sample_create(const double* data, int64_t n, int64_t d,
                                     cpd_sample** out);

/* Reads a CSV file: comma separated, optional single header row, numeric
 * body. has_header: 1 = yes, 0 = no, -1 = detect from the first row. */
CPD_API cpd_status cpd_sample_read_csv(const char* path, int has_header, cpd_sample** out);

/* Same on an in-memory buffer. */
CPD_API cpd_status cpd_sample_parse_csv(const char* text, int has_header, cpd_sample** out);

CPD_API int64_t cpd_sample_rows(const cpd_sample* sample);
CPD_API int64_t cpd_sample_cols(const cpd_sample* sample);

CPD_API void cpd_sample_free(cpd_sample* sample);

/* ------------------------------------------------------------------ */
/* Tests                                                               */

typedef struct cpd_test_options {
    const char* statistic; /* "rho1" | "rho2" | "rho3" */
    const char* method;    /* "boot-iid" | "boot-dep" | "asymptotic" */
    const char* serial;    /* asymptotic only: "iid" | "dep" */
    int32_t replicates;    /* bootstrap replicates M */
    int32_t ell;           /* dependence window; 0 = data-driven */
    double bn_exponent;    /* smoothing bandwidth b_n = n^(-exponent) */
    const char* divisor;   /* "simulation" (ranks / (m+1)) | "theory" (ranks / m) */
    uint64_t seed;
    int32_t threads;       /* 0 = hardware concurrency */
} cpd_test_options;

/* Fills the recommended defaults: rho3, boot-dep, M = 1000, ell data-driven,
 * bn_exponent 0.51, simulation divisor, seed 1, all hardware threads. */
CPD_API cpd_status cpd_test_options_init(cpd_test_options* options);

CPD_API cpd_status cpd_test_run(const cpd_sample* sample, const cpd_test_options* options,
                                cpd_report** out);

/* Report accessors. */
CPD_API double cpd_report_statistic(const cpd_report* report);
CPD_API double cpd_report_pvalue(const cpd_report* report);
CPD_API int64_t cpd_report_changepoint(const cpd_report* report);
/* Selected dependence window, or 0 when the method used none. */
CPD_API int64_t cpd_report_ell(const cpd_report* report);

/* Renders "json" or "text" into a library-owned string; release with
 * cpd_string_free. */
CPD_API cpd_status cpd_report_render(const cpd_report* report, const char* format, char** out);

CPD_API void cpd_report_free(cpd_report* report);
CPD_API void cpd_string_free(char* text);

/* ------------------------------------------------------------------ */
/* Simulation grids                                                    */

/* Runs every cell of a grid configuration (flat key-value format, see the
 * README) and renders the rejection table as CSV. reps_override > 0
 * replaces each cell's repetition count. verbose != 0 reports per-cell
 * progress on stderr. */
CPD_API cpd_status cpd_experiment_run(const char* config_text, int32_t reps_override,
                                      int32_t threads, uint64_t seed, int verbose,
                                      char** csv_out);

/* Convenience wrapper: reads the config from a file and writes the CSV to
 * out_path. */
CPD_API cpd_status cpd_experiment_run_file(const char* config_path, int32_t reps_override,
                                           int32_t threads, uint64_t seed, int verbose,
                                           const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CPDETECT_H */
