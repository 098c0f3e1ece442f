/* C interface to the qpe library. Objects are opaque handles owned by the
 * caller and released with the matching *_destroy function. Every fallible
 * call returns a qpe_status; on failure qpe_last_error() describes it (per
 * thread, valid until the next failing call on that thread). */
#ifndef QPE_QPE_H
#define QPE_QPE_H

#include <stddef.h>
#include <stdint.h>

#if defined(QPE_BUILDING_LIBRARY)
#define QPE_API __attribute__((visibility("default")))
#else
#define QPE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpe_status {
  QPE_OK = 0,
  QPE_ERR_INPUT_DOMAIN = 1,
  QPE_ERR_INVARIANT = 2,
  QPE_ERR_NUMERIC = 3,
  QPE_ERR_STRUCTURE = 4,
  QPE_ERR_UNATTAINABLE = 5,
  QPE_ERR_SINGULAR_OUTCOME = 6,
  QPE_ERR_NON_INFORMATIVE = 7,
  QPE_ERR_REAL_EIGENVALUES = 8,
  QPE_ERR_CONFIG = 9,
  QPE_ERR_IO = 10,
  QPE_ERR_NULL_ARGUMENT = 11,
  QPE_ERR_OUT_OF_RANGE = 12,
  QPE_ERR_INTERNAL = 13
} qpe_status;

typedef enum qpe_format { QPE_FORMAT_CSV = 0, QPE_FORMAT_JSON = 1 } qpe_format;

/* Effective charges external cost for the tail round only when it has steps;
 * literal always charges Q + 1 rounds. */
typedef enum qpe_round_counting { QPE_ROUNDS_EFFECTIVE = 0, QPE_ROUNDS_LITERAL = 1 } qpe_round_counting;

typedef struct qpe_config qpe_config;
typedef struct qpe_result qpe_result;
typedef struct qpe_series qpe_series;

typedef struct qpe_plan {
  size_t steps;       /* N */
  size_t full_rounds; /* Q_N */
  size_t tail_steps;  /* N0 */
  size_t total_gates;
  size_t rounds;      /* under the requested round counting */
} qpe_plan;

QPE_API const char* qpe_version(void);
QPE_API const char* qpe_status_string(qpe_status status);
QPE_API const char* qpe_last_error(void);
QPE_API void qpe_string_free(char* s);

/* Configuration */
QPE_API qpe_status qpe_config_create_default(qpe_config** out);
QPE_API qpe_status qpe_config_parse(const char* json_text, qpe_config** out);
QPE_API qpe_status qpe_config_load(const char* path, qpe_config** out);
QPE_API void qpe_config_destroy(qpe_config* cfg);
QPE_API qpe_status qpe_config_set_n_max(qpe_config* cfg, size_t n_max); /* 0: automatic */
QPE_API qpe_status qpe_config_set_seed(qpe_config* cfg, uint64_t seed);
QPE_API qpe_status qpe_config_set_workers(qpe_config* cfg, unsigned workers); /* 0: all cores */
QPE_API qpe_status qpe_config_set_output(qpe_config* cfg, const char* path);
QPE_API qpe_status qpe_config_set_format(qpe_config* cfg, qpe_format format);
QPE_API qpe_status qpe_config_get_output(const qpe_config* cfg, char** path);
QPE_API qpe_status qpe_config_get_format(const qpe_config* cfg, qpe_format* format);
/* *ok is 1 when no errors were found; *report (may be NULL) lists errors and
 * validity warnings, one per line. */
QPE_API qpe_status qpe_config_validate(const qpe_config* cfg, int* ok, char** report);
QPE_API qpe_status qpe_config_to_json(const qpe_config* cfg, char** json_text);

/* Experiments: subcommand is one of fig2, fig3, fig4, fig5, fig7, sweep,
 * sweet-spot. */
QPE_API qpe_status qpe_run(const qpe_config* cfg, const char* subcommand, qpe_result** out);
QPE_API void qpe_result_destroy(qpe_result* res);
QPE_API qpe_status qpe_result_table_count(const qpe_result* res, size_t* count);
QPE_API qpe_status qpe_result_table_name(const qpe_result* res, size_t table, const char** name);
QPE_API qpe_status qpe_result_row_count(const qpe_result* res, size_t table, size_t* rows);
QPE_API qpe_status qpe_result_column_count(const qpe_result* res, size_t table, size_t* columns);
QPE_API qpe_status qpe_result_column_name(const qpe_result* res, size_t table, size_t column, const char** name);
/* Numeric cell; empty cells read as NaN, booleans as 0/1. */
QPE_API qpe_status qpe_result_number(const qpe_result* res, size_t table, size_t row, const char* column, double* value);
QPE_API qpe_status qpe_result_text(const qpe_result* res, size_t table, size_t row, const char* column, char** text);
QPE_API qpe_status qpe_result_warning_count(const qpe_result* res, size_t* count);
QPE_API qpe_status qpe_result_warning(const qpe_result* res, size_t index, const char** text);
/* Writes data files plus schema sidecars; *files (may be NULL) receives the
 * number of data files. */
QPE_API qpe_status qpe_result_write(const qpe_result* res, const char* path, qpe_format format, size_t* files);
QPE_API qpe_status qpe_result_render(const qpe_result* res, qpe_format format, char** text);

/* QFI series F_1..F_n */
QPE_API qpe_status qpe_series_field(double m_bar, double g, double k_m, double k_theta, size_t n_max, qpe_series** out);
QPE_API qpe_status qpe_series_vmf(double kappa, double phi, size_t n_max, qpe_series** out);
QPE_API qpe_status qpe_series_from_values(const double* values, size_t n, qpe_series** out);
QPE_API void qpe_series_destroy(qpe_series* s);
QPE_API qpe_status qpe_series_length(const qpe_series* s, size_t* n);
QPE_API qpe_status qpe_series_data(const qpe_series* s, const double** values);

/* Planning */
QPE_API qpe_status qpe_raw_complexity(const qpe_series* s, double delta_sq, double* c, size_t* n_opt);
QPE_API qpe_status qpe_true_complexity(const qpe_series* s, double delta_sq, qpe_plan* plan);
QPE_API qpe_status qpe_optimal_resource(const qpe_series* s, double delta_sq, double m_bar, double e_ext,
                                        qpe_round_counting counting, qpe_plan* plan, double* total);
QPE_API qpe_status qpe_sweet_spot(double g, double delta_sq, double k_m, double k_theta, double* m_bar0, double* c0,
                                  double* r0);
QPE_API qpe_status qpe_work_per_qubit(double xi, double omega0_ratio, double* w_bar);

#ifdef __cplusplus
}
#endif

#endif
