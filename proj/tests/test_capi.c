/* Plain C client of libqpe. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qpe/qpe.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

#define EXPECT_OK(call) EXPECT((call) == QPE_OK)

static void test_basics(void) {
  EXPECT(strlen(qpe_version()) > 0);
  EXPECT(strcmp(qpe_status_string(QPE_OK), qpe_status_string(QPE_ERR_CONFIG)) != 0);
  EXPECT(qpe_status_string((qpe_status)99) != NULL);

  double w = 0;
  EXPECT_OK(qpe_work_per_qubit(0.2, 1.0, &w));
  EXPECT(fabs(w - 0.003302) < 1e-5);
  EXPECT(qpe_work_per_qubit(-1.0, 1.0, &w) == QPE_ERR_INPUT_DOMAIN);
  EXPECT(strlen(qpe_last_error()) > 0);
  EXPECT(qpe_work_per_qubit(0.2, 1.0, NULL) == QPE_ERR_NULL_ARGUMENT);

  double m0, c0, r0;
  EXPECT_OK(qpe_sweet_spot(2.5, 1e-4, 1.0, 1.0, &m0, &c0, &r0));
  EXPECT(fabs(m0 - 331.852) < 1e-2);
}

static void test_planning(void) {
  const double f[] = {1, 4, 9};
  qpe_series* s = NULL;
  EXPECT_OK(qpe_series_from_values(f, 3, &s));
  size_t n = 0;
  EXPECT_OK(qpe_series_length(s, &n));
  EXPECT(n == 3);

  qpe_plan plan;
  EXPECT_OK(qpe_true_complexity(s, 0.1, &plan));
  EXPECT(plan.total_gates == 4 && plan.steps == 3 && plan.full_rounds == 1 && plan.tail_steps == 1);
  EXPECT(plan.rounds == 2);

  double c = 0;
  size_t n_opt = 0;
  EXPECT_OK(qpe_raw_complexity(s, 0.1, &c, &n_opt));
  EXPECT(n_opt == 3 && fabs(c - 10.0 / 3.0) < 1e-12);

  double total = 0;
  EXPECT_OK(qpe_optimal_resource(s, 0.1, 10.0, 1.0, QPE_ROUNDS_EFFECTIVE, &plan, &total));
  EXPECT(total == 42.0);
  EXPECT_OK(qpe_optimal_resource(s, 0.1, 10.0, 1.0, QPE_ROUNDS_LITERAL, &plan, &total));
  EXPECT(total == 42.0);
  qpe_series_destroy(s);

  const double zeros[] = {0, 0};
  EXPECT_OK(qpe_series_from_values(zeros, 2, &s));
  EXPECT(qpe_true_complexity(s, 0.1, &plan) == QPE_ERR_UNATTAINABLE);
  qpe_series_destroy(s);

  const double negative[] = {1, -1};
  EXPECT(qpe_series_from_values(negative, 2, &s) == QPE_ERR_INVARIANT);

  EXPECT_OK(qpe_series_field(300, 2.5, 1, 1, 0, &s));
  const double* v = NULL;
  EXPECT_OK(qpe_series_length(s, &n));
  EXPECT_OK(qpe_series_data(s, &v));
  EXPECT(n == 597);
  EXPECT(v[0] > 0.99 && v[0] < 1.0);
  qpe_series_destroy(s);

  EXPECT_OK(qpe_series_vmf(50, 0.5, 40, &s));
  EXPECT_OK(qpe_series_length(s, &n));
  EXPECT(n == 40);
  qpe_series_destroy(s);
  EXPECT(qpe_series_vmf(-1, 0.5, 40, &s) == QPE_ERR_INPUT_DOMAIN);
  EXPECT(qpe_series_field(300, 0.05, 1, 1, 1, NULL) == QPE_ERR_NULL_ARGUMENT);
}

static void test_config_and_run(void) {
  qpe_config* cfg = NULL;
  EXPECT(qpe_config_parse("{\"kapa\": 1}", &cfg) == QPE_ERR_CONFIG);
  EXPECT(strstr(qpe_last_error(), "kapa") != NULL);
  EXPECT(qpe_config_load("/definitely/not/here.json", &cfg) == QPE_ERR_IO);

  EXPECT_OK(qpe_config_parse("{\"sweep\": {\"axis\": \"m_bar\", \"grid\": [150, 300, 600]}}", &cfg));
  int ok = 0;
  char* report = NULL;
  EXPECT_OK(qpe_config_validate(cfg, &ok, &report));
  EXPECT(ok == 1);
  qpe_string_free(report);

  EXPECT_OK(qpe_config_set_output(cfg, "somewhere.csv"));
  char* out = NULL;
  EXPECT_OK(qpe_config_get_output(cfg, &out));
  EXPECT(strcmp(out, "somewhere.csv") == 0);
  qpe_string_free(out);
  EXPECT_OK(qpe_config_set_format(cfg, QPE_FORMAT_JSON));
  qpe_format fmt = QPE_FORMAT_CSV;
  EXPECT_OK(qpe_config_get_format(cfg, &fmt));
  EXPECT(fmt == QPE_FORMAT_JSON);

  qpe_result* res = NULL;
  EXPECT(qpe_run(cfg, "nope", &res) == QPE_ERR_CONFIG);

  EXPECT_OK(qpe_config_set_workers(cfg, 2));
  EXPECT_OK(qpe_run(cfg, "sweep", &res));
  size_t tables = 0, rows = 0, cols = 0;
  EXPECT_OK(qpe_result_table_count(res, &tables));
  EXPECT(tables == 1);
  EXPECT_OK(qpe_result_row_count(res, 0, &rows));
  EXPECT(rows == 3);
  EXPECT_OK(qpe_result_column_count(res, 0, &cols));
  EXPECT(cols > 20);
  const char* name = NULL;
  EXPECT_OK(qpe_result_column_name(res, 0, 0, &name));
  EXPECT(strcmp(name, "index") == 0);
  EXPECT(qpe_result_column_name(res, 0, cols, &name) == QPE_ERR_OUT_OF_RANGE);

  double m = 0, big_c = 0, kappa = 0;
  EXPECT_OK(qpe_result_number(res, 0, 1, "m_bar", &m));
  EXPECT(m == 300);
  EXPECT_OK(qpe_result_number(res, 0, 1, "C", &big_c));
  EXPECT(big_c == 189);
  EXPECT_OK(qpe_result_number(res, 0, 1, "kappa", &kappa));
  EXPECT(isnan(kappa));
  EXPECT(qpe_result_number(res, 0, 1, "no_such_column", &m) == QPE_ERR_OUT_OF_RANGE);
  EXPECT(qpe_result_number(res, 0, 9, "m_bar", &m) == QPE_ERR_OUT_OF_RANGE);

  char* status = NULL;
  EXPECT_OK(qpe_result_text(res, 0, 0, "status", &status));
  EXPECT(strcmp(status, "ok") == 0);
  qpe_string_free(status);

  char* text = NULL;
  EXPECT_OK(qpe_result_render(res, QPE_FORMAT_CSV, &text));
  EXPECT(strncmp(text, "index,", 6) == 0);

  /* Same rows with one worker. */
  qpe_result* again = NULL;
  char* text1 = NULL;
  EXPECT_OK(qpe_config_set_workers(cfg, 1));
  EXPECT_OK(qpe_run(cfg, "sweep", &again));
  EXPECT_OK(qpe_result_render(again, QPE_FORMAT_CSV, &text1));
  EXPECT(strcmp(text, text1) == 0);
  qpe_string_free(text);
  qpe_string_free(text1);
  qpe_result_destroy(again);

  EXPECT(qpe_result_write(res, "/proc/qpe_cannot_write/x.csv", QPE_FORMAT_CSV, NULL) == QPE_ERR_IO);
  qpe_result_destroy(res);

  char* json = NULL;
  EXPECT_OK(qpe_config_to_json(cfg, &json));
  EXPECT(strstr(json, "\"m_bar\"") != NULL);
  qpe_string_free(json);
  qpe_config_destroy(cfg);

  EXPECT_OK(qpe_config_parse("{\"model\": \"vmf\", \"vmf\": {\"kappa\": -1}}", &cfg));
  EXPECT_OK(qpe_config_validate(cfg, &ok, &report));
  EXPECT(ok == 0);
  EXPECT(strstr(report, "kappa") != NULL);
  qpe_string_free(report);
  EXPECT(qpe_run(cfg, "sweep", &res) == QPE_ERR_CONFIG);
  qpe_config_destroy(cfg);

  /* Null handles are rejected, destroy(NULL) is a no-op. */
  EXPECT(qpe_run(NULL, "sweep", &res) == QPE_ERR_NULL_ARGUMENT);
  qpe_config_destroy(NULL);
  qpe_result_destroy(NULL);
  qpe_series_destroy(NULL);
  qpe_string_free(NULL);
}

int main(void) {
  test_basics();
  test_planning();
  test_config_and_run();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
