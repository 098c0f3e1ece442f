#include "qpe/qpe.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "qpe/errors.hpp"
#include "qpe/experiment/figures.hpp"
#include "qpe/experiment/runner.hpp"

using namespace qpe;
using namespace qpe::experiment;

struct qpe_config {
  ExperimentConfig cfg;
};

struct qpe_result {
  Result res;
};

struct qpe_series {
  std::vector<double> values;
};

namespace {

thread_local std::string g_last_error;

qpe_status code_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::InputDomain: return QPE_ERR_INPUT_DOMAIN;
    case ErrorKind::Invariant: return QPE_ERR_INVARIANT;
    case ErrorKind::Numeric: return QPE_ERR_NUMERIC;
    case ErrorKind::Structure: return QPE_ERR_STRUCTURE;
    case ErrorKind::Unattainable: return QPE_ERR_UNATTAINABLE;
    case ErrorKind::SingularOutcome: return QPE_ERR_SINGULAR_OUTCOME;
    case ErrorKind::NonInformative: return QPE_ERR_NON_INFORMATIVE;
    case ErrorKind::RealEigenvalues: return QPE_ERR_REAL_EIGENVALUES;
    case ErrorKind::Config: return QPE_ERR_CONFIG;
    case ErrorKind::Io: return QPE_ERR_IO;
  }
  return QPE_ERR_INTERNAL;
}

qpe_status fail(qpe_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Converts any exception escaping fn into a status code.
template <class Fn>
qpe_status guard(Fn&& fn) {
  try {
    fn();
    return QPE_OK;
  } catch (const Error& e) {
    return fail(code_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QPE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QPE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QPE_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define QPE_REQUIRE(ptr) \
  if (!(ptr)) return fail(QPE_ERR_NULL_ARGUMENT, "null argument: " #ptr)

const Table* table_at(const qpe_result* r, std::size_t t) {
  if (t >= r->res.tables.size()) return nullptr;
  return &r->res.tables[t];
}

qpe_status get_cell(const qpe_result* r, std::size_t t, std::size_t row, const char* column, const Cell** out) {
  const Table* tab = table_at(r, t);
  if (!tab) return fail(QPE_ERR_OUT_OF_RANGE, "table index out of range");
  if (row >= tab->rows.size()) return fail(QPE_ERR_OUT_OF_RANGE, "row index out of range");
  for (std::size_t k = 0; k < tab->columns.size(); ++k)
    if (tab->columns[k].name == column) {
      *out = &tab->rows[row][k];
      return QPE_OK;
    }
  return fail(QPE_ERR_OUT_OF_RANGE, std::string("no column named ") + column);
}

Format format_of(qpe_format f) { return f == QPE_FORMAT_JSON ? Format::Json : Format::Csv; }

}  // namespace

extern "C" {

const char* qpe_version(void) { return QPE_VERSION_STRING; }

const char* qpe_status_string(qpe_status s) {
  switch (s) {
    case QPE_OK: return "ok";
    case QPE_ERR_INPUT_DOMAIN: return "input-domain error";
    case QPE_ERR_INVARIANT: return "invariant violation";
    case QPE_ERR_NUMERIC: return "numeric failure";
    case QPE_ERR_STRUCTURE: return "structural error";
    case QPE_ERR_UNATTAINABLE: return "unattainable target";
    case QPE_ERR_SINGULAR_OUTCOME: return "singular outcome";
    case QPE_ERR_NON_INFORMATIVE: return "non-informative measurement";
    case QPE_ERR_REAL_EIGENVALUES: return "real-eigenvalue regime";
    case QPE_ERR_CONFIG: return "configuration error";
    case QPE_ERR_IO: return "i/o error";
    case QPE_ERR_NULL_ARGUMENT: return "null argument";
    case QPE_ERR_OUT_OF_RANGE: return "index out of range";
    case QPE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qpe_last_error(void) { return g_last_error.c_str(); }

void qpe_string_free(char* s) { std::free(s); }

qpe_status qpe_config_create_default(qpe_config** out) {
  QPE_REQUIRE(out);
  return guard([&] { *out = new qpe_config{default_config()}; });
}

qpe_status qpe_config_parse(const char* json_text, qpe_config** out) {
  QPE_REQUIRE(json_text);
  QPE_REQUIRE(out);
  return guard([&] { *out = new qpe_config{parse_config(std::string(json_text))}; });
}

qpe_status qpe_config_load(const char* path, qpe_config** out) {
  QPE_REQUIRE(path);
  QPE_REQUIRE(out);
  return guard([&] {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(ErrorKind::Io, std::string("cannot read config file ") + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    *out = new qpe_config{parse_config(ss.str())};
  });
}

void qpe_config_destroy(qpe_config* cfg) { delete cfg; }

qpe_status qpe_config_set_n_max(qpe_config* cfg, size_t n_max) {
  QPE_REQUIRE(cfg);
  if (n_max == 0) cfg->cfg.n_max.reset();
  else cfg->cfg.n_max = n_max;
  return QPE_OK;
}

qpe_status qpe_config_set_seed(qpe_config* cfg, uint64_t seed) {
  QPE_REQUIRE(cfg);
  cfg->cfg.seed = seed;
  return QPE_OK;
}

qpe_status qpe_config_set_workers(qpe_config* cfg, unsigned workers) {
  QPE_REQUIRE(cfg);
  cfg->cfg.workers = workers;
  return QPE_OK;
}

qpe_status qpe_config_set_output(qpe_config* cfg, const char* path) {
  QPE_REQUIRE(cfg);
  QPE_REQUIRE(path);
  return guard([&] { cfg->cfg.output_path = path; });
}

qpe_status qpe_config_set_format(qpe_config* cfg, qpe_format format) {
  QPE_REQUIRE(cfg);
  if (format != QPE_FORMAT_CSV && format != QPE_FORMAT_JSON) return fail(QPE_ERR_OUT_OF_RANGE, "unknown format");
  cfg->cfg.format = format_of(format);
  return QPE_OK;
}

qpe_status qpe_config_get_output(const qpe_config* cfg, char** path) {
  QPE_REQUIRE(cfg);
  QPE_REQUIRE(path);
  return guard([&] { *path = dup_string(cfg->cfg.output_path); });
}

qpe_status qpe_config_get_format(const qpe_config* cfg, qpe_format* format) {
  QPE_REQUIRE(cfg);
  QPE_REQUIRE(format);
  *format = cfg->cfg.format == Format::Json ? QPE_FORMAT_JSON : QPE_FORMAT_CSV;
  return QPE_OK;
}

qpe_status qpe_config_validate(const qpe_config* cfg, int* ok, char** report) {
  QPE_REQUIRE(cfg);
  QPE_REQUIRE(ok);
  return guard([&] {
    const Diagnostics d = validate_config(cfg->cfg);
    *ok = d.ok() ? 1 : 0;
    if (report) *report = dup_string(d.to_text());
  });
}

qpe_status qpe_config_to_json(const qpe_config* cfg, char** json_text) {
  QPE_REQUIRE(cfg);
  QPE_REQUIRE(json_text);
  return guard([&] { *json_text = dup_string(to_json(cfg->cfg).dump(2)); });
}

qpe_status qpe_run(const qpe_config* cfg, const char* subcommand, qpe_result** out) {
  QPE_REQUIRE(cfg);
  QPE_REQUIRE(subcommand);
  QPE_REQUIRE(out);
  return guard([&] { *out = new qpe_result{run(cfg->cfg, subcommand)}; });
}

void qpe_result_destroy(qpe_result* res) { delete res; }

qpe_status qpe_result_table_count(const qpe_result* res, size_t* count) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(count);
  *count = res->res.tables.size();
  return QPE_OK;
}

qpe_status qpe_result_table_name(const qpe_result* res, size_t table, const char** name) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(name);
  const Table* t = table_at(res, table);
  if (!t) return fail(QPE_ERR_OUT_OF_RANGE, "table index out of range");
  *name = t->name.c_str();
  return QPE_OK;
}

qpe_status qpe_result_row_count(const qpe_result* res, size_t table, size_t* rows) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(rows);
  const Table* t = table_at(res, table);
  if (!t) return fail(QPE_ERR_OUT_OF_RANGE, "table index out of range");
  *rows = t->rows.size();
  return QPE_OK;
}

qpe_status qpe_result_column_count(const qpe_result* res, size_t table, size_t* columns) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(columns);
  const Table* t = table_at(res, table);
  if (!t) return fail(QPE_ERR_OUT_OF_RANGE, "table index out of range");
  *columns = t->columns.size();
  return QPE_OK;
}

qpe_status qpe_result_column_name(const qpe_result* res, size_t table, size_t column, const char** name) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(name);
  const Table* t = table_at(res, table);
  if (!t || column >= t->columns.size()) return fail(QPE_ERR_OUT_OF_RANGE, "column index out of range");
  *name = t->columns[column].name.c_str();
  return QPE_OK;
}

qpe_status qpe_result_number(const qpe_result* res, size_t table, size_t row, const char* column, double* value) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(column);
  QPE_REQUIRE(value);
  const Cell* c = nullptr;
  if (qpe_status s = get_cell(res, table, row, column, &c); s != QPE_OK) return s;
  if (std::holds_alternative<double>(*c)) *value = std::get<double>(*c);
  else if (std::holds_alternative<long long>(*c)) *value = static_cast<double>(std::get<long long>(*c));
  else if (std::holds_alternative<bool>(*c)) *value = std::get<bool>(*c) ? 1.0 : 0.0;
  else if (std::holds_alternative<std::monostate>(*c)) *value = std::numeric_limits<double>::quiet_NaN();
  else return fail(QPE_ERR_INPUT_DOMAIN, std::string("column ") + column + " holds text");
  return QPE_OK;
}

qpe_status qpe_result_text(const qpe_result* res, size_t table, size_t row, const char* column, char** text) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(column);
  QPE_REQUIRE(text);
  const Cell* c = nullptr;
  if (qpe_status s = get_cell(res, table, row, column, &c); s != QPE_OK) return s;
  return guard([&] {
    std::string s;
    if (std::holds_alternative<std::string>(*c)) s = std::get<std::string>(*c);
    else if (std::holds_alternative<double>(*c)) s = format_double(std::get<double>(*c));
    else if (std::holds_alternative<long long>(*c)) s = std::to_string(std::get<long long>(*c));
    else if (std::holds_alternative<bool>(*c)) s = std::get<bool>(*c) ? "true" : "false";
    *text = dup_string(s);
  });
}

qpe_status qpe_result_warning_count(const qpe_result* res, size_t* count) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(count);
  *count = res->res.warnings.size();
  return QPE_OK;
}

qpe_status qpe_result_warning(const qpe_result* res, size_t index, const char** text) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(text);
  if (index >= res->res.warnings.size()) return fail(QPE_ERR_OUT_OF_RANGE, "warning index out of range");
  *text = res->res.warnings[index].c_str();
  return QPE_OK;
}

qpe_status qpe_result_write(const qpe_result* res, const char* path, qpe_format format, size_t* files) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(path);
  return guard([&] {
    const auto written = write_result(res->res, path, format_of(format));
    if (files) *files = written.size();
  });
}

qpe_status qpe_result_render(const qpe_result* res, qpe_format format, char** text) {
  QPE_REQUIRE(res);
  QPE_REQUIRE(text);
  return guard([&] { *text = dup_string(render(res->res, format_of(format))); });
}

qpe_status qpe_series_field(double m_bar, double g, double k_m, double k_theta, size_t n_max, qpe_series** out) {
  QPE_REQUIRE(out);
  return guard([&] {
    const FieldPoint fp = evaluate_field(FieldParams{m_bar, g, k_m, k_theta},
                                         n_max ? std::optional<std::size_t>(n_max) : std::nullopt);
    auto v = fp.series.values();
    *out = new qpe_series{{v.begin(), v.end()}};
  });
}

qpe_status qpe_series_vmf(double kappa, double phi, size_t n_max, qpe_series** out) {
  QPE_REQUIRE(out);
  return guard([&] {
    const VmfPoint vp = evaluate_vmf(VmfParams{kappa, phi}, n_max ? std::optional<std::size_t>(n_max) : std::nullopt);
    auto v = vp.series.values();
    *out = new qpe_series{{v.begin(), v.end()}};
  });
}

qpe_status qpe_series_from_values(const double* values, size_t n, qpe_series** out) {
  QPE_REQUIRE(values);
  QPE_REQUIRE(out);
  return guard([&] {
    std::vector<double> v(values, values + n);
    if (v.empty()) raise(ErrorKind::InputDomain, "series must not be empty");
    const QfiSeries checked("custom", BlochVector(), v);
    *out = new qpe_series{std::move(v)};
  });
}

void qpe_series_destroy(qpe_series* s) { delete s; }

qpe_status qpe_series_length(const qpe_series* s, size_t* n) {
  QPE_REQUIRE(s);
  QPE_REQUIRE(n);
  *n = s->values.size();
  return QPE_OK;
}

qpe_status qpe_series_data(const qpe_series* s, const double** values) {
  QPE_REQUIRE(s);
  QPE_REQUIRE(values);
  *values = s->values.data();
  return QPE_OK;
}

qpe_status qpe_raw_complexity(const qpe_series* s, double delta_sq, double* c, size_t* n_opt) {
  QPE_REQUIRE(s);
  QPE_REQUIRE(c);
  return guard([&] {
    const RawComplexity raw = raw_complexity(s->values, Target(delta_sq));
    *c = raw.c;
    if (n_opt) *n_opt = raw.n_opt;
  });
}

static void fill_plan(const RoundPlan& p, RoundCounting counting, qpe_plan* out) {
  out->steps = p.steps;
  out->full_rounds = p.full_rounds;
  out->tail_steps = p.tail_steps;
  out->total_gates = p.total_gates();
  out->rounds = p.rounds(counting);
}

qpe_status qpe_true_complexity(const qpe_series* s, double delta_sq, qpe_plan* plan) {
  QPE_REQUIRE(s);
  QPE_REQUIRE(plan);
  return guard([&] { fill_plan(true_complexity(s->values, Target(delta_sq)).plan, RoundCounting::Effective, plan); });
}

qpe_status qpe_optimal_resource(const qpe_series* s, double delta_sq, double m_bar, double e_ext,
                                qpe_round_counting counting, qpe_plan* plan, double* total) {
  QPE_REQUIRE(s);
  QPE_REQUIRE(plan);
  QPE_REQUIRE(total);
  return guard([&] {
    const RoundCounting rc = counting == QPE_ROUNDS_LITERAL ? RoundCounting::Literal : RoundCounting::Effective;
    const OptimalResource r = optimal_resource(s->values, Target(delta_sq), m_bar, e_ext, rc);
    fill_plan(r.plan, rc, plan);
    *total = r.resource.total;
  });
}

qpe_status qpe_sweet_spot(double g, double delta_sq, double k_m, double k_theta, double* m_bar0, double* c0,
                          double* r0) {
  QPE_REQUIRE(m_bar0);
  return guard([&] {
    const SweetSpot ss = sweet_spot(g, Target(delta_sq), k_m, k_theta);
    *m_bar0 = ss.m_bar0;
    if (c0) *c0 = ss.c0;
    if (r0) *r0 = ss.r0;
  });
}

qpe_status qpe_work_per_qubit(double xi, double omega0_ratio, double* w_bar) {
  QPE_REQUIRE(w_bar);
  return guard([&] { *w_bar = thermo::work_per_qubit(thermo::ThermalEnv{xi, omega0_ratio, 1.0}); });
}

}  // extern "C"
