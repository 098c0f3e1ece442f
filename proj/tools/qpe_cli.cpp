// Command-line front end. Talks to the library only through qpe.h.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qpe/qpe.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_max;
};

struct ConfigDeleter {
  void operator()(qpe_config* c) const { qpe_config_destroy(c); }
};
struct ResultDeleter {
  void operator()(qpe_result* r) const { qpe_result_destroy(r); }
};
using ConfigPtr = std::unique_ptr<qpe_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<qpe_result, ResultDeleter>;

int exit_code(qpe_status s) {
  if (s == QPE_OK) return kExitOk;
  if (s == QPE_ERR_CONFIG) return kExitConfig;
  return kExitNumeric;
}

int report(qpe_status s) {
  std::cerr << "qpe: " << qpe_status_string(s) << ": " << qpe_last_error() << "\n";
  return exit_code(s);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  qpe_string_free(s);
  return out;
}

// Loads the config and applies command-line overrides.
qpe_status load_config(const Options& o, ConfigPtr& cfg) {
  qpe_config* raw = nullptr;
  qpe_status s = o.config.empty() ? qpe_config_create_default(&raw) : qpe_config_load(o.config.c_str(), &raw);
  if (s != QPE_OK) return s;
  cfg.reset(raw);
  if (o.workers && (s = qpe_config_set_workers(raw, *o.workers)) != QPE_OK) return s;
  if (o.seed && (s = qpe_config_set_seed(raw, *o.seed)) != QPE_OK) return s;
  if (o.n_max && (s = qpe_config_set_n_max(raw, *o.n_max)) != QPE_OK) return s;
  if (!o.out.empty() && (s = qpe_config_set_output(raw, o.out.c_str())) != QPE_OK) return s;
  if (!o.format.empty())
    if ((s = qpe_config_set_format(raw, o.format == "json" ? QPE_FORMAT_JSON : QPE_FORMAT_CSV)) != QPE_OK) return s;
  return QPE_OK;
}

int run_validate(const Options& o) {
  ConfigPtr cfg;
  if (qpe_status s = load_config(o, cfg); s != QPE_OK) return report(s);
  int ok = 0;
  char* text = nullptr;
  if (qpe_status s = qpe_config_validate(cfg.get(), &ok, &text); s != QPE_OK) return report(s);
  std::cout << take(text);
  return ok ? kExitOk : kExitConfig;
}

int run_subcommand(const std::string& name, const Options& o) {
  ConfigPtr cfg;
  if (qpe_status s = load_config(o, cfg); s != QPE_OK) return report(s);

  qpe_result* raw = nullptr;
  if (qpe_status s = qpe_run(cfg.get(), name.c_str(), &raw); s != QPE_OK) return report(s);
  ResultPtr res(raw);

  std::size_t nwarn = 0;
  qpe_result_warning_count(res.get(), &nwarn);
  for (std::size_t k = 0; k < nwarn; ++k) {
    const char* w = nullptr;
    qpe_result_warning(res.get(), k, &w);
    std::cerr << "qpe: warning: " << w << "\n";
  }

  qpe_format format = QPE_FORMAT_CSV;
  qpe_config_get_format(cfg.get(), &format);
  char* path_raw = nullptr;
  if (qpe_status s = qpe_config_get_output(cfg.get(), &path_raw); s != QPE_OK) return report(s);
  std::string path = take(path_raw);
  if (path.empty()) {
    if (const char* dir = std::getenv("QPE_OUT_DIR"); dir && *dir)
      path = (std::filesystem::path(dir) / (name + (format == QPE_FORMAT_JSON ? ".json" : ".csv"))).string();
  }

  if (path.empty()) {
    char* text = nullptr;
    if (qpe_status s = qpe_result_render(res.get(), format, &text); s != QPE_OK) return report(s);
    std::cout << take(text);
    return kExitOk;
  }
  std::size_t files = 0;
  if (qpe_status s = qpe_result_write(res.get(), path.c_str(), format, &files); s != QPE_OK) return report(s);
  std::cerr << "qpe: wrote " << files << " table(s) to " << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complexity and energy trade-off of noisy sequential phase estimation"};
  app.set_version_flag("--version", std::string(qpe_version()));
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output path (default: standard output or $QPE_OUT_DIR)");
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", opt.workers, "worker threads (0: all cores)");
    sub->add_option("--seed", opt.seed, "seed for Monte-Carlo checks");
    sub->add_option("--n-max", opt.n_max, "series length override")->check(CLI::PositiveNumber);
  };

  const std::pair<const char*, const char*> commands[] = {
      {"fig2", "vMF gate: F_N/N curves and complexity against 1/kappa"},
      {"fig3", "field gate: resource against 1/m_bar, several delta^2, sweet spots"},
      {"fig4", "resource with state-preparation cooling"},
      {"fig5", "resource with measurement cost, R_NC against R_NR"},
      {"fig7", "exact against approximate F_N/N for the field gate"},
      {"sweep", "one record per grid point of the configured sweep axis"},
      {"sweet-spot", "analytic sweet spot and empirical plateau onset"},
      {"validate", "check a config and list errors and validity warnings"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    sub->callback([&chosen, n = std::string(name)] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (chosen == "validate") return run_validate(opt);
  return run_subcommand(chosen, opt);
}
