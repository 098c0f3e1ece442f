#include "qpe/experiment/runner.hpp"

#include "qpe/errors.hpp"
#include "qpe/experiment/figures.hpp"

namespace qpe::experiment {

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig7", "sweep", "sweet-spot"};
  return names;
}

Result run(const ExperimentConfig& cfg, std::string_view subcommand) {
  require_valid(cfg);
  if (subcommand == "fig2") return run_fig2(cfg);
  if (subcommand == "fig3") return run_fig3(cfg);
  if (subcommand == "fig4") return run_fig4(cfg);
  if (subcommand == "fig5") return run_fig5(cfg);
  if (subcommand == "fig7") return run_fig7(cfg);
  if (subcommand == "sweep") return run_sweep(cfg);
  if (subcommand == "sweet-spot") return run_sweet_spot(cfg);
  raise(ErrorKind::Config, "unknown subcommand '" + std::string(subcommand) + "'");
}

}  // namespace qpe::experiment
