#pragma once

// Data behind each figure-style subcommand, plus the per-point evaluations
// they share.

#include <optional>
#include <vector>

#include "qpe/experiment/config.hpp"
#include "qpe/experiment/table.hpp"

namespace qpe::experiment {

struct FieldPoint {
  FieldParams params;
  FieldIntegrals integrals;
  ChannelWithDerivative channel;
  QfiSeries series;  // ideal probe s0 = (0, 0, 1)
};

struct VmfPoint {
  VmfParams params;
  ChannelWithDerivative channel;
  VmfLambdas lambdas;
  QfiSeries series;  // ideal probe s0 = (1, 0, 0)
};

// n_max defaults to default_n_max of the model's peak estimate.
FieldPoint evaluate_field(const FieldParams& p, std::optional<std::size_t> n_max = {});
VmfPoint evaluate_vmf(const VmfParams& p, std::optional<std::size_t> n_max = {});

// Resource R_{N_C} of the complexity-optimal plan over a log grid of m_bar
// around the analytic sweet spot.
struct PlateauScan {
  SweetSpot analytic;
  std::vector<double> m_bars;  // ascending
  std::vector<double> resource;
  std::vector<std::size_t> gates;
  double plateau_median = 0.0;  // median R over the lowest-m_bar third of the grid
  double onset_m_bar = 0.0;     // first m_bar with R > onset_factor * median; NaN if none
};

PlateauScan scan_plateau(const FieldParams& base, const Target& t, const SweetSpotOptions& opt, double e_ext,
                         std::optional<std::size_t> n_max, unsigned workers);

Result run_fig2(const ExperimentConfig& cfg);
Result run_fig3(const ExperimentConfig& cfg);
Result run_fig4(const ExperimentConfig& cfg);
Result run_fig5(const ExperimentConfig& cfg);
Result run_fig7(const ExperimentConfig& cfg);
Result run_sweep(const ExperimentConfig& cfg);
Result run_sweet_spot(const ExperimentConfig& cfg);

}  // namespace qpe::experiment
