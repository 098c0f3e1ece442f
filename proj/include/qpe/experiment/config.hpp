#pragma once

// Experiment configuration: a single JSON document describing the gate model,
// target, corrections and the grids swept by each subcommand.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qpe/channels.hpp"
#include "qpe/fisher.hpp"
#include "qpe/protocol.hpp"
#include "qpe/thermo.hpp"

namespace qpe::experiment {

enum class Model { Vmf, Field };
enum class Format { Csv, Json };
enum class SweepAxis { None, Kappa, MBar, DeltaSq, Ms, Omega1Ratio };

const char* to_string(Model m);
const char* to_string(SweepAxis a);
const char* to_string(Format f);

// Grid given either as explicit values or generated (linspace/logspace).
struct Grid {
  std::vector<double> values;

  static Grid linspace(double start, double stop, std::size_t count);
  static Grid logspace(double start, double stop, std::size_t count);  // endpoints are values, not exponents
  bool strictly_monotone() const;
};

struct Fig2Options {
  std::vector<double> kappas{20.0, 50.0, 100.0};
  double phi = 0.5;
  std::vector<double> phis{0.5, 0.25};
  Grid inv_kappa = Grid::logspace(1e-3, 1e-1, 41);
};

struct Fig3Options {
  std::vector<double> gs{1.5, 2.5, 3.0};
  std::vector<double> delta_sqs{1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
  Grid inv_m_bar = Grid::logspace(1e-4, 3e-2, 61);
};

struct Fig4Options {
  std::vector<int> m_s{1, 2, 3, 5, 10};
  Grid inv_m_bar = Grid::logspace(3e-4, 3e-2, 41);
};

struct Fig5Options {
  std::vector<double> omega1_ratios{10.0, 50.0, 200.0};
  Grid inv_m_bar = Grid::logspace(3e-4, 3e-2, 61);
};

struct Fig7Options {
  std::vector<double> m_bars{200.0, 500.0, 1000.0};
  std::vector<double> gs{0.5, 1.5, 2.5};
};

struct SweetSpotOptions {
  double span = 8.0;        // scan m_bar0 / span .. m_bar0 * span
  std::size_t count = 73;
  double onset_factor = 1.2;
};

struct ExperimentConfig {
  Model model = Model::Field;
  VmfParams vmf{50.0, 0.5};
  FieldParams field{300.0, 2.5, 1.0, 1.0};
  double delta_sq = 1e-4;

  int m_s = 0;  // state-preparation cooling qubits (0: ideal probe)
  int m_m = 0;  // pointer cooling qubits (0: ideal measurement)
  thermo::ThermalEnv env;
  std::optional<double> xi_m;  // pointer-stage xi, defaults to env.xi

  bool measurement_cost = false;  // charge omega1/omega per round
  double extra_external_cost = 0.0;
  RoundCounting round_counting = RoundCounting::Effective;

  SweepAxis axis = SweepAxis::None;
  Grid grid;

  std::optional<std::size_t> n_max;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 0;  // > 0 adds a Monte-Carlo cross-check to sweep rows
  unsigned workers = 1;

  std::string output_path;
  Format format = Format::Csv;

  Fig2Options fig2;
  Fig3Options fig3;
  Fig4Options fig4;
  Fig5Options fig5;
  Fig7Options fig7;
  SweetSpotOptions sweet_spot;

  CorrectionSpec corrections() const { return CorrectionSpec{m_s, m_m, env.xi, xi_m}; }

  // External cost per round implied by the cooling and measurement settings.
  double external_cost() const;
};

ExperimentConfig default_config();

// Fields absent from the document keep their defaults. Throws Error(Config)
// on unknown keys, wrong types or malformed grids.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config(const std::string& text);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
  std::string to_text() const;
  nlohmann::json to_json() const;
};

Diagnostics validate_config(const ExperimentConfig& cfg);

// Throws Error(Config) listing every error when the config is invalid.
void require_valid(const ExperimentConfig& cfg);

}  // namespace qpe::experiment
