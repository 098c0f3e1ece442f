#pragma once

// Quantum Fisher information of a probe after N repeated applications of a
// noisy gate, for N = 1..n_max.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpe/bloch.hpp"
#include "qpe/channels.hpp"

namespace qpe {

class QfiSeries {
 public:
  QfiSeries() = default;
  QfiSeries(std::string model, BlochVector s0, std::vector<double> values);

  const std::string& model() const { return model_; }
  const BlochVector& s0() const { return s0_; }
  std::span<const double> values() const { return values_; }
  std::size_t n_max() const { return values_.size(); }

  // F_N with the convention F_0 = 0.
  double at(std::size_t n) const;

  // N maximising F_N / N (smallest on ties).
  std::size_t argmax_per_step() const;

 private:
  std::string model_;
  BlochVector s0_;
  std::vector<double> values_;
};

// Propagates s_{k+1} = G s_k and ds_{k+1} = dG s_k + G ds_k from ds_0 = 0.
QfiSeries sequence_qfi(const ChannelWithDerivative& ch, const BlochVector& s0, std::size_t n_max,
                       std::string model = "custom");

// N^2 lambda^{2N-2} (lambda^2 + dlambda^2) for the phase-covariant vMF gate.
double sequence_qfi_approx_vmf(double lambda_perp, double dlambda_perp_dphi, std::size_t n);

// N^2 (1 - Delta/(2 m_bar))^{2N} for the coherent-field gate.
double sequence_qfi_approx_field(const FieldParams& p, std::size_t n);

// Step count estimates maximising F_N / N.
double n_opt_estimate_vmf(double lambda_perp);           // -1 / (2 ln lambda)
double n_opt_estimate_field(const FieldParams& p);       // m_bar / Delta
std::size_t default_n_max(double n_opt_estimate);        // max(64, ceil(4 n_opt))

struct CorrectionSpec {
  int m_s = 0;  // state-preparation cooling qubits, 0 = ideal
  int m_m = 0;  // measurement (pointer) cooling qubits, 0 = ideal
  double xi = 0.2;
  std::optional<double> xi_m;  // pointer-stage xi, defaults to xi

  void validate() const;
  double prep_factor() const;         // gamma_s^2
  double measurement_factor() const;  // 2 gamma_m - 1
  double factor() const { return prep_factor() * measurement_factor(); }
};

// Scales every F_N by gamma_s^2 (2 gamma_m - 1).
QfiSeries apply_corrections(const QfiSeries& series, const CorrectionSpec& c);

// Exact propagation from the thermal probe s0 = (0, 0, gamma_s).
QfiSeries prep_corrected_series_exact(const ChannelWithDerivative& ch, double gamma_s, std::size_t n_max);

}  // namespace qpe
