#include "qpe/fisher.hpp"

#include <algorithm>
#include <cmath>

#include "qpe/errors.hpp"
#include "qpe/thermo.hpp"

namespace qpe {

QfiSeries::QfiSeries(std::string model, BlochVector s0, std::vector<double> values)
    : model_(std::move(model)), s0_(s0), values_(std::move(values)) {
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) raise(ErrorKind::Invariant, "QFI values must be finite and nonnegative");
}

double QfiSeries::at(std::size_t n) const {
  if (n == 0) return 0.0;
  if (n > values_.size()) raise(ErrorKind::InputDomain, "step count beyond the computed series");
  return values_[n - 1];
}

std::size_t QfiSeries::argmax_per_step() const {
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k] / static_cast<double>(k + 1);
    if (v > best_val) {
      best_val = v;
      best = k + 1;
    }
  }
  return best;
}

QfiSeries sequence_qfi(const ChannelWithDerivative& ch, const BlochVector& s0, std::size_t n_max, std::string model) {
  if (n_max < 1) raise(ErrorKind::InputDomain, "n_max must be at least 1");
  const Mat3& g = ch.map.matrix();
  const Mat3& dg = ch.dmap;
  Vec3 s = s0.vec();
  Vec3 ds = Vec3::Zero();
  std::vector<double> values;
  values.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const Vec3 next_ds = dg * s + g * ds;
    s = g * s;
    ds = next_ds;
    // Rounding can leave |s| a hair above 1 for a unitary map.
    const Vec3 s_eval = s.norm() > 1.0 ? Vec3(s.normalized()) : s;
    values.push_back(qfi_bloch(s_eval, ds));
  }
  return QfiSeries(std::move(model), s0, std::move(values));
}

double sequence_qfi_approx_vmf(double lambda_perp, double dlambda_perp_dphi, std::size_t n) {
  if (!(lambda_perp > 0.0) || lambda_perp > 1.0 + 1e-12) raise(ErrorKind::InputDomain, "lambda_perp must lie in (0, 1]");
  const double nn = static_cast<double>(n);
  if (n == 0) return 0.0;
  return nn * nn * std::pow(lambda_perp, 2.0 * nn - 2.0) *
         (lambda_perp * lambda_perp + dlambda_perp_dphi * dlambda_perp_dphi);
}

double sequence_qfi_approx_field(const FieldParams& p, std::size_t n) {
  p.validate();
  const double nn = static_cast<double>(n);
  const double r = 1.0 - delta_of_g(p.g, p.k_m, p.k_theta) / (2.0 * p.m_bar);
  return nn * nn * std::pow(r, 2.0 * nn);
}

double n_opt_estimate_vmf(double lambda_perp) {
  if (!(lambda_perp > 0.0 && lambda_perp < 1.0)) raise(ErrorKind::InputDomain, "lambda_perp must lie in (0, 1)");
  return -1.0 / (2.0 * std::log(lambda_perp));
}

double n_opt_estimate_field(const FieldParams& p) {
  const double d = delta_of_g(p.g, p.k_m, p.k_theta);
  if (!(d > 0.0)) raise(ErrorKind::InputDomain, "Delta(g) vanishes: the gate is noiseless");
  return p.m_bar / d;
}

std::size_t default_n_max(double n_opt_estimate) {
  if (!std::isfinite(n_opt_estimate) || n_opt_estimate < 16.0) return 64;
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(4.0 * n_opt_estimate)));
}

void CorrectionSpec::validate() const {
  if (m_s < 0 || m_m < 0) raise(ErrorKind::InputDomain, "cooling qubit counts must be nonnegative");
  if (!(xi > 0.0)) raise(ErrorKind::InputDomain, "xi must be positive");
  if (xi_m && !(*xi_m > 0.0)) raise(ErrorKind::InputDomain, "pointer xi must be positive");
}

double CorrectionSpec::prep_factor() const {
  if (m_s == 0) return 1.0;
  const double g = thermo::purity_gamma(m_s, xi);
  return g * g;
}

double CorrectionSpec::measurement_factor() const {
  if (m_m == 0) return 1.0;
  return 2.0 * thermo::purity_gamma(m_m, xi_m.value_or(xi)) - 1.0;
}

QfiSeries apply_corrections(const QfiSeries& series, const CorrectionSpec& c) {
  c.validate();
  const double meas = c.measurement_factor();
  if (!(meas > 0.0))
    raise(ErrorKind::NonInformative, "measurement pointer is too hot: 2 gamma_m - 1 <= 0");
  const double f = c.prep_factor() * meas;
  std::vector<double> values(series.values().begin(), series.values().end());
  for (double& v : values) v *= f;
  return QfiSeries(series.model(), series.s0(), std::move(values));
}

QfiSeries prep_corrected_series_exact(const ChannelWithDerivative& ch, double gamma_s, std::size_t n_max) {
  if (!(gamma_s > 0.0) || gamma_s > 1.0) raise(ErrorKind::InputDomain, "gamma_s must lie in (0, 1]");
  return sequence_qfi(ch, BlochVector(0.0, 0.0, gamma_s), n_max, "thermal-probe");
}

}  // namespace qpe
