#include "qpe/thermo.hpp"

#include <cmath>
#include <string>

#include "qpe/errors.hpp"

namespace qpe::thermo {

void ThermalEnv::validate() const {
  if (!(xi > 0.0) || !std::isfinite(xi)) raise(ErrorKind::InputDomain, "xi must be positive");
  if (!(omega0_ratio > 0.0)) raise(ErrorKind::InputDomain, "omega0/omega must be positive");
  if (!(omega1_ratio > 0.0)) raise(ErrorKind::InputDomain, "omega1/omega must be positive");
}

double cooled_temperature(double t0, int m) {
  if (m < 1) raise(ErrorKind::InputDomain, "dynamic cooling needs at least one qubit");
  if (!(t0 > 0.0)) raise(ErrorKind::InputDomain, "T0 must be positive");
  return 2.0 * t0 / m;
}

double purity_gamma(int m, double xi) {
  if (m < 1) raise(ErrorKind::InputDomain, "dynamic cooling needs at least one qubit");
  if (!(xi > 0.0)) raise(ErrorKind::InputDomain, "xi must be positive");
  return std::tanh(m / (4.0 * xi));
}

double work_per_qubit(const ThermalEnv& env) {
  env.validate();
  const double inv = 1.0 / env.xi;
  // tanh(1/(2 xi)) / (e^{1/xi} + 1), written to stay finite as xi -> 0.
  const double boltzmann = std::exp(-inv);
  return env.omega0_ratio / 2.0 * std::tanh(0.5 * inv) * boltzmann / (1.0 + boltzmann);
}

double state_prep_cost(const ThermalEnv& env, int m_s) {
  if (m_s < 1) raise(ErrorKind::InputDomain, "state preparation needs at least one cooling qubit");
  return work_per_qubit(env) * m_s;
}

double measurement_cost_bound(const ThermalEnv& env) {
  env.validate();
  return env.omega1_ratio;
}

double measurement_cost_exact(const ThermalEnv& env, double s_z) {
  env.validate();
  // [rho]_11 = (1 - s_z) / 2 is the excited-state population.
  return (1.0 - s_z) / 2.0 * env.omega1_ratio;
}

double measurement_epsilon(int m_m, double xi) { return (1.0 - purity_gamma(m_m, xi)) / 2.0; }

}  // namespace qpe::thermo
