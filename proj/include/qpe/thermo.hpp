#pragma once

// Energetics of state preparation and measurement. Energies are in units of
// the field's photon energy (hbar omega = 1).

namespace qpe::thermo {

struct ThermalEnv {
  double xi = 0.2;            // k_B T0 / (hbar omega0)
  double omega0_ratio = 1.0;  // omega0 / omega, resonance by default
  double omega1_ratio = 1.0;  // omega1 / omega, pointer qubit

  void validate() const;
};

// Lowest temperature reachable by dynamic cooling of M qubits at T0.
double cooled_temperature(double t0, int m);

// Bloch-vector length gamma = tanh(M / (4 xi)) of a qubit cooled with M qubits.
double purity_gamma(int m, double xi);

// Thermodynamic-limit work per cooling qubit.
double work_per_qubit(const ThermalEnv& env);

// External cost per round of preparing the probe with M_s cooling qubits.
double state_prep_cost(const ThermalEnv& env, int m_s);

// Constant upper bound omega1/omega on the CNOT correlating cost.
double measurement_cost_bound(const ThermalEnv& env);

// Exact correlating cost [rho]_11 * omega1/omega for a probe with Bloch z-component s_z.
double measurement_cost_exact(const ThermalEnv& env, double s_z);

// Flip probability (1 - gamma) / 2 of a pointer cooled with M_m qubits.
double measurement_epsilon(int m_m, double xi);

}  // namespace qpe::thermo
