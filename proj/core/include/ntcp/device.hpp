#pragma once

// Charge-qubit and cavity hardware model. Maps the controllable knobs (flux,
// dc/ac gate voltage) and the device constants to Hamiltonian coefficients.
// All quantities are SI: F, J, V, m, s, rad/s.

#include <optional>
#include <string>
#include <vector>

namespace ntcp {

struct DeviceParams {
  double gate_capacitance = 0.0;        // C_g
  double junction_capacitance = 0.0;    // C_J0
  double josephson_energy = 0.0;        // E_J0
  double cavity_omega = 0.0;            // omega_c (rad/s)
  double cavity_length = 0.0;           // L
  double capacitance_per_length = 0.0;  // c_0 (F/m)
  double ac_amplitude = 0.0;            // V_0
  double quality_factor = 0.0;          // Q
  double t1 = 0.0;
  double t2 = 0.0;
  std::optional<double> gap;          // superconducting gap Delta (J)
  std::optional<double> temperature;  // K
  double dielectric_constant = 1.0;   // eps_e, recorded only

  /// Measured E_c; when absent the capacitance formula is used.
  std::optional<double> charging_energy_override;
  /// Measured coupling g (rad/s); when absent the vacuum-voltage formula is used.
  std::optional<double> coupling_override;
};

/// Throws std::invalid_argument if any capacitance, energy, frequency or
/// geometric constant is not strictly positive.
void validate(const DeviceParams& p);

struct QubitKnobs {
  double flux_ratio = 0.5;    // Phi / Phi_0
  double ng_dc = 0.5;         // C_g V_g^dc / (2e)
  double ac_amplitude = 0.0;  // V
  double ac_frequency = 0.0;  // rad/s
  double ac_phase = 0.0;      // rad

  friend bool operator==(const QubitKnobs&, const QubitKnobs&) = default;
};

/// Throws unless flux_ratio and ng_dc lie in [0, 1] and the amplitude is
/// nonnegative.
void validate(const QubitKnobs& k);

/// e^2 / (2 C_g + 4 C_J0), from the capacitances only.
double charging_energy(const DeviceParams& p);
/// Override if present, otherwise charging_energy(p).
double effective_charging_energy(const DeviceParams& p);

/// 2 E_J0 cos(pi Phi / Phi_0).
double josephson_energy(const DeviceParams& p, double flux_ratio);
/// Flux ratio in [0, 1/2] giving E_J(Phi) / hbar = omega0. Throws
/// std::domain_error when omega0 exceeds 2 E_J0 / hbar or is negative.
double flux_for_qubit_frequency(const DeviceParams& p, double omega0);

/// -2 E_c (1 - 2 n_g^dc).
double ez_energy(const DeviceParams& p, double ng_dc);
/// Inverse of ez_energy.
double ng_for_ez(const DeviceParams& p, double ez);

/// (hbar omega_c)^{1/2} (L c_0)^{-1/2}.
double vacuum_voltage(const DeviceParams& p);

/// 2 E_c C_g V / (hbar e): the qubit coupling produced by gate-voltage amplitude V.
double voltage_to_angular(const DeviceParams& p, double volts);
double angular_to_voltage(const DeviceParams& p, double rad_per_s);

/// g from the vacuum voltage, rad/s.
double coupling_g(const DeviceParams& p);
/// coupling_override if present, otherwise coupling_g(p).
double device_coupling(const DeviceParams& p);

/// Omega for the device's V_0, rad/s.
double rabi_omega(const DeviceParams& p);
double rabi_omega(const DeviceParams& p, double ac_amplitude);

/// Q / omega_c.
double cavity_lifetime(const DeviceParams& p);

/// Phi = Phi_0/2, n_g = 1/2, no ac drive.
QubitKnobs decoupled_knobs();
bool is_decoupled(const QubitKnobs& k, double tol = 1e-12);

struct RegimeCheck {
  std::string name;  // e.g. "gap/E_c"
  double ratio = 0.0;
  bool satisfied = false;
};

/// Delta >> E_c >> E_J0 >> k_B T with ">>" meaning ratio >= threshold. Only
/// pairs whose inputs are present are reported.
std::vector<RegimeCheck> charge_regime_report(const DeviceParams& p, double threshold = 3.0);

/// The qubit and cavity constants quoted for the five-target example.
DeviceParams example_device();

}  // namespace ntcp
