#include "ntcp/device.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ntcp/units.hpp"

namespace ntcp {

using namespace units;

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("device parameter ") + name + " must be positive");
  }
}

}  // namespace

void validate(const DeviceParams& p) {
  require_positive(p.gate_capacitance, "C_g");
  require_positive(p.junction_capacitance, "C_J0");
  require_positive(p.josephson_energy, "E_J0");
  require_positive(p.cavity_omega, "omega_c");
  require_positive(p.cavity_length, "L");
  require_positive(p.capacitance_per_length, "c0");
  if (p.ac_amplitude < 0.0) throw std::invalid_argument("device parameter V0 must be nonnegative");
  if (p.quality_factor < 0.0) throw std::invalid_argument("device parameter Q must be nonnegative");
  if (p.charging_energy_override) require_positive(*p.charging_energy_override, "E_c");
  if (p.coupling_override) require_positive(*p.coupling_override, "g");
  if (p.gap) require_positive(*p.gap, "Delta");
  if (p.temperature) require_positive(*p.temperature, "T");
}

void validate(const QubitKnobs& k) {
  if (k.flux_ratio < 0.0 || k.flux_ratio > 1.0) throw std::invalid_argument("flux_ratio must lie in [0, 1]");
  if (k.ng_dc < 0.0 || k.ng_dc > 1.0) throw std::invalid_argument("ng_dc must lie in [0, 1]");
  if (k.ac_amplitude < 0.0) throw std::invalid_argument("ac amplitude must be nonnegative");
}

double charging_energy(const DeviceParams& p) {
  return kElectronCharge * kElectronCharge / (2.0 * p.gate_capacitance + 4.0 * p.junction_capacitance);
}

double effective_charging_energy(const DeviceParams& p) {
  return p.charging_energy_override.value_or(charging_energy(p));
}

double josephson_energy(const DeviceParams& p, double flux_ratio) {
  // cos(pi/2) is 6e-17 in floating point; the decoupling point must be exact.
  if (flux_ratio == 0.5) return 0.0;
  return 2.0 * p.josephson_energy * std::cos(std::numbers::pi * flux_ratio);
}

double flux_for_qubit_frequency(const DeviceParams& p, double omega0) {
  const double max_omega = energy_to_angular(2.0 * p.josephson_energy);
  if (omega0 < 0.0 || omega0 > max_omega) {
    throw std::domain_error("qubit frequency " + std::to_string(hertz(omega0) * 1e-9) +
                            " GHz is outside the tunable range [0, 2 E_J0 / h = " +
                            std::to_string(hertz(max_omega) * 1e-9) + " GHz]");
  }
  if (omega0 == 0.0) return 0.5;
  return std::acos(omega0 / max_omega) / std::numbers::pi;
}

double ez_energy(const DeviceParams& p, double ng_dc) {
  return -2.0 * effective_charging_energy(p) * (1.0 - 2.0 * ng_dc);
}

double ng_for_ez(const DeviceParams& p, double ez) { return 0.5 + ez / (4.0 * effective_charging_energy(p)); }

double vacuum_voltage(const DeviceParams& p) {
  return std::sqrt(kHbar * p.cavity_omega / (p.cavity_length * p.capacitance_per_length));
}

double voltage_to_angular(const DeviceParams& p, double volts) {
  return 2.0 * effective_charging_energy(p) * p.gate_capacitance * volts / (kHbar * kElectronCharge);
}

double angular_to_voltage(const DeviceParams& p, double rad_per_s) {
  return rad_per_s * kHbar * kElectronCharge / (2.0 * effective_charging_energy(p) * p.gate_capacitance);
}

double coupling_g(const DeviceParams& p) { return voltage_to_angular(p, vacuum_voltage(p)); }

double device_coupling(const DeviceParams& p) { return p.coupling_override.value_or(coupling_g(p)); }

double rabi_omega(const DeviceParams& p) { return rabi_omega(p, p.ac_amplitude); }

double rabi_omega(const DeviceParams& p, double ac_amplitude) {
  if (ac_amplitude < 0.0) throw std::invalid_argument("ac amplitude must be nonnegative");
  return voltage_to_angular(p, ac_amplitude);
}

double cavity_lifetime(const DeviceParams& p) { return p.quality_factor / p.cavity_omega; }

QubitKnobs decoupled_knobs() { return QubitKnobs{0.5, 0.5, 0.0, 0.0, 0.0}; }

bool is_decoupled(const QubitKnobs& k, double tol) {
  return std::abs(k.flux_ratio - 0.5) <= tol && std::abs(k.ng_dc - 0.5) <= tol && k.ac_amplitude <= tol;
}

std::vector<RegimeCheck> charge_regime_report(const DeviceParams& p, double threshold) {
  std::vector<RegimeCheck> out;
  const double ec = effective_charging_energy(p);
  auto add = [&](std::string name, double ratio) { out.push_back({std::move(name), ratio, ratio >= threshold}); };
  if (p.gap) add("gap/E_c", *p.gap / ec);
  add("E_c/E_J0", ec / p.josephson_energy);
  if (p.temperature) add("E_J0/k_BT", p.josephson_energy / (kBoltzmann * *p.temperature));
  return out;
}

DeviceParams example_device() {
  DeviceParams p;
  p.gate_capacitance = 1e-18;
  p.junction_capacitance = 300e-18;
  p.charging_energy_override = energy_from_hz(32e9);
  p.josephson_energy = energy_from_hz(5e9);
  p.cavity_omega = angular(10e9);
  p.cavity_length = 12e-3;
  p.capacitance_per_length = 0.22e-18 / 1e-6;
  p.quality_factor = 1e4;
  p.t1 = 7.3e-6;
  p.t2 = 500e-9;
  p.dielectric_constant = 6.3;
  p.coupling_override = angular(100e6);
  p.ac_amplitude = angular_to_voltage(p, angular(600e6));
  return p;
}

}  // namespace ntcp
