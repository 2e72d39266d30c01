#pragma once

// Three-step pulse schedule synthesis and its validity report.

#include <string>
#include <vector>

#include "ntcp/device.hpp"
#include "ntcp/hamiltonian.hpp"

namespace ntcp {

struct ProtocolParams {
  int m = 0;
  int k = 0;
  int n = 0;           // targets
  int spectators = 0;  // decoupled qubits after n + 1
  double cavity_omega = 0.0;
  double delta = 0.0;  // step (i), negative
  double delta_prime = 0.0;
  double tau = 0.0;
  double tau_prime = 0.0;
  double lambda = 0.0;  // g_used^2 / (4 |delta|)
  double omega0_step1 = 0.0;
  double omega0_step2 = 0.0;
  double drive_omega_step1 = 0.0;
  double drive_omega_step2 = 0.0;
  double rabi = 0.0;
  double charging_energy = 0.0;  // J, effective
  double ng1_dc_step3 = 0.5;
  double ng_dc_step3 = 0.5;
  double ez1_step3 = 0.0;  // J
  double ez_step3 = 0.0;   // J
  double g_required = 0.0;
  double g_device = 0.0;
  /// Coupling the schedule is built for: g_required unless the device value
  /// was requested, scaled by sqrt(1 + phase_error).
  double g_used = 0.0;
  double phase_error = 0.0;  // relative error injected on 8 lambda tau

  int total_qubits() const { return n + 1 + spectators; }
  double total_time() const { return 3.0 * tau; }
};

enum class Step3Decoupling {
  kCavityDetuned,  // cavity retuned away: qubit-cavity coupling switched off
  kDcVoltage,      // cavity left in place, qubits only detuned by their E_z
};

struct Step {
  std::string label;
  double duration = 0.0;
  std::vector<QubitKnobs> knobs;  // one row per qubit, 1..total_qubits
  bool cavity_detuned = false;
};

struct PulseSchedule {
  std::vector<Step> steps;  // always three
};

struct DeriveOptions {
  int spectators = 0;
  /// Build the schedule for device_coupling(p) instead of g_required.
  bool use_device_coupling = false;
  /// Relative error on 8 lambda tau, realised through g.
  double phase_error = 0.0;
  Step3Decoupling step3 = Step3Decoupling::kCavityDetuned;
};

struct Epsilons {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

struct ValidityReport {
  Epsilons eps;
  double ratio_omega_over_delta = 0.0;
  double ratio_omega_over_g = 0.0;
  double g_mismatch = 0.0;  // |g_device - g_required| / g_required
  double total_time = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double cavity_lifetime = 0.0;
  std::vector<RegimeCheck> regime;
};

struct Derivation {
  ProtocolParams params;
  PulseSchedule schedule;
  ValidityReport report;
};

/// Throws std::invalid_argument for m <= 2, k < 0, n < 2 or Omega <= 0 and
/// std::domain_error when a qubit frequency is outside the flux range.
Derivation derive(const DeviceParams& p, int m, int k, int n, double omega, const DeriveOptions& options = {});

/// hbar(Omega + g)/(4E_c), hbar(4 n lambda + Omega)/(8E_c), hbar lambda/(2E_c)
/// with g = device_coupling(p) and E_c = effective_charging_energy(p).
Epsilons epsilons(const DeviceParams& p, double omega, double lambda, int n);

enum class CheckLevel { kPass, kWarn, kFail };

struct ValidityThresholds {
  double ratio_warn = 5.0;  // "much larger" below this warns
  double ratio_fail = 1.0;
  double time_warn = 3.0;  // lifetime / total time
  double time_fail = 1.0;
  double eps_warn = 0.05;
  double eps_fail = 0.25;
  double g_mismatch_warn = 0.05;
};

struct ValidityCheck {
  std::string name;
  double value = 0.0;
  CheckLevel level = CheckLevel::kPass;
  std::string message;
};

std::vector<ValidityCheck> validate(const ProtocolParams& params, const ValidityReport& report,
                                    const ValidityThresholds& thresholds = {});

bool any_failed(const std::vector<ValidityCheck>& checks);
const char* to_string(CheckLevel level);

struct ScheduleHamiltonianOptions {
  /// Keep the coupling of decoupled spectators (for factorization checks).
  bool keep_idle_coupling = false;
};

/// Lab-frame Hamiltonians of the three steps. The coupling used is
/// params.g_used; step (iii) drops the cavity coupling when flagged detuned.
std::vector<TimeDependentHamiltonian> schedule_to_hamiltonians(const PulseSchedule& schedule,
                                                               const ProtocolParams& params, const DeviceParams& p,
                                                               const HilbertSpace& space,
                                                               const ScheduleHamiltonianOptions& options = {});

}  // namespace ntcp
