#include "ntcp/protocol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ntcp/units.hpp"

namespace ntcp {

using units::kHbar;
using units::kTwoPi;

namespace {

QubitKnobs driven(const DeviceParams& p, double omega0, double rabi, double phase) {
  QubitKnobs k;
  k.flux_ratio = flux_for_qubit_frequency(p, omega0);
  k.ng_dc = 0.5;
  k.ac_amplitude = angular_to_voltage(p, rabi);
  k.ac_frequency = 2.0 * omega0;
  k.ac_phase = phase;
  return k;
}

QubitKnobs biased(double ng) {
  QubitKnobs k = decoupled_knobs();
  k.ng_dc = ng;
  return k;
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

Epsilons epsilons(const DeviceParams& p, double omega, double lambda, int n) {
  const double ec = effective_charging_energy(p);
  const double g = device_coupling(p);
  return {kHbar * (omega + g) / (4.0 * ec), kHbar * (4.0 * n * lambda + omega) / (8.0 * ec),
          kHbar * lambda / (2.0 * ec)};
}

Derivation derive(const DeviceParams& p, int m, int k, int n, double omega, const DeriveOptions& options) {
  validate(p);
  if (m <= 2) throw std::invalid_argument("m must exceed 2 (got " + std::to_string(m) + ")");
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (n < 2) throw std::invalid_argument("n must be at least 2 targets");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("Omega must be positive");
  if (options.spectators < 0) throw std::invalid_argument("spectator count must be nonnegative");
  if (!(options.phase_error > -1.0)) throw std::invalid_argument("phase error must exceed -1");

  Derivation out;
  ProtocolParams& q = out.params;
  q.m = m;
  q.k = k;
  q.n = n;
  q.spectators = options.spectators;
  q.cavity_omega = p.cavity_omega;
  q.delta = -p.cavity_omega / (m - 1);
  q.delta_prime = p.cavity_omega / (m - 1);
  q.tau = kTwoPi / std::abs(q.delta);
  q.tau_prime = kTwoPi / q.delta_prime;
  q.omega0_step1 = 0.5 * m * p.cavity_omega / (m - 1);
  q.omega0_step2 = 0.5 * (m - 2) * p.cavity_omega / (m - 1);
  q.drive_omega_step1 = 2.0 * q.omega0_step1;
  q.drive_omega_step2 = 2.0 * q.omega0_step2;
  q.rabi = omega;
  q.charging_energy = effective_charging_energy(p);
  q.g_required = std::abs(q.delta) * std::sqrt(2.0 * k + 1.0) / 2.0;
  q.g_device = device_coupling(p);
  q.phase_error = options.phase_error;
  const double g_base = options.use_device_coupling ? q.g_device : q.g_required;
  q.g_used = g_base * std::sqrt(1.0 + options.phase_error);
  q.lambda = q.g_used * q.g_used / (4.0 * std::abs(q.delta));
  q.ng1_dc_step3 = 0.5 - kHbar * (4.0 * n * q.lambda + omega) / (8.0 * q.charging_energy);
  q.ng_dc_step3 = 0.5 - kHbar * q.lambda / (2.0 * q.charging_energy);
  q.ez1_step3 = ez_energy(p, q.ng1_dc_step3);
  q.ez_step3 = ez_energy(p, q.ng_dc_step3);
  if (q.ng1_dc_step3 < 0.0 || q.ng_dc_step3 < 0.0) {
    throw std::domain_error("step (iii) gate charge offset leaves [0, 1]; E_c too small for this lambda and Omega");
  }

  const int total = q.total_qubits();
  Step s1{"step1", q.tau, std::vector<QubitKnobs>(static_cast<std::size_t>(total), decoupled_knobs()), false};
  Step s2{"step2", q.tau_prime, s1.knobs, false};
  Step s3{"step3", q.tau, s1.knobs, options.step3 == Step3Decoupling::kCavityDetuned};
  for (int j = 1; j <= n + 1; ++j) {
    const auto row = static_cast<std::size_t>(j - 1);
    s1.knobs[row] = driven(p, q.omega0_step1, omega, 0.0);
    s2.knobs[row] = j == 1 ? decoupled_knobs() : driven(p, q.omega0_step2, omega, std::numbers::pi);
    s3.knobs[row] = biased(j == 1 ? q.ng1_dc_step3 : q.ng_dc_step3);
  }
  out.schedule.steps = {std::move(s1), std::move(s2), std::move(s3)};

  ValidityReport& r = out.report;
  const double lambda_device = q.g_device * q.g_device / (4.0 * std::abs(q.delta));
  r.eps = epsilons(p, omega, lambda_device, n);
  r.ratio_omega_over_delta = omega / std::abs(q.delta);
  r.ratio_omega_over_g = omega / std::max(q.g_used, q.g_device);
  r.g_mismatch = std::abs(q.g_device - q.g_required) / q.g_required;
  r.total_time = q.total_time();
  r.t1 = p.t1;
  r.t2 = p.t2;
  r.cavity_lifetime = cavity_lifetime(p);
  r.regime = charge_regime_report(p);
  return out;
}

std::vector<ValidityCheck> validate(const ProtocolParams& params, const ValidityReport& report,
                                    const ValidityThresholds& th) {
  std::vector<ValidityCheck> out;
  auto lower_bound_check = [&](std::string name, double value, double warn, double fail) {
    CheckLevel level = value >= warn ? CheckLevel::kPass : value >= fail ? CheckLevel::kWarn : CheckLevel::kFail;
    std::string msg = name + " = " + format_value(value) + " (warn below " + format_value(warn) + ", fail below " +
                      format_value(fail) + ")";
    out.push_back({std::move(name), value, level, std::move(msg)});
  };
  auto upper_bound_check = [&](std::string name, double value, double warn, double fail) {
    CheckLevel level = value <= warn ? CheckLevel::kPass : value <= fail ? CheckLevel::kWarn : CheckLevel::kFail;
    std::string msg = name + " = " + format_value(value) + " (warn above " + format_value(warn) + ", fail above " +
                      format_value(fail) + ")";
    out.push_back({std::move(name), value, level, std::move(msg)});
  };

  lower_bound_check("Omega/|delta|", report.ratio_omega_over_delta, th.ratio_warn, th.ratio_fail);
  lower_bound_check("Omega/g", report.ratio_omega_over_g, th.ratio_warn, th.ratio_fail);
  upper_bound_check("eps0", report.eps.eps0, th.eps_warn, th.eps_fail);
  upper_bound_check("eps1", report.eps.eps1, th.eps_warn, th.eps_fail);
  upper_bound_check("eps2", report.eps.eps2, th.eps_warn, th.eps_fail);
  const double t = params.total_time();
  if (report.t2 > 0.0) lower_bound_check("T2/t_op", report.t2 / t, th.time_warn, th.time_fail);
  if (report.t1 > 0.0) lower_bound_check("T1/t_op", report.t1 / t, th.time_warn, th.time_fail);
  if (report.cavity_lifetime > 0.0) {
    lower_bound_check("kappa^-1/t_op", report.cavity_lifetime / t, th.time_warn, th.time_fail);
  }
  {
    const CheckLevel level = report.g_mismatch <= th.g_mismatch_warn ? CheckLevel::kPass : CheckLevel::kWarn;
    out.push_back({"g_mismatch", report.g_mismatch, level,
                   "device g differs from g_required by " + format_value(100.0 * report.g_mismatch) + "%"});
  }
  for (const auto& rc : report.regime) {
    out.push_back({rc.name, rc.ratio, rc.satisfied ? CheckLevel::kPass : CheckLevel::kWarn,
                   rc.name + " = " + format_value(rc.ratio)});
  }
  return out;
}

bool any_failed(const std::vector<ValidityCheck>& checks) {
  for (const auto& c : checks) {
    if (c.level == CheckLevel::kFail) return true;
  }
  return false;
}

const char* to_string(CheckLevel level) {
  switch (level) {
    case CheckLevel::kPass:
      return "pass";
    case CheckLevel::kWarn:
      return "warn";
    case CheckLevel::kFail:
      return "fail";
  }
  return "?";
}

std::vector<TimeDependentHamiltonian> schedule_to_hamiltonians(const PulseSchedule& schedule,
                                                               const ProtocolParams& params, const DeviceParams& p,
                                                               const HilbertSpace& space,
                                                               const ScheduleHamiltonianOptions& options) {
  if (schedule.steps.size() != 3) throw std::invalid_argument("schedule must have three steps");
  std::vector<TimeDependentHamiltonian> out;
  out.reserve(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const Step& step = schedule.steps[i];
    if (static_cast<int>(step.knobs.size()) != space.n_qubits()) {
      throw std::invalid_argument(step.label + ": knob rows do not match the qubit count of the space");
    }
    for (const auto& k : step.knobs) validate(k);
    if (i == 2) {
      for (const auto& k : step.knobs) {
        if (k.ac_amplitude != 0.0 || k.flux_ratio != 0.5) {
          throw std::invalid_argument("step3: ac drives must be off and flux at Phi_0/2");
        }
      }
    }
    LabFrameOptions lab;
    lab.coupling = params.g_used;
    lab.cavity_coupled = !step.cavity_detuned;
    lab.keep_idle_coupling = options.keep_idle_coupling;
    out.push_back(full_hamiltonian(p, step.knobs, space, lab));
  }
  return out;
}

}  // namespace ntcp
