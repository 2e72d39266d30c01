#pragma once

// Run configuration, unit-suffixed quantity parsing and report emission.
//
// Config files are JSON objects. Physical quantities are strings with an
// explicit unit ("10 GHz", "300 aF", "11.1 ns", "0.22 aF/um"); frequencies
// are ordinary (not angular) and energies may be given as E/h in Hz units.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntcp/device.hpp"
#include "ntcp/integrator.hpp"
#include "ntcp/metrics.hpp"
#include "ntcp/protocol.hpp"
#include "ntcp/simulation.hpp"

namespace ntcp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Dimension { kFrequency, kEnergy, kTime, kCapacitance, kLength, kCapacitancePerLength, kVoltage, kTemperature };

/// SI value of "<number> <unit>". Frequencies come back in Hz, energies in
/// J (accepting Hz units as E/h, or eV / ueV).
double parse_quantity(const std::string& text, Dimension dim);

/// "<value> <unit>" in the canonical unit of `dim`, 17 significant digits.
std::string format_quantity(double value, Dimension dim);

struct ProtocolConfig {
  int m = 0;
  int k = 0;
  int n = 0;
  std::optional<double> rabi;          // rad/s
  std::optional<double> ac_amplitude;  // V, converted through the device
  DeriveOptions options;
};

struct SimulationConfig {
  int fock_dim = 10;
  Frame frame = Frame::kClosedForm;
  IntegratorConfig integrator;
  std::vector<CavitySpec> cavity_states{CavitySpec{}};
  double max_dimension = 1e5;
  bool keep_idle_coupling = false;
  bool truncation_check = true;
};

enum class OutputFormat { kCsv, kJson };

struct OutputConfig {
  OutputFormat format = OutputFormat::kCsv;
  std::string path;  // empty: standard output
};

enum class SweepParameter { kOmega, kM, kK, kFockDim, kPhaseError };

struct SweepAxis {
  SweepParameter parameter = SweepParameter::kOmega;
  std::vector<double> values;  // Omega in rad/s, others as plain numbers
};

struct RunConfig {
  DeviceParams device;
  ProtocolConfig protocol;
  SimulationConfig simulation;
  OutputConfig output;
  std::vector<SweepAxis> sweep;
};

/// Throws ConfigError on malformed JSON, unknown keys, missing fields or
/// bad units.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical JSON text; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

/// Rabi frequency implied by the protocol block.
double protocol_rabi(const RunConfig& config);
Derivation derive_from_config(const RunConfig& config);

SweepParameter parse_sweep_parameter(const std::string& name);
const char* to_string(SweepParameter p);
/// "Omega=500MHz,600MHz" or "k=0,1,2".
SweepAxis parse_sweep_axis(const std::string& text);

OutputFormat parse_format(const std::string& text);

/// Human-readable parameter table with the validity checks.
std::string derivation_table(const Derivation& d, const std::vector<ValidityCheck>& checks);
std::string derivation_json(const Derivation& d, const std::vector<ValidityCheck>& checks);
/// Per-step duration and per-qubit knobs.
std::string schedule_document(const PulseSchedule& schedule);

struct ReportRow {
  std::vector<std::pair<std::string, std::string>> axes;  // name, formatted value
  double fidelity = 0.0;
  double avg_gate_fidelity = 0.0;
  double leakage = 0.0;
  Epsilons eps;
  double tau_ns = 0.0;
  double total_ns = 0.0;
  double g_required_mhz = 0.0;
};

/// Columns: axes..., fidelity, avg_gate_fidelity, leakage, eps0, eps1, eps2,
/// tau_ns, total_ns, g_required_mhz.
std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows);

/// One row per cavity state plus the full report in JSON form.
std::vector<ReportRow> simulation_rows(const Derivation& d, const FidelityReport& report);
std::string simulation_json(const Derivation& d, const FidelityReport& report, Frame frame);

/// Fixed-format number used in every emitted file.
std::string format_number(double v);

}  // namespace ntcp
