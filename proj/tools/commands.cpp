#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>

#include "ntcp/config.hpp"
#include "ntcp/metrics.hpp"
#include "ntcp/parallel.hpp"
#include "ntcp/simulation.hpp"
#include "ntcp/units.hpp"
#include "ntcp/verify.hpp"

namespace ntcp::cli {

namespace {

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

// Loads the config and applies command-line overrides. Returns nullopt
// after printing a diagnostic.
std::optional<RunConfig> load(const CommonFlags& flags) {
  try {
    RunConfig c = load_config(flags.config);
    if (flags.format) c.output.format = parse_format(*flags.format);
    if (flags.frame) c.simulation.frame = parse_frame(*flags.frame);
    if (!flags.out.empty()) c.output.path = flags.out;
    return c;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

FidelityReport simulate_report(const RunConfig& c, const Derivation& d, int fock_dim, bool truncation_check,
                               std::vector<CavitySpec> states) {
  const HilbertSpace space = protocol_space(d.params, fock_dim);
  if (static_cast<double>(space.dimension()) > c.simulation.max_dimension) {
    throw std::length_error("dimension " + std::to_string(space.dimension()) + " exceeds max_dimension " +
                            format_number(c.simulation.max_dimension));
  }
  SimulationSettings settings;
  settings.frame = c.simulation.frame;
  settings.integrator = c.simulation.integrator;
  settings.lab.keep_idle_coupling = c.simulation.keep_idle_coupling;
  SuiteOptions opts;
  opts.truncation_check = truncation_check;
  return cavity_insensitivity_suite(
      [&](const HilbertSpace& sp) { return simulate_propagator(d, c.device, sp, settings); },
      ideal_qubit_gate(d.params, space), space, states, opts);
}

struct GridPoint {
  std::vector<double> values;
};

std::vector<GridPoint> grid(const std::vector<SweepAxis>& axes) {
  std::vector<GridPoint> out{{}};
  for (const auto& axis : axes) {
    std::vector<double> sorted = axis.values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<GridPoint> next;
    for (const auto& p : out) {
      for (double v : sorted) {
        GridPoint q = p;
        q.values.push_back(v);
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::pair<std::string, std::string> axis_cell(SweepParameter p, double v) {
  switch (p) {
    case SweepParameter::kOmega:
      return {"Omega_mhz", format_number(units::hertz(v) * 1e-6)};
    case SweepParameter::kPhaseError:
      return {"phase_error", format_number(v)};
    default:
      return {to_string(p), std::to_string(static_cast<long>(v))};
  }
}

}  // namespace

int cmd_derive(const CommonFlags& flags, const std::string& schedule_path) {
  const auto config = load(flags);
  if (!config) return kExitParse;
  Derivation d;
  try {
    d = derive_from_config(*config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  const auto checks = validate(d.params, d.report);
  const std::string text =
      config->output.format == OutputFormat::kJson ? derivation_json(d, checks) : derivation_table(d, checks);
  if (!write_output(config->output.path, text)) return kExitRuntime;
  if (!schedule_path.empty() && !write_output(schedule_path, schedule_document(d.schedule))) return kExitRuntime;
  if (any_failed(checks)) {
    for (const auto& c : checks) {
      if (c.level == CheckLevel::kFail) std::cerr << "validation failed: " << c.message << "\n";
    }
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_simulate(const CommonFlags& flags) {
  const auto config = load(flags);
  if (!config) return kExitParse;
  Derivation d;
  try {
    d = derive_from_config(*config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  FidelityReport report;
  try {
    report = simulate_report(*config, d, config->simulation.fock_dim, config->simulation.truncation_check,
                             config->simulation.cavity_states);
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  const std::string text = config->output.format == OutputFormat::kJson
                               ? simulation_json(d, report, config->simulation.frame)
                               : rows_to_csv(simulation_rows(d, report));
  return write_output(config->output.path, text) ? kExitOk : kExitRuntime;
}

int cmd_sweep(const CommonFlags& flags, const std::vector<std::string>& axis_text) {
  auto config = load(flags);
  if (!config) return kExitParse;
  try {
    if (!axis_text.empty()) {
      config->sweep.clear();
      for (const auto& a : axis_text) config->sweep.push_back(parse_sweep_axis(a));
    }
    if (config->sweep.empty() || config->sweep.size() > 2) {
      throw std::invalid_argument("sweep needs one or two axes (--axis or sweep.axes)");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }

  const auto points = grid(config->sweep);
  std::vector<ReportRow> rows(points.size());
  std::vector<std::string> errors(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    RunConfig c = *config;
    int fock_dim = c.simulation.fock_dim;
    ReportRow& row = rows[i];
    for (std::size_t a = 0; a < c.sweep.size(); ++a) {
      const double v = points[i].values[a];
      row.axes.push_back(axis_cell(c.sweep[a].parameter, v));
      switch (c.sweep[a].parameter) {
        case SweepParameter::kOmega:
          c.protocol.rabi = v;
          c.protocol.ac_amplitude.reset();
          break;
        case SweepParameter::kM:
          c.protocol.m = static_cast<int>(v);
          break;
        case SweepParameter::kK:
          c.protocol.k = static_cast<int>(v);
          break;
        case SweepParameter::kFockDim:
          fock_dim = static_cast<int>(v);
          break;
        case SweepParameter::kPhaseError:
          c.protocol.options.phase_error = v;
          break;
      }
    }
    try {
      const Derivation d = derive_from_config(c);
      const FidelityReport r = simulate_report(c, d, fock_dim, false, {c.simulation.cavity_states.front()});
      row.fidelity = r.process_fidelity;
      row.avg_gate_fidelity = r.average_gate_fidelity;
      row.leakage = r.leakage;
      row.eps = d.report.eps;
      row.tau_ns = d.params.tau * 1e9;
      row.total_ns = d.params.total_time() * 1e9;
      row.g_required_mhz = units::hertz(d.params.g_required) * 1e-6;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  bool failed = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!errors[i].empty()) {
      std::string where;
      for (const auto& [name, value] : rows[i].axes) where += name + "=" + value + " ";
      std::cerr << "error at " << where << ": " << errors[i] << "\n";
      failed = true;
    }
  }
  if (failed) return kExitValidation;
  const std::string text =
      config->output.format == OutputFormat::kJson ? rows_to_json(rows) : rows_to_csv(rows);
  return write_output(config->output.path, text) ? kExitOk : kExitRuntime;
}

int cmd_verify(const CommonFlags& flags, std::optional<double> tolerance) {
  VerifyOptions options;
  if (tolerance) {
    if (!(*tolerance > 0.0)) {
      std::cerr << "error: --tolerance must be positive\n";
      return kExitParse;
    }
    options.tolerance = *tolerance;
  }
  const auto results = run_verification(options);
  if (!write_output(flags.out, format_results(results))) return kExitRuntime;
  return all_passed(results) ? kExitOk : kExitValidation;
}

}  // namespace ntcp::cli
