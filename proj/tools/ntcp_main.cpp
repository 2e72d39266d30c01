#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace ntcp::cli;
  CLI::App app{"Multi-target controlled-phase gate: derivation, simulation and verification"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string schedule_path;
  std::vector<std::string> axes;
  std::optional<double> tolerance;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", flags.config, "run configuration (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--out", flags.out, "output path (default: config output.path, else stdout)");
    cmd->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", flags.seed, "reserved; all paths are deterministic");
  };

  auto* derive = app.add_subcommand("derive", "derive the pulse schedule and validity report");
  add_common(derive, true);
  derive->add_option("--schedule", schedule_path, "write the schedule document to this path");

  auto* simulate = app.add_subcommand("simulate", "simulate the gate and report fidelities");
  add_common(simulate, true);
  simulate->add_option("--frame", flags.frame, "closed-form, dressed, interaction or lab")
      ->check(CLI::IsMember({"closed-form", "dressed", "interaction", "lab"}));

  auto* sweep = app.add_subcommand("sweep", "evaluate a one- or two-axis parameter grid");
  add_common(sweep, true);
  sweep->add_option("--frame", flags.frame, "closed-form, dressed, interaction or lab")
      ->check(CLI::IsMember({"closed-form", "dressed", "interaction", "lab"}));
  sweep->add_option("--axis", axes, "name=v1,v2,... over Omega, m, k, fock_dim, phase_error (up to two)");

  auto* verify = app.add_subcommand("verify", "run the oracle-equivalence suite");
  add_common(verify, false);
  verify->add_option("--tolerance", tolerance, "replace every error bound with this value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (*derive) return cmd_derive(flags, schedule_path);
  if (*simulate) return cmd_simulate(flags);
  if (*sweep) return cmd_sweep(flags, axes);
  return cmd_verify(flags, tolerance);
}
