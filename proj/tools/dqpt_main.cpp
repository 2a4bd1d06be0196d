// dqpt: Loschmidt-echo quench diagnostics for spin-j ensembles and SSH
// bands at arbitrary temperature. Subcommands: spin, ssh, verify, critical.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "dqpt/runner.hpp"

namespace {

using dqpt::cli::Mode;
using dqpt::cli::ScenarioConfig;

struct FlagSet {
  std::string config_path;
  std::string mode;
  std::string temp;
  double j = 0.0, omega0 = 0.0, theta0 = 0.0, phi0 = 0.0, theta = 0.0, phi = 0.0;
  double dot = 0.0, mi = 0.0, mf = 0.0, j2 = 0.0, t_max = 0.0, rate_norm = 0.0;
  int t_steps = 0, k_points = 0, cases = 0;
  unsigned long long seed = 0;
  std::string out, phase_map;
};

// Registers the shared flag vocabulary on a subcommand; flags override
// config-file values, which override the defaults.
void add_scenario_flags(CLI::App* cmd, FlagSet& flags) {
  cmd->add_option("--config", flags.config_path, "flat key = value config file");
  cmd->add_option("--mode", flags.mode, "two-level | spin | ssh");
  cmd->add_option("--j", flags.j, "spin quantum number (multiple of 1/2)");
  cmd->add_option("--temp", flags.temp, "temperature: zero | inf | positive number");
  cmd->add_option("--omega0", flags.omega0, "Larmor frequency");
  cmd->add_option("--theta0", flags.theta0, "initial field polar angle");
  cmd->add_option("--phi0", flags.phi0, "initial field azimuthal angle");
  cmd->add_option("--theta", flags.theta, "final field polar angle");
  cmd->add_option("--phi", flags.phi, "final field azimuthal angle");
  cmd->add_option("--dot", flags.dot, "target overlap b0.b (overrides theta/phi)");
  cmd->add_option("--mi", flags.mi, "initial SSH ratio J1/J2");
  cmd->add_option("--mf", flags.mf, "final SSH ratio J1/J2");
  cmd->add_option("--j2", flags.j2, "SSH energy scale J2");
  cmd->add_option("--t-max", flags.t_max, "time grid upper end");
  cmd->add_option("--t-steps", flags.t_steps, "time grid samples");
  cmd->add_option("--k-points", flags.k_points, "momentum grid samples");
  cmd->add_option("--out", flags.out, "trace CSV / report path");
  cmd->add_option("--phase-map", flags.phase_map, "PGP field CSV path (ssh)");
  cmd->add_option("--seed", flags.seed, "verification seed");
  cmd->add_option("--cases", flags.cases, "verification case count");
  cmd->add_option("--rate-norm", flags.rate_norm, "rate-function normalization L");
}

ScenarioConfig build_config(const CLI::App* cmd, const FlagSet& flags, Mode default_mode) {
  ScenarioConfig cfg;
  cfg.mode = default_mode;
  if (cmd->count("--config") > 0) cfg = dqpt::cli::parse_config_file(flags.config_path);
  if (cmd->count("--mode") > 0) cfg.mode = dqpt::cli::mode_from_string(flags.mode);
  if (cmd->count("--j") > 0) cfg.j = flags.j;
  if (cmd->count("--temp") > 0) cfg.temp = flags.temp;
  if (cmd->count("--omega0") > 0) cfg.omega0 = flags.omega0;
  if (cmd->count("--theta0") > 0) cfg.theta0 = flags.theta0;
  if (cmd->count("--phi0") > 0) cfg.phi0 = flags.phi0;
  if (cmd->count("--theta") > 0) cfg.theta = flags.theta;
  if (cmd->count("--phi") > 0) cfg.phi = flags.phi;
  if (cmd->count("--dot") > 0) cfg.dot = flags.dot;
  if (cmd->count("--mi") > 0) cfg.mi = flags.mi;
  if (cmd->count("--mf") > 0) cfg.mf = flags.mf;
  if (cmd->count("--j2") > 0) cfg.j2 = flags.j2;
  if (cmd->count("--t-max") > 0) cfg.t_max = flags.t_max;
  if (cmd->count("--t-steps") > 0) cfg.t_steps = flags.t_steps;
  if (cmd->count("--k-points") > 0) cfg.k_points = flags.k_points;
  if (cmd->count("--out") > 0) cfg.out = flags.out;
  if (cmd->count("--phase-map") > 0) cfg.phase_map = flags.phase_map;
  if (cmd->count("--seed") > 0) cfg.seed = flags.seed;
  if (cmd->count("--cases") > 0) cfg.cases = flags.cases;
  if (cmd->count("--rate-norm") > 0) cfg.rate_norm = flags.rate_norm;
  dqpt::cli::validate(cfg);
  return cfg;
}

std::string report_path_for(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size()) + ".report.json";
  return out + ".report.json";
}

void finish(const dqpt::cli::RunReport& report) {
  std::cout << report.to_string();
  std::fprintf(stderr, "completed in %.3f s\n", report.duration_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loschmidt-echo quench diagnostics for spin ensembles and SSH bands"};
  app.require_subcommand(1);

  FlagSet flags;

  CLI::App* spin_cmd = app.add_subcommand("spin", "non-band quench: phase trace CSV + report");
  CLI::App* ssh_cmd = app.add_subcommand("ssh", "band quench: DTOP trace CSV + report");
  CLI::App* verify_cmd = app.add_subcommand("verify", "seeded closed-form vs oracle checks");
  CLI::App* critical_cmd = app.add_subcommand("critical", "predicted critical times/momenta");
  for (CLI::App* cmd : {spin_cmd, ssh_cmd, verify_cmd, critical_cmd})
    add_scenario_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // validation failure, per the documented exit-code contract
  }

  try {
    if (spin_cmd->parsed()) {
      const ScenarioConfig cfg = build_config(spin_cmd, flags, Mode::Spin);
      if (cfg.mode == Mode::Ssh)
        throw dqpt::ValidationError("spin subcommand: mode must be two-level or spin");
      auto result = dqpt::cli::run_spin(cfg);
      const std::string out = cfg.out.empty() ? dqpt::cli::default_out_path(cfg.mode) : cfg.out;
      dqpt::io::write_csv(out, dqpt::cli::phase_trace_csv(result.trace));
      dqpt::cli::write_report(report_path_for(out), result.report);
      finish(result.report);
    } else if (ssh_cmd->parsed()) {
      ScenarioConfig cfg = build_config(ssh_cmd, flags, Mode::Ssh);
      if (cfg.mode != Mode::Ssh)
        throw dqpt::ValidationError("ssh subcommand: mode must be ssh");
      auto result = dqpt::cli::run_ssh(cfg);
      const std::string out = cfg.out.empty() ? dqpt::cli::default_out_path(cfg.mode) : cfg.out;
      dqpt::io::write_csv(out, dqpt::cli::dtop_trace_csv(result.trace));
      if (result.field) dqpt::io::write_csv(cfg.phase_map, dqpt::cli::pgp_field_csv(*result.field));
      dqpt::cli::write_report(report_path_for(out), result.report);
      finish(result.report);
    } else if (verify_cmd->parsed()) {
      unsigned long long seed = 42;
      int cases = 200;
      if (verify_cmd->count("--seed") > 0) seed = flags.seed;
      if (verify_cmd->count("--cases") > 0) cases = flags.cases;
      const auto report = dqpt::cli::run_verify(seed, cases);
      const std::string out =
          verify_cmd->count("--out") > 0 ? flags.out : std::string("verify_report.json");
      dqpt::cli::write_report(out, report);
      finish(report);
      if (report.status != "ok") return 3;
    } else if (critical_cmd->parsed()) {
      const ScenarioConfig cfg = build_config(critical_cmd, flags, Mode::Spin);
      const auto report = dqpt::cli::run_critical(cfg);
      if (critical_cmd->count("--out") > 0) dqpt::cli::write_report(flags.out, report);
      finish(report);
    }
  } catch (const dqpt::ValidationError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  } catch (const dqpt::NumericalGuardError& err) {
    std::fprintf(stderr, "numerical guard: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
