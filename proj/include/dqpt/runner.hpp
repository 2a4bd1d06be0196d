#ifndef DQPT_RUNNER_HPP
#define DQPT_RUNNER_HPP

// Experiment orchestration behind the CLI subcommands: run scenarios, match
// detected events against predictions, and emit CSV/JSON artifacts.

#include <optional>

#include "dqpt/config.hpp"
#include "dqpt/csv.hpp"
#include "dqpt/report.hpp"

namespace dqpt::cli {

struct SpinRunOutput {
  nonband::PhaseTrace trace;
  RunReport report;
};

/// Runs a two-level/spin scenario over its time grid.
SpinRunOutput run_spin(const ScenarioConfig& cfg);

struct SshRunOutput {
  band::DtopTrace trace;
  std::optional<band::PgpField> field;  // present when cfg.phase_map is set
  RunReport report;
};

/// Runs an SSH band scenario: DTOP trace, optional PGP field, report.
SshRunOutput run_ssh(const ScenarioConfig& cfg);

/// Deterministic seeded cross-validation: closed forms against matrix
/// oracles (non-band and band), conjugation identities, Chebyshev roots.
/// status == "fail" when any residual exceeds 1e-9.
RunReport run_verify(unsigned long long seed, int cases);

inline constexpr double kVerifyThreshold = 1e-9;

/// Predicted critical times (and momenta in ssh mode) without evolving.
RunReport run_critical(const ScenarioConfig& cfg);

// CSV schemas, stable contracts: see README.
io::CsvTable phase_trace_csv(const nonband::PhaseTrace& trace);
io::CsvTable dtop_trace_csv(const band::DtopTrace& trace);
io::CsvTable pgp_field_csv(const band::PgpField& field);

nonband::PhaseTrace phase_trace_from_csv(const io::CsvTable& table);

/// Default trace output path for a mode ("phase_trace.csv" / "dtop_trace.csv").
std::string default_out_path(Mode mode);

nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg);

}  // namespace dqpt::cli

#endif
