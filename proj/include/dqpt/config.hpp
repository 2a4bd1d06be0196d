#ifndef DQPT_CONFIG_HPP
#define DQPT_CONFIG_HPP

// Flat key-value experiment configuration shared by the config file format
// and the CLI flags. parse(emit(cfg)) reproduces cfg exactly; numeric values
// survive the round trip bit-for-bit.

#include <optional>
#include <string>

#include "dqpt/band_ssh.hpp"
#include "dqpt/quench_nonband.hpp"

namespace dqpt::cli {

enum class Mode { TwoLevel, Spin, Ssh };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& text);

struct ScenarioConfig {
  Mode mode = Mode::Spin;

  // non-band scenario
  double j = 0.5;  // two-level mode pins j = 1/2
  double omega0 = 1.0;
  std::string temp = "zero";  // "zero" | "inf" | positive number
  double theta0 = 0.0;
  double phi0 = 0.0;
  double theta = 1.5707963267948966;  // pi/2: default quench z -> x, parallel
  double phi = 0.0;
  std::optional<double> dot;  // overrides (theta, phi) to hit b0.b = dot

  // band scenario
  double mi = 0.5;
  double mf = 2.0;
  double j2 = 1.0;

  // grids
  double t_max = 12.0;
  int t_steps = 4000;
  int k_points = 4001;

  // outputs and misc
  std::string out;        // default derived from mode when empty
  std::string phase_map;  // PGP field CSV path; empty = not written
  unsigned long long seed = 42;
  int cases = 200;
  double rate_norm = 1.0;
};

/// Serializes every field as "key = value" lines in a fixed order.
std::string emit_config(const ScenarioConfig& cfg);

/// Parses emit_config output (or a hand-written file of the same grammar).
/// Unknown keys, bad values, and a missing mode produce diagnostics naming
/// the key. Validation matching the target scenario type is re-applied.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

/// Re-checks every physical constraint for the config's mode; throws
/// ValidationError naming the offending key.
void validate(const ScenarioConfig& cfg);

spin::Temperature temperature_from_string(const std::string& text);

/// Builds the scenario objects the physics modules consume.
nonband::SpinQuenchScenario make_spin_scenario(const ScenarioConfig& cfg);
band::BandQuenchScenario make_band_scenario(const ScenarioConfig& cfg);

}  // namespace dqpt::cli

#endif
