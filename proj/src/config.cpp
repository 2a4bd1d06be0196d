#include "dqpt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dqpt/csv.hpp"

namespace dqpt::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
}

unsigned long long parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "' expects an unsigned integer, got '" +
                          value + "'");
  }
}

double parse_num(const std::string& key, const std::string& value) {
  try {
    return io::parse_double(value);
  } catch (const ValidationError&) {
    throw ValidationError("config: key '" + key + "' expects a number, got '" + value + "'");
  }
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::TwoLevel: return "two-level";
    case Mode::Spin: return "spin";
    case Mode::Ssh: return "ssh";
  }
  return "spin";
}

Mode mode_from_string(const std::string& text) {
  if (text == "two-level") return Mode::TwoLevel;
  if (text == "spin") return Mode::Spin;
  if (text == "ssh") return Mode::Ssh;
  throw ValidationError("config: mode must be one of two-level, spin, ssh; got '" + text + "'");
}

std::string emit_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double x) { return io::format_double(x); };
  out << "mode = " << to_string(cfg.mode) << '\n';
  out << "j = " << num(cfg.j) << '\n';
  out << "omega0 = " << num(cfg.omega0) << '\n';
  out << "temp = " << cfg.temp << '\n';
  out << "theta0 = " << num(cfg.theta0) << '\n';
  out << "phi0 = " << num(cfg.phi0) << '\n';
  out << "theta = " << num(cfg.theta) << '\n';
  out << "phi = " << num(cfg.phi) << '\n';
  if (cfg.dot) out << "dot = " << num(*cfg.dot) << '\n';
  out << "mi = " << num(cfg.mi) << '\n';
  out << "mf = " << num(cfg.mf) << '\n';
  out << "j2 = " << num(cfg.j2) << '\n';
  out << "t_max = " << num(cfg.t_max) << '\n';
  out << "t_steps = " << cfg.t_steps << '\n';
  out << "k_points = " << cfg.k_points << '\n';
  if (!cfg.out.empty()) out << "out = " << cfg.out << '\n';
  if (!cfg.phase_map.empty()) out << "phase_map = " << cfg.phase_map << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "cases = " << cfg.cases << '\n';
  out << "rate_norm = " << num(cfg.rate_norm) << '\n';
  return out.str();
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  bool mode_seen = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: line " + std::to_string(line_no) +
                            " is not of the form 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("config: line " + std::to_string(line_no) +
                            " has an empty key or value");

    if (key == "mode") {
      cfg.mode = mode_from_string(value);
      mode_seen = true;
    } else if (key == "j") {
      cfg.j = parse_num(key, value);
    } else if (key == "omega0") {
      cfg.omega0 = parse_num(key, value);
    } else if (key == "temp") {
      cfg.temp = value;
    } else if (key == "theta0") {
      cfg.theta0 = parse_num(key, value);
    } else if (key == "phi0") {
      cfg.phi0 = parse_num(key, value);
    } else if (key == "theta") {
      cfg.theta = parse_num(key, value);
    } else if (key == "phi") {
      cfg.phi = parse_num(key, value);
    } else if (key == "dot") {
      cfg.dot = parse_num(key, value);
    } else if (key == "mi") {
      cfg.mi = parse_num(key, value);
    } else if (key == "mf") {
      cfg.mf = parse_num(key, value);
    } else if (key == "j2") {
      cfg.j2 = parse_num(key, value);
    } else if (key == "t_max") {
      cfg.t_max = parse_num(key, value);
    } else if (key == "t_steps") {
      cfg.t_steps = parse_int(key, value);
    } else if (key == "k_points") {
      cfg.k_points = parse_int(key, value);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "phase_map") {
      cfg.phase_map = value;
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, value);
    } else if (key == "cases") {
      cfg.cases = parse_int(key, value);
    } else if (key == "rate_norm") {
      cfg.rate_norm = parse_num(key, value);
    } else {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }
  if (!mode_seen)
    throw ValidationError("config: required key 'mode' is missing (two-level, spin, or ssh)");
  validate(cfg);
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

spin::Temperature temperature_from_string(const std::string& text) {
  if (text == "zero" || text == "0") return spin::Temperature::zero();
  if (text == "inf" || text == "infinite") return spin::Temperature::infinite();
  double value = 0.0;
  try {
    value = io::parse_double(text);
  } catch (const ValidationError&) {
    throw ValidationError("config: key 'temp' expects zero, inf, or a positive number; got '" +
                          text + "'");
  }
  if (!(value > 0.0))
    throw ValidationError("config: key 'temp' must be positive; got '" + text + "'");
  return spin::Temperature::finite(value);
}

void validate(const ScenarioConfig& cfg) {
  temperature_from_string(cfg.temp);
  if (!(cfg.omega0 > 0.0)) throw ValidationError("config: key 'omega0' must be positive");
  if (!(cfg.rate_norm > 0.0)) throw ValidationError("config: key 'rate_norm' must be positive");
  if (cfg.cases < 1) throw ValidationError("config: key 'cases' must be >= 1");
  if (!(cfg.t_max > 0.0)) throw ValidationError("config: key 't_max' must be positive");

  if (cfg.mode == Mode::Ssh) {
    if (!(cfg.j2 > 0.0)) throw ValidationError("config: key 'j2' must be positive");
    if (std::abs(std::abs(cfg.mi) - 1.0) < 1e-12)
      throw ValidationError("config: key 'mi' sits at a gap closing (|m| = 1)");
    if (std::abs(std::abs(cfg.mf) - 1.0) < 1e-12)
      throw ValidationError("config: key 'mf' sits at a gap closing (|m| = 1)");
    if (cfg.k_points < 3) throw ValidationError("config: key 'k_points' must be >= 3");
    if (cfg.t_steps < 3)
      throw ValidationError("config: key 't_steps' must be >= 3 in ssh mode");
    return;
  }

  const double twice_j = 2.0 * cfg.j;
  if (std::abs(twice_j - std::lround(twice_j)) > 1e-9 || std::lround(twice_j) < 1)
    throw ValidationError("config: key 'j' must be a positive multiple of 1/2");
  if (cfg.mode == Mode::TwoLevel && std::lround(twice_j) != 1)
    throw ValidationError("config: key 'j' must be 0.5 in two-level mode");
  if (cfg.t_steps < 1) throw ValidationError("config: key 't_steps' must be >= 1");
  const double pi = 3.14159265358979323846;
  if (!(cfg.theta0 >= 0.0 && cfg.theta0 <= pi))
    throw ValidationError("config: key 'theta0' must lie in [0, pi]");
  if (!(cfg.theta >= 0.0 && cfg.theta <= pi))
    throw ValidationError("config: key 'theta' must lie in [0, pi]");
  if (!(cfg.phi0 >= 0.0 && cfg.phi0 < 2.0 * pi))
    throw ValidationError("config: key 'phi0' must lie in [0, 2 pi)");
  if (!(cfg.phi >= 0.0 && cfg.phi < 2.0 * pi))
    throw ValidationError("config: key 'phi' must lie in [0, 2 pi)");
  if (cfg.dot && !(*cfg.dot >= -1.0 && *cfg.dot <= 1.0))
    throw ValidationError("config: key 'dot' must lie in [-1, 1]");
}

nonband::SpinQuenchScenario make_spin_scenario(const ScenarioConfig& cfg) {
  if (cfg.mode == Mode::Ssh)
    throw ValidationError("make_spin_scenario: config mode is ssh");
  validate(cfg);
  const spin::SpinJ s(static_cast<int>(std::lround(2.0 * cfg.j)));
  const spin::SpinDirection dir0(cfg.theta0, cfg.phi0);
  spin::SpinDirection dir1(cfg.theta, cfg.phi);
  if (cfg.dot) dir1 = nonband::direction_with_dot(dir0, *cfg.dot);
  return nonband::SpinQuenchScenario(s, cfg.omega0, temperature_from_string(cfg.temp),
                                     dir0, dir1);
}

band::BandQuenchScenario make_band_scenario(const ScenarioConfig& cfg) {
  if (cfg.mode != Mode::Ssh)
    throw ValidationError("make_band_scenario: config mode is not ssh");
  validate(cfg);
  return band::BandQuenchScenario(
      band::ssh_bloch(cfg.mi, cfg.j2), band::ssh_bloch(cfg.mf, cfg.j2),
      temperature_from_string(cfg.temp), band::uniform_k_grid(cfg.k_points),
      band::uniform_t_grid(cfg.t_max, cfg.t_steps));
}

}  // namespace dqpt::cli
