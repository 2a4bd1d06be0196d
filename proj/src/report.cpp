#include "dqpt/report.hpp"

#include <fstream>

#include "dqpt/errors.hpp"

namespace dqpt::cli {

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["status"] = status;
  j["scenario"] = scenario;
  j["predictions"] = predictions;
  j["jump_events"] = jump_events;
  j["checks"] = checks;
  j["warnings"] = warnings;
  return j;
}

std::string RunReport::to_string() const { return to_json().dump(2) + "\n"; }

void write_report(const std::string& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_report: cannot open '" + path + "'");
  out << report.to_string();
  if (!out) throw ValidationError("write_report: write to '" + path + "' failed");
}

}  // namespace dqpt::cli
