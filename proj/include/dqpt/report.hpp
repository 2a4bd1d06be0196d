#ifndef DQPT_REPORT_HPP
#define DQPT_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace dqpt::cli {

/// Structured result of one CLI run. Serialized output is fully
/// deterministic; the wall-clock duration is carried for console display
/// only and never written into report files (identical config + seed must
/// produce byte-identical artifacts).
struct RunReport {
  std::string command;
  nlohmann::ordered_json scenario = nlohmann::ordered_json::object();
  nlohmann::ordered_json predictions = nlohmann::ordered_json::array();
  nlohmann::ordered_json jump_events = nlohmann::ordered_json::array();
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();
  std::string status = "ok";
  std::vector<std::string> warnings;
  double duration_seconds = 0.0;

  nlohmann::ordered_json to_json() const;
  std::string to_string() const;  // pretty-printed to_json + newline
};

void write_report(const std::string& path, const RunReport& report);

}  // namespace dqpt::cli

#endif
