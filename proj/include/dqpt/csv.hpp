#ifndef DQPT_CSV_HPP
#define DQPT_CSV_HPP

// Shortest round-trip decimal serialization and minimal CSV helpers. Every
// float written by the tool goes through format_double so that re-parsing
// an emitted file reconstructs the numbers bit-exactly.

#include <string>
#include <vector>

namespace dqpt::io {

/// Shortest decimal string that parses back to the same double
/// (std::to_chars); "inf"/"-inf"/"nan" for the non-finite values.
std::string format_double(double x);

/// Inverse of format_double; throws ValidationError on malformed input.
double parse_double(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace dqpt::io

#endif
