#ifndef DQPT_ERRORS_HPP
#define DQPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dqpt {

// Bad input: shapes, ranges, malformed configs, non-Hermitian matrices.
// CLI exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input that a numerical guard refuses to process: degenerate
// ground state at T=0, gap closing, unresolvable phase grids.
// CLI exit code 2.
struct NumericalGuardError : std::runtime_error {
  explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dqpt

#endif
