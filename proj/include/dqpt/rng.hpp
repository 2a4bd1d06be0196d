#ifndef DQPT_RNG_HPP
#define DQPT_RNG_HPP

// Seeded generator with hand-rolled distributions, so identical seeds give
// identical draws on every platform (std:: distributions are
// implementation-defined).

#include <cstdint>
#include <random>

namespace dqpt::util {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] via rejection-free modulo of a 64-bit draw
  /// (bias is negligible for the small ranges used here).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dqpt::util

#endif
