#ifndef DQPT_QUENCH_NONBAND_HPP
#define DQPT_QUENCH_NONBAND_HPP

// Sudden-quench diagnostics for thermal spin-j ensembles: Loschmidt
// amplitude (Chebyshev closed form plus a brute-force spectral oracle),
// dynamical/geometric phase split, rate function, critical-time ladder,
// and phase-jump detection.

#include <complex>
#include <optional>
#include <vector>

#include "dqpt/spin_algebra.hpp"

namespace dqpt::nonband {

using core::Angle;
using core::Complex;

/// Full description of one quench experiment: spin, Larmor frequency,
/// temperature, and the field directions before/after the quench.
struct SpinQuenchScenario {
  spin::SpinJ s;
  double omega0;
  spin::Temperature temperature;
  spin::SpinDirection dir_initial;
  spin::SpinDirection dir_final;

  SpinQuenchScenario(spin::SpinJ s_in, double omega0_in,
                     spin::Temperature temperature_in,
                     spin::SpinDirection dir_initial_in,
                     spin::SpinDirection dir_final_in);
};

/// b0 . b; zero (within 1e-12) iff the quench is parallel.
double parallel_defect(const SpinQuenchScenario& sc);

inline constexpr double kParallelTol = 1e-12;

/// A final direction with the requested overlap b0 . b = dot.
spin::SpinDirection direction_with_dot(const spin::SpinDirection& dir_initial,
                                       double dot);

/// Projects `dir` onto the plane orthogonal to `dir_initial`, for callers
/// wanting an exactly parallel quench.
spin::SpinDirection orthogonalized(const spin::SpinDirection& dir_initial,
                                   const spin::SpinDirection& dir);

/// The scalar of the (1/2, 0) representation,
///   z = cosh(beta w/2) cos(w t/2) + i sinh(beta w/2) sin(w t/2) b0.b.
/// At T = 0 both hyperbolic factors are replaced by their exp(beta w/2)/2
/// asymptotics, i.e. the returned value is lim 2 e^{-beta w/2} z, which
/// stays finite.
Complex z_parameter(const SpinQuenchScenario& sc, double t);

/// Loschmidt amplitude U_{2j}(z)/Z_j(0) via the forward Chebyshev
/// recurrence; at T = 0 the reduced pure-state form
/// (cos(w t/2) + i sin(w t/2) b0.b)^{2j}.
Complex loschmidt_closed(const SpinQuenchScenario& sc, double t);

/// Tr[rho(0) exp(-iHt)] assembled from explicit matrices; no closed-form
/// shortcuts. This is the oracle the closed form is checked against.
Complex loschmidt_oracle(const SpinQuenchScenario& sc, double t);

/// Accumulated dynamical phase -<m> w t b0.b with <m> the thermal level
/// average; j w t b0.b at T = 0, zero at T = infinity. Linear in t.
double dynamical_phase(const SpinQuenchScenario& sc, double t);

/// arg G - theta_d folded to the principal branch. Near a Loschmidt zero
/// (|G| < 1e-9) the argument is ill-conditioned; the value is still returned
/// and the trace flags such samples.
Angle geometric_phase(const SpinQuenchScenario& sc, double t);

/// r(t) = -(1/L) ln |G|^2 with L = rate_norm (1 per spin by default);
/// +inf when G vanishes exactly.
double rate_function(const SpinQuenchScenario& sc, double t, double rate_norm = 1.0);

/// One sub-DQPT: cluster index n >= 0, in-cluster index k = 1..2j
/// (ascending in time), and the critical time itself.
struct CriticalTime {
  int n;
  int k;
  double t_star;
};

struct CriticalTimesResult {
  bool dqpt_possible = false;  // false for non-parallel quenches
  std::vector<CriticalTime> times;
};

/// All Loschmidt zeros up to t_max for a parallel quench:
///   t*_{n,k} = (2/w) (n pi + arccos(z_k / cosh(beta w/2)))
/// over both signs of the Chebyshev roots z_k, 2j entries per cluster.
/// At T = 0 every cluster coalesces onto the pure-state time (2n+1) pi / w.
/// Non-parallel scenarios admit no zeros: dqpt_possible = false, empty list.
CriticalTimesResult critical_times(const SpinQuenchScenario& sc, double t_max);

/// Time series of (t, G, theta_d, theta_g, r) on a uniform grid.
struct PhaseTrace {
  std::vector<double> times;
  std::vector<Complex> amplitude;
  std::vector<double> theta_d;   // unwrapped (linear in t)
  std::vector<Angle> theta_g;
  std::vector<double> rate;
  std::vector<bool> dqpt_adjacent;  // |G| < 1e-9
};

/// Uniform grid of t_steps samples on [0, t_max] (t_steps = 1 -> {0}).
PhaseTrace compute_phase_trace(const SpinQuenchScenario& sc, double t_max,
                               int t_steps, double rate_norm = 1.0);

struct PhaseJump {
  double t_before;
  double t_after;
  double size;  // folded theta_g difference across the interval
};

/// Consecutive-sample theta_g differences exceeding pi/2 after 2pi-folding.
std::vector<PhaseJump> detect_phase_jumps(const PhaseTrace& trace);

}  // namespace dqpt::nonband

#endif
