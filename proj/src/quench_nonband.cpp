#include "dqpt/quench_nonband.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dqpt::nonband {

namespace {

constexpr double kPi = std::numbers::pi;

// cos(w t / 2) and sin(w t / 2) for the half-angle argument used throughout.
struct HalfAngle {
  double c;
  double s;
};

HalfAngle half_angle(const SpinQuenchScenario& sc, double t) {
  const double x = 0.5 * sc.omega0 * t;
  return {std::cos(x), std::sin(x)};
}

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw ValidationError("quench evaluation: time must be >= 0");
}

// Overlaps below the parallel tolerance count as exactly parallel, so
// parallel quenches keep theta_d = 0 and a real amplitude to the last bit.
double effective_dot(const SpinQuenchScenario& sc) {
  const double dot = parallel_defect(sc);
  return std::abs(dot) <= kParallelTol ? 0.0 : dot;
}

// -(1/L) ln |G|^2 from |G|^2, with |G| <= 1 enforced against roundoff.
double rate_from_echo(double echo, double rate_norm) {
  if (echo == 0.0) return std::numeric_limits<double>::infinity();
  double r = -std::log(std::min(echo, 1.0)) / rate_norm;
  if (r < 1e-12) r = 0.0;
  return r;
}

}  // namespace

SpinQuenchScenario::SpinQuenchScenario(spin::SpinJ s_in, double omega0_in,
                                       spin::Temperature temperature_in,
                                       spin::SpinDirection dir_initial_in,
                                       spin::SpinDirection dir_final_in)
    : s(s_in),
      omega0(omega0_in),
      temperature(temperature_in),
      dir_initial(dir_initial_in),
      dir_final(dir_final_in) {
  if (!(omega0 > 0.0))
    throw ValidationError("SpinQuenchScenario: omega0 must be positive");
}

double parallel_defect(const SpinQuenchScenario& sc) {
  return sc.dir_initial.unit_vector().dot(sc.dir_final.unit_vector());
}

spin::SpinDirection direction_with_dot(const spin::SpinDirection& dir_initial,
                                       double dot) {
  if (!(dot >= -1.0 && dot <= 1.0))
    throw ValidationError("direction_with_dot: dot must lie in [-1, 1]");
  const Eigen::Vector3d b0 = dir_initial.unit_vector();
  // Reference axis least aligned with b0, to get a stable orthogonal frame.
  const Eigen::Vector3d axis =
      std::abs(b0.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d perp = (axis - axis.dot(b0) * b0).normalized();
  const Eigen::Vector3d b = dot * b0 + std::sqrt(std::max(0.0, 1.0 - dot * dot)) * perp;
  return spin::SpinDirection::from_unit_vector(b.normalized());
}

spin::SpinDirection orthogonalized(const spin::SpinDirection& dir_initial,
                                   const spin::SpinDirection& dir) {
  const Eigen::Vector3d b0 = dir_initial.unit_vector();
  const Eigen::Vector3d b = dir.unit_vector();
  const Eigen::Vector3d projected = b - b.dot(b0) * b0;
  if (projected.norm() < 1e-12) return direction_with_dot(dir_initial, 0.0);
  return spin::SpinDirection::from_unit_vector(projected.normalized());
}

Complex z_parameter(const SpinQuenchScenario& sc, double t) {
  require_nonnegative_time(t);
  const HalfAngle ha = half_angle(sc, t);
  const double dot = effective_dot(sc);
  if (sc.temperature.is_zero())
    return Complex(ha.c, ha.s * dot);  // rescaled limit 2 e^{-beta w/2} z
  const double a = 0.5 * sc.temperature.beta() * sc.omega0;
  return Complex(std::cosh(a) * ha.c, std::sinh(a) * ha.s * dot);
}

Complex loschmidt_closed(const SpinQuenchScenario& sc, double t) {
  require_nonnegative_time(t);
  const HalfAngle ha = half_angle(sc, t);
  const double dot = effective_dot(sc);
  const int n = sc.s.twice_j;

  if (sc.temperature.is_zero()) {
    // Pure-state reduction: the amplitude is the 2j-th power of the j = 1/2 one.
    const Complex u(ha.c, ha.s * dot);
    Complex g = 1.0;
    for (int p = 0; p < n; ++p) g *= u;
    return g;
  }

  // U_{2j}(z)/Z_j(0) with every term rescaled by e^{-beta w/2} per Chebyshev
  // degree. The recurrence coefficients stay O(1) for any beta, while the
  // plain form would overflow once (2 cosh(beta w/2))^{2j} leaves double
  // range. Algebraically identical to chebyshev_u(2j, z)/Z_j(0).
  const double a = 0.5 * sc.temperature.beta() * sc.omega0;
  const double q = std::exp(-2.0 * a);
  const Complex z_scaled(0.5 * (1.0 + q) * ha.c, 0.5 * (1.0 - q) * ha.s * dot);

  Complex prev = 1.0;
  Complex curr = 2.0 * z_scaled;
  for (int m = 1; m < n; ++m) {
    const Complex next = 2.0 * z_scaled * curr - q * prev;
    prev = curr;
    curr = next;
  }
  const Complex u_scaled = (n == 0) ? prev : curr;

  double z_partition = 1.0;
  double qp = 1.0;
  for (int p = 1; p <= n; ++p) {
    qp *= q;
    z_partition += qp;
  }
  return u_scaled / z_partition;
}

Complex loschmidt_oracle(const SpinQuenchScenario& sc, double t) {
  require_nonnegative_time(t);
  const core::HermitianMatrix h0 =
      spin::spin_hamiltonian(sc.s, sc.omega0, sc.dir_initial);
  const core::HermitianMatrix h =
      spin::spin_hamiltonian(sc.s, sc.omega0, sc.dir_final);
  const spin::GibbsResult gibbs = spin::gibbs_state(h0, sc.temperature);
  const core::UnitaryMatrix u = core::evolve_unitary(h, t);
  return (gibbs.rho.entries() * u.entries()).trace();
}

double dynamical_phase(const SpinQuenchScenario& sc, double t) {
  require_nonnegative_time(t);
  const double dot = effective_dot(sc);
  if (sc.temperature.is_zero()) return sc.s.j() * sc.omega0 * t * dot;
  if (sc.temperature.is_infinite()) return 0.0;

  // Thermal level average <m> with weights e^{-beta m w}, shifted so the
  // dominant m = -j weight is 1.
  const double beta_w = sc.temperature.beta() * sc.omega0;
  const double j = sc.s.j();
  double norm = 0.0;
  double m_avg = 0.0;
  for (int i = 0; i <= sc.s.twice_j; ++i) {
    const double m = -j + i;
    const double w = std::exp(-beta_w * (m + j));
    norm += w;
    m_avg += m * w;
  }
  m_avg /= norm;
  return -m_avg * sc.omega0 * t * dot;
}

Angle geometric_phase(const SpinQuenchScenario& sc, double t) {
  const Complex g = loschmidt_closed(sc, t);
  return core::principal_angle(std::arg(g) - dynamical_phase(sc, t));
}

double rate_function(const SpinQuenchScenario& sc, double t, double rate_norm) {
  if (!(rate_norm > 0.0))
    throw ValidationError("rate_function: normalization must be positive");
  return rate_from_echo(std::norm(loschmidt_closed(sc, t)), rate_norm);
}

CriticalTimesResult critical_times(const SpinQuenchScenario& sc, double t_max) {
  if (!(t_max > 0.0))
    throw ValidationError("critical_times: t_max must be positive");
  CriticalTimesResult result;
  if (std::abs(parallel_defect(sc)) > kParallelTol) {
    result.dqpt_possible = false;  // no DQPT possible off the parallel manifold
    return result;
  }
  result.dqpt_possible = true;

  // In-cluster arccos offsets, ascending. The Chebyshev root set is symmetric
  // under z -> -z, so the same offsets serve every cluster; at T = 0 they all
  // collapse onto pi/2 and the cluster degenerates to the pure-state time.
  const int n_roots = sc.s.twice_j;
  std::vector<double> offsets(n_roots, 0.5 * kPi);
  if (!sc.temperature.is_zero()) {
    const double cosh_a = std::cosh(0.5 * sc.temperature.beta() * sc.omega0);
    const std::vector<double> roots = core::chebyshev_roots(n_roots);
    for (int k = 0; k < n_roots; ++k)
      offsets[k] = std::acos(roots[k] / cosh_a);
  }

  for (int n = 0;; ++n) {
    bool any = false;
    for (int k = 0; k < n_roots; ++k) {
      const double t_star = (2.0 / sc.omega0) * (n * kPi + offsets[k]);
      if (t_star > t_max) continue;
      result.times.push_back(CriticalTime{n, k + 1, t_star});
      any = true;
    }
    if (!any) break;
  }
  return result;
}

PhaseTrace compute_phase_trace(const SpinQuenchScenario& sc, double t_max,
                               int t_steps, double rate_norm) {
  if (t_steps < 1)
    throw ValidationError("compute_phase_trace: t_steps must be >= 1");
  if (t_steps > 1 && !(t_max > 0.0))
    throw ValidationError("compute_phase_trace: t_max must be positive");

  PhaseTrace trace;
  trace.times.resize(t_steps);
  trace.amplitude.resize(t_steps);
  trace.theta_d.resize(t_steps);
  trace.theta_g.resize(t_steps);
  trace.rate.resize(t_steps);
  trace.dqpt_adjacent.resize(t_steps);

  for (int i = 0; i < t_steps; ++i) {
    const double t = (t_steps == 1) ? 0.0 : t_max * i / (t_steps - 1);
    const Complex g = loschmidt_closed(sc, t);
    const double td = dynamical_phase(sc, t);
    const double echo = std::norm(g);
    trace.times[i] = t;
    trace.amplitude[i] = g;
    trace.theta_d[i] = td;
    trace.theta_g[i] = core::principal_angle(std::arg(g) - td);
    trace.rate[i] = rate_from_echo(echo, rate_norm);
    trace.dqpt_adjacent[i] = std::abs(g) < 1e-9;
  }
  return trace;
}

std::vector<PhaseJump> detect_phase_jumps(const PhaseTrace& trace) {
  for (std::size_t i = 1; i < trace.times.size(); ++i)
    if (!(trace.times[i] > trace.times[i - 1]))
      throw ValidationError("detect_phase_jumps: time grid must be strictly increasing");

  std::vector<PhaseJump> jumps;
  for (std::size_t i = 1; i < trace.theta_g.size(); ++i) {
    const double diff = core::fold_difference(trace.theta_g[i].value() -
                                              trace.theta_g[i - 1].value());
    if (std::abs(diff) > 0.5 * kPi)
      jumps.push_back(PhaseJump{trace.times[i - 1], trace.times[i], diff});
  }
  return jumps;
}

}  // namespace dqpt::nonband
