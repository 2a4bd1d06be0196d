#ifndef DQPT_SPIN_ALGEBRA_HPP
#define DQPT_SPIN_ALGEBRA_HPP

// Spin-j operator algebra: angular-momentum matrices, rotation unitaries,
// field Hamiltonians H = omega0 * b.J, and thermal Gibbs states.
//
// Basis convention, fixed globally: Jz eigenbasis ordered m = j, j-1, ..., -j
// (descending), so row 0 is the highest level.

#include <Eigen/Dense>
#include <array>

#include "dqpt/numeric_core.hpp"

namespace dqpt::spin {

/// Spin quantum number stored as 2j so half-integer spins stay exact.
struct SpinJ {
  int twice_j;

  explicit SpinJ(int twice_j_in);
  int dim() const { return twice_j + 1; }
  double j() const { return 0.5 * twice_j; }
};

/// Unit direction (sin t cos p, sin t sin p, cos t), theta in [0, pi],
/// phi in [0, 2 pi).
struct SpinDirection {
  double theta;
  double phi;

  SpinDirection(double theta_in, double phi_in);
  Eigen::Vector3d unit_vector() const;
  static SpinDirection from_unit_vector(const Eigen::Vector3d& v);
};

/// Temperature with exact zero / infinite variants, so the tanh(beta R) -> 1
/// and -> 0 limits never go through overflowing floats.
class Temperature {
 public:
  enum class Kind { Zero, Finite, Infinite };

  static Temperature zero() { return Temperature(Kind::Zero, 0.0); }
  static Temperature infinite() { return Temperature(Kind::Infinite, 0.0); }
  static Temperature finite(double t);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  /// 1/T; zero -> +inf sentinel, infinite -> 0.
  double beta() const;
  /// Finite value; only valid for Kind::Finite.
  double value() const;

 private:
  Temperature(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

/// Hermitian, unit trace, eigenvalues >= -1e-12.
class DensityMatrix {
 public:
  explicit DensityMatrix(core::Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const core::Matrix& entries() const { return entries_; }

 private:
  core::Matrix entries_;
};

struct SpinOperators {
  core::HermitianMatrix jx;
  core::HermitianMatrix jy;
  core::HermitianMatrix jz;
};

/// Standard ladder construction in the descending-m basis; Jz is diagonal
/// with entries j..-j and [Jx, Jy] = i Jz.
SpinOperators spin_operators(const SpinJ& s);

/// exp(-i phi Jz) exp(-i theta Jy).
core::UnitaryMatrix rotation_unitary(const SpinJ& s, double theta, double phi);

/// omega0 * (bx Jx + by Jy + bz Jz); spectrum {m omega0}.
core::HermitianMatrix spin_hamiltonian(const SpinJ& s, double omega0,
                                       const SpinDirection& dir);

struct GibbsResult {
  DensityMatrix rho;
  double log_z;
};

/// exp(-beta H)/Z via the spectral decomposition. T = zero gives the ground
/// projector (unique ground state required), T = infinite gives 1/dim.
/// Eigenvalues are shifted by the minimum before exponentiating, so beta up
/// to ~1e4 stays representable.
GibbsResult gibbs_state(const core::HermitianMatrix& h, const Temperature& t);

/// Max-norm residuals of the four rotation conjugation identities
///   e^{-i theta Jy} Jz e^{+i theta Jy} = Jx sin + Jz cos
///   e^{-i phi Jz}   Jx e^{+i phi Jz}   = Jx cos + Jy sin
///   e^{-i phi Jz}   Jy e^{+i phi Jz}   = -Jx sin + Jy cos
///   e^{-i theta Jy} Jx e^{+i theta Jy} = -Jz sin + Jx cos
std::array<double, 4> verify_cbh_identities(const SpinJ& s, double theta, double phi);

}  // namespace dqpt::spin

#endif
