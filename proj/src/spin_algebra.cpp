#include "dqpt/spin_algebra.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dqpt::spin {

namespace {

constexpr double kPi = std::numbers::pi;
using core::Complex;
using core::Matrix;

}  // namespace

SpinJ::SpinJ(int twice_j_in) : twice_j(twice_j_in) {
  if (twice_j < 1) throw ValidationError("SpinJ: twice_j must be >= 1");
}

SpinDirection::SpinDirection(double theta_in, double phi_in)
    : theta(theta_in), phi(phi_in) {
  if (!(theta >= 0.0 && theta <= kPi))
    throw ValidationError("SpinDirection: theta must lie in [0, pi]");
  if (!(phi >= 0.0 && phi < 2.0 * kPi))
    throw ValidationError("SpinDirection: phi must lie in [0, 2 pi)");
}

Eigen::Vector3d SpinDirection::unit_vector() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

SpinDirection SpinDirection::from_unit_vector(const Eigen::Vector3d& v) {
  const double norm = v.norm();
  if (!(std::abs(norm - 1.0) < 1e-12))
    throw ValidationError("SpinDirection: vector is not unit length");
  const double theta = std::acos(std::clamp(v.z() / norm, -1.0, 1.0));
  double phi = std::atan2(v.y(), v.x());
  if (phi < 0.0) phi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi = 0.0;
  return SpinDirection(theta, phi);
}

Temperature Temperature::finite(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw ValidationError("Temperature: finite temperature must be positive");
  return Temperature(Kind::Finite, t);
}

double Temperature::beta() const {
  switch (kind_) {
    case Kind::Zero: return std::numeric_limits<double>::infinity();
    case Kind::Infinite: return 0.0;
    case Kind::Finite: return 1.0 / value_;
  }
  return 0.0;
}

double Temperature::value() const {
  if (kind_ != Kind::Finite)
    throw ValidationError("Temperature: value() is only defined for finite T");
  return value_;
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  core::HermitianMatrix hermitian(entries_);  // reuse the 1e-12 symmetry check
  const double trace_defect = std::abs(entries_.trace() - Complex(1.0));
  if (!(trace_defect <= core::kConstructionTol)) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace deviates from 1 by " << trace_defect;
    throw ValidationError(msg.str());
  }
  const auto eig = core::hermitian_eig(hermitian);
  if (eig.eigenvalues.front() < -core::kConstructionTol) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << eig.eigenvalues.front();
    throw ValidationError(msg.str());
  }
}

SpinOperators spin_operators(const SpinJ& s) {
  const int d = s.dim();
  const double j = s.j();
  Matrix jz = Matrix::Zero(d, d);
  Matrix jplus = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) jz(i, i) = j - i;
  // J+ raises m; with descending-m ordering it sits on the superdiagonal.
  for (int i = 1; i < d; ++i) {
    const double m = j - i;
    jplus(i - 1, i) = std::sqrt((j - m) * (j + m + 1.0));
  }
  const Matrix jminus = jplus.adjoint();
  Matrix jx = 0.5 * (jplus + jminus);
  Matrix jy = Complex(0.0, -0.5) * (jplus - jminus);
  return SpinOperators{core::HermitianMatrix(std::move(jx)),
                       core::HermitianMatrix(std::move(jy)),
                       core::HermitianMatrix(std::move(jz))};
}

core::UnitaryMatrix rotation_unitary(const SpinJ& s, double theta, double phi) {
  const SpinOperators ops = spin_operators(s);
  const int d = s.dim();
  Eigen::VectorXcd z_phases(d);
  for (int i = 0; i < d; ++i)
    z_phases(i) = std::exp(Complex(0.0, -phi * (s.j() - i)));
  const core::UnitaryMatrix y_rot = core::evolve_unitary(ops.jy, theta);
  return core::UnitaryMatrix(z_phases.asDiagonal() * y_rot.entries());
}

core::HermitianMatrix spin_hamiltonian(const SpinJ& s, double omega0,
                                       const SpinDirection& dir) {
  if (!(omega0 > 0.0))
    throw ValidationError("spin_hamiltonian: omega0 must be positive");
  const SpinOperators ops = spin_operators(s);
  const Eigen::Vector3d b = dir.unit_vector();
  Matrix h = omega0 * (b.x() * ops.jx.entries() + b.y() * ops.jy.entries() +
                       b.z() * ops.jz.entries());
  return core::HermitianMatrix(std::move(h));
}

GibbsResult gibbs_state(const core::HermitianMatrix& h, const Temperature& t) {
  const int d = h.dim();
  if (t.is_infinite()) {
    Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
    return GibbsResult{DensityMatrix(std::move(rho)), std::log(static_cast<double>(d))};
  }

  const auto eig = core::hermitian_eig(h);
  const Matrix& v = eig.eigenvectors.entries();
  const double lambda_min = eig.eigenvalues.front();

  if (t.is_zero()) {
    const double spread =
        std::max(1.0, std::abs(eig.eigenvalues.back() - lambda_min));
    if (d > 1 && eig.eigenvalues[1] - lambda_min < 1e-9 * spread)
      throw NumericalGuardError(
          "gibbs_state: degenerate ground state at T = 0; the zero-temperature "
          "limit assumes a unique ground level");
    Matrix rho = v.col(0) * v.col(0).adjoint();
    // log Z follows the beta -> inf limit of -beta*lambda_min.
    double log_z = 0.0;
    if (lambda_min < 0.0) log_z = std::numeric_limits<double>::infinity();
    if (lambda_min > 0.0) log_z = -std::numeric_limits<double>::infinity();
    return GibbsResult{DensityMatrix(std::move(rho)), log_z};
  }

  const double beta = t.beta();
  Eigen::VectorXd weights(d);
  double norm = 0.0;
  for (int i = 0; i < d; ++i) {
    weights(i) = std::exp(-beta * (eig.eigenvalues[i] - lambda_min));
    norm += weights(i);
  }
  weights /= norm;
  Matrix rho = v * weights.asDiagonal() * v.adjoint();
  const double log_z = -beta * lambda_min + std::log(norm);
  return GibbsResult{DensityMatrix(std::move(rho)), log_z};
}

std::array<double, 4> verify_cbh_identities(const SpinJ& s, double theta, double phi) {
  const SpinOperators ops = spin_operators(s);
  const Matrix& jx = ops.jx.entries();
  const Matrix& jy = ops.jy.entries();
  const Matrix& jz = ops.jz.entries();
  const Matrix uy = core::evolve_unitary(ops.jy, theta).entries();
  const Matrix uz = core::evolve_unitary(ops.jz, phi).entries();

  const auto residual = [](const Matrix& lhs, const Matrix& rhs) {
    return (lhs - rhs).cwiseAbs().maxCoeff();
  };
  return {
      residual(uy * jz * uy.adjoint(), jx * std::sin(theta) + jz * std::cos(theta)),
      residual(uz * jx * uz.adjoint(), jx * std::cos(phi) + jy * std::sin(phi)),
      residual(uz * jy * uz.adjoint(), -jx * std::sin(phi) + jy * std::cos(phi)),
      residual(uy * jx * uy.adjoint(), -jz * std::sin(theta) + jx * std::cos(theta)),
  };
}

}  // namespace dqpt::spin
