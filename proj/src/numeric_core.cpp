#include "dqpt/numeric_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dqpt::core {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_hermiticity_defect(const Matrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

}  // namespace

HermitianMatrix::HermitianMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw ValidationError("HermitianMatrix: expected a nonempty square matrix");
  const double defect = max_hermiticity_defect(entries_);
  if (!(defect <= kConstructionTol)) {
    std::ostringstream msg;
    msg << "HermitianMatrix: input is not Hermitian, max |A_ij - conj(A_ji)| = " << defect;
    throw ValidationError(msg.str());
  }
}

UnitaryMatrix::UnitaryMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw ValidationError("UnitaryMatrix: expected a nonempty square matrix");
  const Matrix gram = entries_ * entries_.adjoint();
  const Matrix id = Matrix::Identity(entries_.rows(), entries_.cols());
  const double defect = (gram - id).cwiseAbs().maxCoeff();
  if (!(defect <= kIdentityTol)) {
    std::ostringstream msg;
    msg << "UnitaryMatrix: U U^dag deviates from identity by " << defect;
    throw ValidationError(msg.str());
  }
  const double det_defect = std::abs(std::abs(entries_.determinant()) - 1.0);
  if (!(det_defect <= kIdentityTol)) {
    std::ostringstream msg;
    msg << "UnitaryMatrix: |det U| deviates from 1 by " << det_defect;
    throw ValidationError(msg.str());
  }
}

Angle::Angle(double principal_value) : value_(principal_value) {
  if (!(value_ > -kPi && value_ <= kPi))
    throw ValidationError("Angle: value outside the principal branch (-pi, pi]");
}

EigResult hermitian_eig(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.entries());
  if (solver.info() != Eigen::Success)
    throw NumericalGuardError("hermitian_eig: eigensolver failed to converge");
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + m.dim());
  return EigResult{std::move(values), UnitaryMatrix(solver.eigenvectors())};
}

UnitaryMatrix evolve_unitary(const HermitianMatrix& h, double t) {
  const EigResult eig = hermitian_eig(h);
  const Matrix& v = eig.eigenvectors.entries();
  Eigen::VectorXcd phases(h.dim());
  for (int i = 0; i < h.dim(); ++i)
    phases(i) = std::exp(Complex(0.0, -eig.eigenvalues[i] * t));
  return UnitaryMatrix(v * phases.asDiagonal() * v.adjoint());
}

Complex chebyshev_u(int n, Complex z) {
  if (n < 0) throw ValidationError("chebyshev_u: degree must be nonnegative");
  Complex prev = 1.0;       // U_0
  if (n == 0) return prev;
  Complex curr = 2.0 * z;   // U_1
  for (int m = 1; m < n; ++m) {
    const Complex next = 2.0 * z * curr - prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

std::vector<double> chebyshev_roots(int n) {
  if (n < 1) throw ValidationError("chebyshev_roots: degree must be positive");
  std::vector<double> roots(n);
  for (int k = 1; k <= n; ++k)
    roots[k - 1] = std::cos(k * kPi / (n + 1));
  return roots;
}

Angle principal_angle(double x) {
  if (!std::isfinite(x))
    throw ValidationError("principal_angle: input must be finite");
  double r = std::remainder(x, kTwoPi);  // lands in [-pi, pi]
  if (r <= -kPi) r = kPi;                // branch convention: -pi maps to +pi
  return Angle(r);
}

double fold_difference(double delta) { return principal_angle(delta).value(); }

std::vector<double> unwrap_phases(const std::vector<Angle>& seq) {
  if (seq.empty())
    throw ValidationError("unwrap_phases: sequence must be nonempty");
  std::vector<double> out(seq.size());
  out[0] = seq[0].value();
  for (std::size_t i = 1; i < seq.size(); ++i)
    out[i] = out[i - 1] + fold_difference(seq[i].value() - seq[i - 1].value());
  return out;
}

}  // namespace dqpt::core
