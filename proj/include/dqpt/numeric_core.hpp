#ifndef DQPT_NUMERIC_CORE_HPP
#define DQPT_NUMERIC_CORE_HPP

// Dense numerical kernel shared by every higher module: complex Hermitian
// eigendecomposition, spectral propagators exp(-iHt), second-kind Chebyshev
// polynomials, and principal-branch angle utilities.
//
// All functions are pure; values can be shared freely across threads.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dqpt/errors.hpp"

namespace dqpt::core {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Tolerance ladder: construction checks, algebraic identities, and composed
// operations each get one decade of slack.
inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kComposedTol = 1e-9;

/// Square complex matrix with entries[i][j] == conj(entries[j][i]).
/// Construction rejects non-Hermitian input and reports the max asymmetry.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

/// Square complex matrix with U U^dag = 1 (1e-10 per entry) and |det U| = 1.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

/// Angle on the fixed principal branch (-pi, pi].
class Angle {
 public:
  Angle() : value_(0.0) {}
  explicit Angle(double principal_value);

  double value() const { return value_; }

 private:
  double value_;
};

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  UnitaryMatrix eigenvectors;       // columns, same order
};

/// Diagonalizes M = V diag(lambda) V^dag with ascending real eigenvalues.
EigResult hermitian_eig(const HermitianMatrix& m);

/// exp(-iHt) through the spectral decomposition of H.
UnitaryMatrix evolve_unitary(const HermitianMatrix& h, double t);

/// U_n(z) by the forward recurrence U_{n+1} = 2 z U_n - U_{n-1},
/// U_0 = 1, U_1 = 2z.
Complex chebyshev_u(int n, Complex z);

/// The n real roots cos(k pi / (n+1)), k = 1..n, descending.
std::vector<double> chebyshev_roots(int n);

/// Reduces x mod 2pi into (-pi, pi]. Rejects non-finite input.
Angle principal_angle(double x);

/// Cumulative unwrap: output[0] = seq[0], each consecutive difference is
/// shifted by a 2pi multiple into (-pi, pi].
std::vector<double> unwrap_phases(const std::vector<Angle>& seq);

/// Same folding rule applied to a raw difference.
double fold_difference(double delta);

}  // namespace dqpt::core

#endif
