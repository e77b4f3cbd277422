#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reftor {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Bad input: shapes, ranges, broken invariants of the arguments.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input sits on a numerical boundary: an eigenvalue on a spectral cut or on
// the splitting threshold, or no admissible angle exists.
class NumericalBoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kPi = 3.14159265358979323846;
constexpr Scalar kI{0.0, 1.0};

// Default comparison tolerance, overridable through REFTOR_TOL.
double default_tolerance();

// Determinant with det of a 0x0 matrix equal to 1.
Scalar det(const Matrix& m);

// (-1)^p for an integer parity.
inline int sign_of(long long parity) { return (parity % 2 == 0) ? 1 : -1; }

// Largest singular value; 0 for empty matrices.
double op_norm(const Matrix& m);

// Orthonormal basis of the kernel, rank decided by relative threshold
// 1e-8 * sigma_max (absolute 1e-12 when sigma_max == 0).
Matrix kernel_basis(const Matrix& m);

// Numerical rank under the same threshold as kernel_basis.
int numerical_rank(const Matrix& m);

}  // namespace reftor
