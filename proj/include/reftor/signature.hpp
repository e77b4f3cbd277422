#pragma once

#include <limits>
#include <vector>

#include "reftor/torsion.hpp"

namespace reftor {

// B = gamma d + d gamma on the total space C^0 + ... + C^d.
struct SignatureOp {
  CochainComplex complex;
  ChiralityOp chirality;
  std::vector<int> offset;  // first total index of each degree
  Matrix total_d;
  Matrix total_gamma;
  Matrix B;
  Matrix beven;  // B on C^even, even degrees in increasing order
  Matrix bodd;   // B on C^odd
};

// Assembles B and checks that it commutes with gamma and d to 1e-9 relative.
SignatureOp build_signature(const CochainComplex& c, const ChiralityOp& g);

// Bases of C^j_+ = ker(d gamma) and C^j_- = ker d in every degree.
struct PlusMinus {
  std::vector<Matrix> plus, minus;
};

// Throws ValidationError when C^j_+ and C^j_- do not span C^j (B not
// bijective on the complex).
PlusMinus plus_minus_split(const SignatureOp& s);

// Matrices of B^+_even and B^-_even in the orthonormal bases of
// C^even_+ and C^even_-.
struct EvenBlocks {
  Matrix plus, minus;
};
EvenBlocks even_blocks(const SignatureOp& s);

// Det(B^+_even) / Det(-B^-_even).
Scalar graded_det_finite(const SignatureOp& s);

// Decomposition of the complex into the B^2-invariant parts with eigenvalue
// modulus <= lambda (small) and > lambda (large).
struct SpectralSplit {
  double lambda = 0.0;
  std::vector<Matrix> small_basis, large_basis;  // orthonormal columns in C^j
  CochainComplex small, large;
  ChiralityOp small_gamma, large_gamma;
  std::vector<int> d_small;
  double invariance_residual = 0.0;
};

// Throws NumericalBoundaryError when an eigenvalue modulus of B^2 lies within
// 1e-8 * max(1, lambda) of lambda.
SpectralSplit spectral_split(const SignatureOp& s, double lambda);

// Sorted distinct eigenvalue moduli of B^2 (clusters merged at 1e-8 relative).
std::vector<double> b_squared_moduli(const SignatureOp& s);

// Thresholds strictly inside the gaps: one below the smallest nonzero
// modulus, one between each pair of neighbours, one above the largest.
std::vector<double> gap_thresholds(const SignatureOp& s);

// Det_gr of the large part times the refined torsion of the small part,
// carried into the default frame of the full complex.
CohomologyElement torsion_via_split(const CochainComplex& c, const ChiralityOp& g, double lambda);

// Sum of log of nonzero eigenvalues with arg taken in (theta, theta + 2 pi).
Scalar log_det_cut(const Matrix& m, double theta);
Scalar log_det_cut(const std::vector<Scalar>& eigenvalues, double theta);

struct EtaData {
  Scalar eta0{0.0};
  int m_plus = 0;
  int m_minus = 0;
  int m_zero = 0;
  Scalar eta{0.0};
};

// Counts by eigenvalue location; real parts within 1e-10 * spectral radius
// count as zero.
EtaData eta_finite(const Matrix& m);
EtaData eta_finite(const std::vector<Scalar>& eigenvalues);

// |LDet_theta(D) - 1/2 LDet_{2 theta}(D^2) + i pi (eta(D) - (N + m0)/2)|,
// N = number of nonzero eigenvalues of D^2.
double det_eta_check(const Matrix& m, double theta);

// Angle in (-pi/2, 0) with no eigenvalue of any matrix in the sectors
// (-pi/2, theta] and (pi/2, theta + pi]; midpoint of the admissible arc.
double choose_agmon_angle(const std::vector<Scalar>& eigenvalues);
double choose_agmon_angle(const Matrix& m);

// exp(xi - i pi (eta(B^+_even) - eta(-B^-_even)) + (i pi / 2)(n_+ - n_-)) on
// the large part of the split at lambda, where
// xi = 1/2 (LDet_{2 theta}((B^+)^2) - LDet_{2 theta}((B^-)^2)) and
// n_+- = dim C^even_+-. NaN theta selects an angle.
Scalar graded_det_via_xi_eta(const SignatureOp& s, double lambda,
                             double theta = std::numeric_limits<double>::quiet_NaN());

// Eigenvalues with algebraic multiplicity.
std::vector<Scalar> eigenvalues(const Matrix& m);

// Largest distance between the spectra of B_even and B_odd after greedy
// matching.
double even_odd_spectrum_residual(const SignatureOp& s);

}  // namespace reftor
