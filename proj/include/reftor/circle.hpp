#pragma once

#include <limits>

#include "reftor/core.hpp"

namespace reftor {

// Flat line bundle on the circle: B_even has eigenvalues scale * (n + a),
// n in Z. trunc is the truncation depth of the product oracles.
struct CircleModel {
  Scalar a{0.5};
  double scale = 1.0;
  int trunc = 100;
};

// 0 < Re a < 1, scale > 0, trunc >= 100.
void validate(const CircleModel& m);

// Hurwitz zeta sum_{n>=0} (n + q)^{-s}, principal powers, by Euler-Maclaurin
// with a shifted tail. Requires Re q > 0 and s != 1.
Scalar hurwitz_zeta(Scalar s, Scalar q);

// d/ds zeta(s, q) at s = 0 through log Gamma(q) - log(2 pi) / 2.
Scalar hurwitz_zeta_deriv0(Scalar q);

// Same derivative from the differentiated Euler-Maclaurin expansion.
Scalar hurwitz_zeta_deriv0_em(Scalar q);

// log Gamma on Re q > 0, continuous branch real on the positive axis
// (Lanczos, g = 7).
Scalar log_gamma(Scalar q);

// eta invariant of B_even: (zeta(0, a) - zeta(0, 1 - a)) / 2.
Scalar eta_circle(const CircleModel& m);

// Default angle: midpoint of (-pi/2, min(0, arg a, arg(1 - a))).
double circle_agmon_angle(const CircleModel& m);

// 1/2 LDet_{2 theta} of B_even^2. Throws NumericalBoundaryError unless
// theta lies in (-pi/2, 0) below arg a and arg(1 - a).
Scalar xi_circle(const CircleModel& m,
                 double theta = std::numeric_limits<double>::quiet_NaN());

// exp(xi - i pi eta).
Scalar rho_an_circle(const CircleModel& m);

// 1 - exp(2 pi i a).
Scalar rho_an_closed_form(const CircleModel& m);

// exp(LDet_theta(B_even)) with the branch of the negative eigenvalues
// accounted for directly.
Scalar rho_an_direct(const CircleModel& m);

// zeta(0) of B_even^2 from Hurwitz values (equals 0 on the acyclic range).
Scalar zeta_zero_circle(const CircleModel& m);

// Ray-Singer torsion 1 / |2 sin(pi a)|.
double rs_torsion_circle(const CircleModel& m);

// log det of the Laplacian from a truncated product over |n| <= trunc,
// normalised by the a = 1/2 product whose determinant is 4.
double rs_log_det_truncated(const CircleModel& m);

struct NormCheck {
  double value = 0.0;
  double target = 0.0;
};

// value = |rho_an| * T_RS, target = exp(pi Im eta).
NormCheck rs_norm_check(const CircleModel& m);

// |conj(rho(a)) - rho(conj a) exp(2 pi i conj(eta(a)))|.
double duality_check(const CircleModel& m);

// |rho_an(scale c) - rho_an(scale 1)|.
double metric_scale_check(const CircleModel& m, double c);

// Threshold halfway between the B^2 moduli at n = k and n = k + 1.
double circle_gap_threshold(const CircleModel& m, int k);

// Det_gr of the part of the spectrum with |eigenvalue|^2 > lambda times the
// product of the remaining eigenvalues.
Scalar rho_an_via_split(const CircleModel& m, double lambda);

}  // namespace reftor
