#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "reftor/core.hpp"

namespace reftor::checks {

// Per-case results of a sweep; a thrown exception is recorded and the case
// value set to +inf.
struct Sweep {
  std::vector<double> values;
  int errors = 0;
  std::string first_error;
  double max() const;
  double min() const;
};

// Runs f(0..n-1). The parallel path uses an OpenMP loop; the serial path is
// the reference and both produce identical values.
Sweep run_sweep(int n, const std::function<double(int)>& f, bool parallel);

// Each case builds its own instance from the seed and returns a residual
// (relative unless noted).
double fusion_associativity(std::uint64_t seed);
double alpha_beta_compatibility(std::uint64_t seed);
double fusion_dual_compatibility(std::uint64_t seed);
double phi_fusion(std::uint64_t seed);
double phi_duality(std::uint64_t seed);
double phi_basis_change(std::uint64_t seed);
double torsion_direct_sum(std::uint64_t seed);
// |torsion_norm - 1| for a unitary self-adjoint chirality.
double torsion_norm_unitary(std::uint64_t seed);
double c_gamma_scale_cancellation(std::uint64_t seed);
// residual(h = 1e-2) / residual(h = 1e-3) for a smooth chirality family.
double variation_ratio(std::uint64_t seed);
double dual_torsion(std::uint64_t seed);
// Acyclic instance with d in {1, 3} and all dims <= 8.
double torsion_vs_graded_det(std::uint64_t seed);
// Three thresholds across the B^2 spectrum; max deviation from the refined
// torsion. With harmonic set the instance has nonzero betti numbers.
double split_consistency(std::uint64_t seed, bool harmonic);
// 1 if some large part has nonzero cohomology, else 0.
double large_part_acyclic(std::uint64_t seed);
double even_odd_spectrum(std::uint64_t seed);
// Two admissible angles against each other and against Det_gr.
double agmon_independence(std::uint64_t seed);
// Random diagonalizable matrix, angle chosen automatically.
double det_eta_random(std::uint64_t seed);
// 0 when serialize/parse/serialize is byte-identical and lossless.
double json_round_trip(std::uint64_t seed);
// Bitwise reproducibility, gamma^2 = 1 to 1e-12, betti from the profile.
double generator_determinism(std::uint64_t seed);

// d = 1, d = [2], gamma = identity pairing: max of |rho - 2| and |Det_gr - 2|.
double running_example();
// Max residual over diag(2), diag(2, -3), diag(2, 0) and diag(3i).
double det_eta_hand_examples();

// a = k / 21, k = 1..20.
std::vector<Scalar> circle_real_grid();
// Ten points with 0 < Re a < 1 and 0 < |Im a| <= 0.3.
std::vector<Scalar> circle_complex_grid();

double circle_closed_form(Scalar a);
// |value - target| / target.
double circle_rs_norm(Scalar a);
double circle_duality(Scalar a);
// Max over scales 0.5, 2, 5.
double circle_metric_scaling(Scalar a);
// Splits between the moduli at n = 2, 3 and n = 5, 6.
double circle_split(Scalar a);
double circle_zeta_zero(Scalar a);
// log Gamma paths against each other (and std::lgamma on the real axis).
double circle_log_gamma(Scalar a);
// Truncated Laplacian product against 2 log|2 sin(pi a)|.
double circle_rs_truncation(Scalar a);

struct CheckResult {
  std::string key;
  int cases = 0;
  double min = 0.0;
  double max = 0.0;
  std::string bound;  // human-readable pass condition
  bool pass = false;
  std::string error;
};

// Every invariant of the library over the given number of random cases
// per check (grids and hand examples run at fixed size).
std::vector<CheckResult> run_selftest(int cases, std::uint64_t seed, bool parallel);

}  // namespace reftor::checks
