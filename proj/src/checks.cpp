#include "reftor/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "reftor/circle.hpp"
#include "reftor/signature.hpp"
#include "reftor/workbench.hpp"

namespace reftor::checks {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel(Scalar got, Scalar want) { return std::abs(got - want) / std::abs(want); }

GradedDims random_dims(Rng& rng, int d, int max_dim) {
  GradedDims g{d, {}};
  for (int j = 0; j <= d; ++j) g.dims.push_back(rng.uniform_int(0, max_dim));
  return g;
}

DetElement random_element(Rng& rng, const GradedDims& dims) {
  return {rng.complex_in_annulus(0.5, 2.0), dims, false};
}

int random_odd_degree(Rng& rng) { return rng.uniform() < 0.5 ? 1 : 3; }

// Small random instance: 1..max_blocks blocks and up to max_harmonic pairs.
Instance random_instance(Rng& rng, std::uint64_t seed, int max_blocks, int max_harmonic,
                         bool unitary = false) {
  const int d = random_odd_degree(rng);
  Profile p;
  p.blocks = rng.uniform_int(1, max_blocks);
  p.harmonic_pairs = rng.uniform_int(0, max_harmonic);
  p.unitary = unitary;
  return gen_random(mix_seed(seed, 1, 0), d, p);
}

Instance random_instance_of_degree(Rng& rng, std::uint64_t seed, int d, int max_blocks,
                                   int max_harmonic) {
  Profile p;
  p.blocks = rng.uniform_int(1, max_blocks);
  p.harmonic_pairs = rng.uniform_int(0, max_harmonic);
  return gen_random(mix_seed(seed, 2, 0), d, p);
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Scalar x = a.data()[i];
    const Scalar y = b.data()[i];
    if (x.real() != y.real() || x.imag() != y.imag()) return false;
  }
  return true;
}

bool same_instance(const Instance& a, const Instance& b) {
  if (a.complex.dims != b.complex.dims) return false;
  for (std::size_t j = 0; j < a.complex.partial.size(); ++j) {
    if (!bitwise_equal(a.complex.partial[j], b.complex.partial[j])) return false;
  }
  for (std::size_t j = 0; j < a.chirality.gamma.size(); ++j) {
    if (!bitwise_equal(a.chirality.gamma[j], b.chirality.gamma[j])) return false;
  }
  return true;
}

}  // namespace

double Sweep::max() const {
  double m = -kInf;
  for (double v : values) m = std::isnan(v) ? kInf : std::max(m, v);
  return values.empty() ? 0.0 : m;
}

double Sweep::min() const {
  double m = kInf;
  for (double v : values) m = std::isnan(v) ? m : std::min(m, v);
  return values.empty() ? 0.0 : m;
}

Sweep run_sweep(int n, const std::function<double(int)>& f, bool parallel) {
  Sweep s;
  s.values.assign(static_cast<std::size_t>(std::max(n, 0)), 0.0);
  std::vector<std::string> errors(s.values.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      s.values[static_cast<std::size_t>(i)] = f(i);
    } catch (const std::exception& e) {
      s.values[static_cast<std::size_t>(i)] = kInf;
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (e.empty()) continue;
    if (s.errors++ == 0) s.first_error = e;
  }
  return s;
}

double fusion_associativity(std::uint64_t seed) {
  Rng rng(seed);
  const int d = random_odd_degree(rng);
  const DetElement x = random_element(rng, random_dims(rng, d, 4));
  const DetElement y = random_element(rng, random_dims(rng, d, 4));
  const DetElement z = random_element(rng, random_dims(rng, d, 4));
  const DetElement left = fuse(fuse(x, y), z);
  const DetElement right = fuse(x, fuse(y, z));
  if (left.dims != right.dims) return kInf;
  return rel(left.coeff, right.coeff);
}

double alpha_beta_compatibility(std::uint64_t seed) {
  Rng rng(seed);
  const int n = rng.uniform_int(0, 6);
  const LineElement v{rng.complex_in_annulus(0.5, 2.0), n, false, 1};
  LineElement lhs = beta_line(v);
  lhs.coeff *= static_cast<double>(sign_of(n));
  const LineElement rhs = inverse(alpha_line_inverse(inverse(v)));
  if (lhs.over_dual != rhs.over_dual || lhs.power != rhs.power || lhs.dim != rhs.dim) return kInf;
  return rel(lhs.coeff, rhs.coeff);
}

double fusion_dual_compatibility(std::uint64_t seed) {
  Rng rng(seed);
  const LineElement v{rng.complex_in_annulus(0.5, 2.0), rng.uniform_int(0, 5), false, 1};
  const LineElement w{rng.complex_in_annulus(0.5, 2.0), rng.uniform_int(0, 5), false, 1};
  const LineElement lhs = inverse(fuse_lines(v, w));
  const LineElement dual =
      fuse_lines(alpha_line_inverse(inverse(v)), alpha_line_inverse(inverse(w)));
  const LineElement rhs = alpha_line(dual);
  if (lhs.over_dual != rhs.over_dual || lhs.power != rhs.power || lhs.dim != rhs.dim) return kInf;
  return rel(lhs.coeff, rhs.coeff);
}

double phi_fusion(std::uint64_t seed) {
  Rng rng(seed);
  const int d = random_odd_degree(rng);
  const Instance a = random_instance_of_degree(rng, mix_seed(seed, 3, 0), d, 2, 1);
  const Instance b = random_instance_of_degree(rng, mix_seed(seed, 3, 1), d, 2, 1);
  return fusion_compatibility_check(a.complex, random_element(rng, a.complex.dims), b.complex,
                                    random_element(rng, b.complex.dims));
}

double phi_duality(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 2);
  return duality_diagram_check(a.complex, random_element(rng, a.complex.dims));
}

double phi_basis_change(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 2);
  const CochainComplex& c = a.complex;
  const FramePtr f = cohomology_frame(c);
  auto moved = std::make_shared<CohomologyFrame>(*f);
  Scalar expected_factor(1.0);
  for (int j = 0; j <= c.d(); ++j) {
    const int b = f->betti[j];
    Matrix u = random_unitary(rng, b);
    for (int i = 0; i < b; ++i) u.col(i) *= rng.uniform(0.5, 2.0);
    moved->H[j] = f->H[j] * u;
    moved->A[j] = f->A[j] * random_unitary(rng, static_cast<int>(f->A[j].cols()));
    const Scalar du = det(u);
    expected_factor *= (j % 2 == 0) ? Scalar(1.0) / du : du;
  }
  const DetElement x = random_element(rng, c.dims);
  const Scalar base = phi(c, f, x).coeff;
  const Scalar got = phi(c, moved, x).coeff;
  return rel(got, base * expected_factor);
}

double torsion_direct_sum(std::uint64_t seed) {
  Rng rng(seed);
  const int d = random_odd_degree(rng);
  const Instance a = random_instance_of_degree(rng, mix_seed(seed, 4, 0), d, 2, 1);
  const Instance b = random_instance_of_degree(rng, mix_seed(seed, 4, 1), d, 2, 1);
  return direct_sum_torsion_check(a.complex, a.chirality, b.complex, b.chirality);
}

double torsion_norm_unitary(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 2, true);
  return std::abs(torsion_norm(a.complex, a.chirality) - 1.0);
}

double c_gamma_scale_cancellation(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 1);
  std::vector<Scalar> scales;
  for (int j = 0; j < (a.complex.d() + 1) / 2; ++j) scales.push_back(rng.complex_in_annulus(0.2, 5.0));
  return rel(c_gamma_with(a.complex, a.chirality, scales).coeff, c_gamma(a.complex, a.chirality).coeff);
}

double variation_ratio(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 0);
  const int d = a.complex.d();
  std::vector<Matrix> x;
  for (int j = 0; j <= d; ++j) {
    const int n = a.complex.dim(j);
    Matrix m(n, n);
    for (int k = 0; k < n * n; ++k) m.data()[k] = 0.3 * rng.complex_normal();
    x.push_back(m);
  }
  const ChiralityOp g0 = a.chirality;
  const ChiralityFamily family = [x, g0, d](double t) {
    std::vector<Matrix> s, sinv;
    for (const Matrix& m : x) {
      const Matrix st = Matrix::Identity(m.rows(), m.cols()) + t * m;
      s.push_back(st);
      sinv.push_back(st.size() == 0 ? st : Matrix(st.inverse()));
    }
    ChiralityOp g;
    for (int j = 0; j <= d; ++j) g.gamma.push_back(s[d - j] * g0.gamma[j] * sinv[j]);
    return g;
  };
  const double coarse = variation_check(family, a.complex, 0.1, 1e-2);
  const double fine = variation_check(family, a.complex, 0.1, 1e-3);
  return coarse / fine;
}

double dual_torsion(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 2);
  return dual_torsion_check(a.complex, a.chirality);
}

double torsion_vs_graded_det(std::uint64_t seed) {
  Rng rng(seed);
  const int d = random_odd_degree(rng);
  Profile p;
  p.blocks = rng.uniform_int(1, 6);
  const Instance a = gen_random(mix_seed(seed, 5, 0), d, p);
  for (int j = 0; j <= d; ++j) {
    if (a.complex.dim(j) > 8) throw ValidationError("instance exceeds dim 8");
  }
  const Scalar rho = refined_torsion(a.complex, a.chirality).coeff;
  const Scalar gd = graded_det_finite(build_signature(a.complex, a.chirality));
  return rel(rho, gd);
}

double split_consistency(std::uint64_t seed, bool harmonic) {
  Rng rng(seed);
  const int d = random_odd_degree(rng);
  Profile p;
  p.blocks = rng.uniform_int(2, 4);
  p.harmonic_pairs = harmonic ? rng.uniform_int(1, 2) : 0;
  const Instance a = gen_random(mix_seed(seed, 6, 0), d, p);
  const SignatureOp s = build_signature(a.complex, a.chirality);
  std::vector<double> nonzero;
  for (double m : b_squared_moduli(s)) {
    if (m > 0.0) nonzero.push_back(m);
  }
  if (nonzero.size() < 2) throw ValidationError("instance has fewer than 2 distinct moduli");
  const std::vector<double> t = gap_thresholds(s);
  const std::vector<double> lambdas = {t.front(), t[t.size() / 2], t.back()};
  const Scalar rho = refined_torsion(a.complex, a.chirality).coeff;
  double worst = 0.0;
  for (double lambda : lambdas) {
    worst = std::max(worst, rel(torsion_via_split(a.complex, a.chirality, lambda).coeff, rho));
  }
  return worst;
}

double large_part_acyclic(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 2);
  const SignatureOp s = build_signature(a.complex, a.chirality);
  for (double lambda : gap_thresholds(s)) {
    if (!is_acyclic(spectral_split(s, lambda).large)) return 1.0;
  }
  return 0.0;
}

double even_odd_spectrum(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 2);
  return even_odd_spectrum_residual(build_signature(a.complex, a.chirality));
}

double agmon_independence(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 0);
  const SignatureOp s = build_signature(a.complex, a.chirality);
  const EvenBlocks eb = even_blocks(s);
  std::vector<Scalar> all = eigenvalues(eb.plus);
  for (const Scalar& z : eigenvalues(Matrix(-eb.minus))) all.push_back(z);
  const double mid = choose_agmon_angle(all);
  const double bound = 2.0 * mid + kPi / 2;
  const double width = bound + kPi / 2;
  const double t1 = -kPi / 2 + 0.25 * width;
  const double t2 = -kPi / 2 + 0.75 * width;
  const Scalar gd = graded_det_finite(s);
  const Scalar g1 = graded_det_via_xi_eta(s, 0.0, t1);
  const Scalar g2 = graded_det_via_xi_eta(s, 0.0, t2);
  return std::max(rel(g1, g2), rel(g1, gd));
}

double det_eta_random(std::uint64_t seed) {
  Rng rng(seed);
  const int n = rng.uniform_int(1, 6);
  Eigen::VectorXcd lam(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    if (u < 0.1) {
      lam(i) = 0.0;
    } else if (u < 0.2) {
      lam(i) = Scalar(0.0, rng.uniform(0.3, 3.0));
    } else {
      lam(i) = rng.complex_in_annulus(0.3, 3.0);
    }
  }
  Matrix v = random_unitary(rng, n);
  for (int i = 0; i < n; ++i) v.col(i) *= rng.uniform(1.0, 3.0);
  const Matrix m = v * lam.asDiagonal() * v.inverse();
  return det_eta_check(m, choose_agmon_angle(m));
}

double json_round_trip(std::uint64_t seed) {
  Rng rng(seed);
  const Instance a = random_instance(rng, seed, 3, 2);
  ComplexDocument doc{a.complex, a.chirality, {{"seed", std::to_string(seed)}, {"kind", "random"}}};
  const std::string first = to_json(doc);
  const ComplexDocument back = from_json(first);
  const std::string second = to_json(back);
  if (first != second || !back.chirality) return 1.0;
  return same_instance(a, Instance{back.complex, *back.chirality}) ? 0.0 : 1.0;
}

double generator_determinism(std::uint64_t seed) {
  Rng rng(seed);
  const int d = random_odd_degree(rng);
  Profile p;
  p.blocks = rng.uniform_int(0, 3);
  p.harmonic_pairs = rng.uniform_int(0, 2);
  p.unitary = rng.uniform() < 0.3;
  const std::uint64_t s = mix_seed(seed, 7, 0);
  const Instance a = gen_random(s, d, p);
  const Instance b = gen_random(s, d, p);
  if (!same_instance(a, b)) return kInf;
  if (betti_numbers(a.complex) != profile_betti(s, d, p)) return kInf;
  double worst = 0.0;
  for (int j = 0; j <= d; ++j) {
    const int n = a.complex.dim(j);
    if (n == 0) continue;
    const Matrix sq = a.chirality.gamma[d - j] * a.chirality.gamma[j];
    worst = std::max(worst, op_norm(sq - Matrix::Identity(n, n)));
  }
  return worst;
}

double running_example() {
  const Instance a = gen_elementary(1, 0, 2.0);
  const Scalar rho = refined_torsion(a.complex, a.chirality).coeff;
  const Scalar gd = graded_det_finite(build_signature(a.complex, a.chirality));
  return std::max(std::abs(rho - 2.0), std::abs(gd - 2.0));
}

double det_eta_hand_examples() {
  auto diag = [](std::initializer_list<Scalar> v) {
    Eigen::VectorXcd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (const Scalar& z : v) x(i++) = z;
    return Matrix(x.asDiagonal());
  };
  const double theta = -kPi / 4;
  return std::max({det_eta_check(diag({2.0}), theta), det_eta_check(diag({2.0, -3.0}), theta),
                   det_eta_check(diag({2.0, 0.0}), theta),
                   det_eta_check(diag({Scalar(0.0, 3.0)}), theta)});
}

std::vector<Scalar> circle_real_grid() {
  std::vector<Scalar> g;
  for (int k = 1; k <= 20; ++k) g.emplace_back(k / 21.0, 0.0);
  return g;
}

std::vector<Scalar> circle_complex_grid() {
  const double im[] = {0.3, -0.2, 0.1, -0.3, 0.2, -0.1, 0.25, -0.25, 0.15, -0.05};
  std::vector<Scalar> g;
  for (int k = 0; k < 10; ++k) g.emplace_back(0.05 + 0.1 * k, im[k]);
  return g;
}

double circle_closed_form(Scalar a) {
  const CircleModel m{a, 1.0, 100};
  return rel(rho_an_circle(m), rho_an_closed_form(m));
}

double circle_rs_norm(Scalar a) {
  const NormCheck n = rs_norm_check(CircleModel{a, 1.0, 100});
  return std::abs(n.value - n.target) / n.target;
}

double circle_duality(Scalar a) { return duality_check(CircleModel{a, 1.0, 100}); }

double circle_metric_scaling(Scalar a) {
  const CircleModel m{a, 1.0, 100};
  return std::max({metric_scale_check(m, 0.5), metric_scale_check(m, 2.0),
                   metric_scale_check(m, 5.0)});
}

double circle_split(Scalar a) {
  const CircleModel m{a, 1.0, 100};
  const Scalar rho = rho_an_circle(m);
  double worst = 0.0;
  for (int k : {2, 5}) worst = std::max(worst, rel(rho_an_via_split(m, circle_gap_threshold(m, k)), rho));
  return worst;
}

double circle_zeta_zero(Scalar a) { return std::abs(zeta_zero_circle(CircleModel{a, 1.0, 100})); }

double circle_log_gamma(Scalar a) {
  double worst = 0.0;
  for (const Scalar q : {a, Scalar(1.0) - a, a + 3.0}) {
    worst = std::max(worst, std::abs(hurwitz_zeta_deriv0(q) - hurwitz_zeta_deriv0_em(q)));
    if (q.imag() == 0.0) worst = std::max(worst, std::abs(log_gamma(q).real() - std::lgamma(q.real())));
  }
  return worst;
}

double circle_rs_truncation(Scalar a) {
  const CircleModel m{a, 1.0, 2000};
  const double exact = 2.0 * std::log(std::abs(2.0 * std::sin(kPi * a)));
  return std::abs(rs_log_det_truncated(m) - exact);
}

std::vector<CheckResult> run_selftest(int cases, std::uint64_t seed, bool parallel) {
  if (cases < 1) throw ValidationError("selftest: cases must be positive");
  const double tol = default_tolerance();
  std::vector<CheckResult> out;
  std::uint64_t stream = 100;
  auto seeded = [&](const std::string& key, int n, double (*f)(std::uint64_t),
                    double lo, double hi, const std::string& bound) {
    const std::uint64_t st = stream++;
    const Sweep s = run_sweep(
        n, [&](int i) { return f(mix_seed(seed, st, static_cast<std::uint64_t>(i))); }, parallel);
    CheckResult r{key, n, s.min(), s.max(), bound, false, s.first_error};
    r.pass = s.errors == 0 && r.min >= lo && r.max <= hi;
    out.push_back(r);
  };
  auto grid = [&](const std::string& key, double (*f)(Scalar), double hi, const std::string& bound) {
    std::vector<Scalar> pts = circle_real_grid();
    for (const Scalar& z : circle_complex_grid()) pts.push_back(z);
    const Sweep s = run_sweep(
        static_cast<int>(pts.size()), [&](int i) { return f(pts[static_cast<std::size_t>(i)]); },
        parallel);
    CheckResult r{key, static_cast<int>(pts.size()), s.min(), s.max(), bound, false, s.first_error};
    r.pass = s.errors == 0 && r.max <= hi;
    out.push_back(r);
  };
  auto single = [&](const std::string& key, double (*f)(), double hi, const std::string& bound) {
    const Sweep s = run_sweep(1, [&](int) { return f(); }, false);
    CheckResult r{key, 1, s.min(), s.max(), bound, false, s.first_error};
    r.pass = s.errors == 0 && r.max <= hi;
    out.push_back(r);
  };
  char buf[32];
  std::snprintf(buf, sizeof(buf), "<= %g", tol);
  const std::string le_tol = buf;

  seeded("fusion associativity", cases, fusion_associativity, 0.0, 1e-12, "<= 1e-12");
  seeded("alpha beta compatibility", cases, alpha_beta_compatibility, 0.0, 1e-12, "<= 1e-12");
  seeded("fusion respects duals", cases, fusion_dual_compatibility, 0.0, 1e-12, "<= 1e-12");
  seeded("phi fusion compatibility", cases, phi_fusion, 0.0, tol, le_tol);
  seeded("phi duality diagram", cases, phi_duality, 0.0, tol, le_tol);
  seeded("phi harmonic basis change", cases, phi_basis_change, 0.0, 1e-10, "<= 1e-10");
  seeded("torsion direct sum", cases, torsion_direct_sum, 0.0, tol, le_tol);
  seeded("torsion norm for unitary chirality", cases, torsion_norm_unitary, 0.0, tol, le_tol);
  seeded("c_gamma scale cancellation", cases, c_gamma_scale_cancellation, 0.0, 1e-12, "<= 1e-12");
  seeded("log torsion variation order", std::min(cases, 20), variation_ratio, 50.0, 200.0,
         "ratio in [50, 200]");
  seeded("dual torsion", cases, dual_torsion, 0.0, tol, le_tol);
  seeded("torsion equals graded determinant", cases, torsion_vs_graded_det, 0.0, tol, le_tol);
  seeded("torsion via spectral split", cases,
         [](std::uint64_t s) { return split_consistency(s, false); }, 0.0, 1e-8, "<= 1e-8");
  seeded("torsion via spectral split with cohomology", cases,
         [](std::uint64_t s) { return split_consistency(s, true); }, 0.0, 1e-8, "<= 1e-8");
  seeded("large spectral part is acyclic", cases, large_part_acyclic, 0.0, 0.0, "== 0");
  seeded("even and odd spectra agree", cases, even_odd_spectrum, 0.0, tol, le_tol);
  seeded("agmon angle independence", cases, agmon_independence, 0.0, tol, le_tol);
  seeded("det eta identity", cases, det_eta_random, 0.0, tol, le_tol);
  single("det eta hand examples", det_eta_hand_examples, 1e-14, "<= 1e-14");
  single("running example", running_example, 1e-12, "<= 1e-12");
  grid("circle closed form", circle_closed_form, 1e-8, "<= 1e-8");
  grid("circle ray-singer norm", circle_rs_norm, 1e-8, "<= 1e-8");
  grid("circle duality", circle_duality, tol, le_tol);
  grid("circle metric scaling", circle_metric_scaling, tol, le_tol);
  grid("circle split independence", circle_split, 1e-8, "<= 1e-8");
  grid("circle zeta at zero", circle_zeta_zero, 1e-10, "<= 1e-10");
  grid("circle log gamma paths", circle_log_gamma, 1e-12, "<= 1e-12");
  grid("circle laplacian truncation", circle_rs_truncation, 1e-3, "<= 1e-3");
  seeded("json round trip", cases, json_round_trip, 0.0, 0.0, "== 0");
  seeded("generator determinism", cases, generator_determinism, 0.0, 1e-12, "<= 1e-12");
  return out;
}

}  // namespace reftor::checks
