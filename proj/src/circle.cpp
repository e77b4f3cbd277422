#include "reftor/circle.hpp"

#include <array>
#include <cmath>
#include <string>

namespace reftor {

namespace {

// B_2, B_4, ..., B_24
constexpr std::array<double, 12> kBernoulli = {
    1.0 / 6.0,          -1.0 / 30.0,         1.0 / 42.0,           -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0,     7.0 / 6.0,            -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0,   854513.0 / 138.0,     -236364091.0 / 2730.0};

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

void require_right_half(Scalar q, const char* where) {
  if (!(q.real() > 0.0) || !std::isfinite(q.real()) || !std::isfinite(q.imag())) {
    throw ValidationError(std::string(where) + ": requires Re q > 0");
  }
}

int shift_for(Scalar s, Scalar q) {
  return 30 + static_cast<int>(std::ceil(2.0 * std::abs(s) + std::abs(q.imag())));
}

Scalar model_eigenvalue(const CircleModel& m, int n) {
  return m.scale * (static_cast<double>(n) + m.a);
}

}  // namespace

void validate(const CircleModel& m) {
  if (!(m.a.real() > 0.0 && m.a.real() < 1.0) || !std::isfinite(m.a.imag())) {
    throw ValidationError("circle: requires 0 < Re a < 1");
  }
  if (!(m.scale > 0.0) || !std::isfinite(m.scale)) {
    throw ValidationError("circle: scale must be positive");
  }
  if (m.trunc < 100) throw ValidationError("circle: trunc must be at least 100");
}

Scalar hurwitz_zeta(Scalar s, Scalar q) {
  require_right_half(q, "hurwitz_zeta");
  if (std::abs(s - Scalar(1.0)) < 1e-14) throw ValidationError("hurwitz_zeta: pole at s = 1");
  const int n = shift_for(s, q);
  Scalar sum(0.0);
  for (int k = 0; k < n; ++k) sum += std::exp(-s * std::log(Scalar(k) + q));
  const Scalar x = Scalar(n) + q;
  const Scalar lx = std::log(x);
  sum += std::exp((Scalar(1.0) - s) * lx) / (s - Scalar(1.0));
  sum += 0.5 * std::exp(-s * lx);
  // B_{2k} / (2k)! * s (s + 1) ... (s + 2k - 2) * x^{-s-2k+1}
  Scalar rising = s;
  double fact = 2.0;
  Scalar power = std::exp(-(s + Scalar(1.0)) * lx);
  const Scalar inv_x2 = Scalar(1.0) / (x * x);
  Scalar last(0.0);
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    last = kBernoulli[k] / fact * rising * power;
    sum += last;
    const double m = 2.0 * static_cast<double>(k + 1);
    rising *= (s + m - 1.0) * (s + m);
    fact *= (m + 1.0) * (m + 2.0);
    power *= inv_x2;
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()) ||
      std::abs(last) > 1e-10 * std::max(1.0, std::abs(sum))) {
    throw NumericalBoundaryError("hurwitz_zeta: Euler-Maclaurin tail did not converge");
  }
  return sum;
}

Scalar log_gamma(Scalar q) {
  require_right_half(q, "log_gamma");
  if (q.real() < 0.5) return log_gamma(q + 1.0) - std::log(q);
  const Scalar z = q - 1.0;
  Scalar x(kLanczos[0]);
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Scalar t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

Scalar hurwitz_zeta_deriv0(Scalar q) {
  require_right_half(q, "hurwitz_zeta_deriv0");
  return log_gamma(q) - 0.5 * std::log(2.0 * kPi);
}

Scalar hurwitz_zeta_deriv0_em(Scalar q) {
  require_right_half(q, "hurwitz_zeta_deriv0_em");
  const int n = shift_for(Scalar(0.0), q);
  Scalar sum(0.0);
  for (int k = 0; k < n; ++k) sum -= std::log(Scalar(k) + q);
  const Scalar x = Scalar(n) + q;
  const Scalar lx = std::log(x);
  sum += x * lx - x - 0.5 * lx;
  Scalar power = Scalar(1.0) / x;
  const Scalar inv_x2 = Scalar(1.0) / (x * x);
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double m = 2.0 * static_cast<double>(k + 1);
    sum += kBernoulli[k] / (m * (m - 1.0)) * power;
    power *= inv_x2;
  }
  return sum;
}

Scalar eta_circle(const CircleModel& m) {
  validate(m);
  return 0.5 * (hurwitz_zeta(0.0, m.a) - hurwitz_zeta(0.0, 1.0 - m.a));
}

double circle_agmon_angle(const CircleModel& m) {
  validate(m);
  const double bound = std::min({0.0, std::arg(m.a), std::arg(1.0 - m.a)});
  return 0.5 * (-kPi / 2 + bound);
}

Scalar xi_circle(const CircleModel& m, double theta) {
  validate(m);
  if (std::isnan(theta)) theta = circle_agmon_angle(m);
  if (!(theta > -kPi / 2 && theta < 0.0)) {
    throw ValidationError("xi_circle: theta must lie in (-pi/2, 0)");
  }
  // the squared spectrum crosses the ray 2 theta unless theta stays below
  // the arguments of n + a and n + 1 - a for all n >= 0
  const double margin = 1e-9;
  if (theta >= std::arg(m.a) - margin || theta >= std::arg(1.0 - m.a) - margin) {
    throw NumericalBoundaryError("xi_circle: eigenvalues approach the cut at theta = " +
                                 std::to_string(theta));
  }
  const Scalar z0 = hurwitz_zeta(0.0, m.a) + hurwitz_zeta(0.0, 1.0 - m.a);
  return std::log(m.scale) * z0 - hurwitz_zeta_deriv0(m.a) - hurwitz_zeta_deriv0(1.0 - m.a);
}

Scalar rho_an_circle(const CircleModel& m) {
  return std::exp(xi_circle(m) - kI * kPi * eta_circle(m));
}

Scalar rho_an_closed_form(const CircleModel& m) {
  validate(m);
  return 1.0 - std::exp(2.0 * kPi * kI * m.a);
}

Scalar rho_an_direct(const CircleModel& m) {
  validate(m);
  // zeta_theta(s) = c^{-s} (zeta(s, a) + e^{-i pi s} zeta(s, 1 - a))
  const Scalar za = hurwitz_zeta(0.0, m.a);
  const Scalar zb = hurwitz_zeta(0.0, 1.0 - m.a);
  const Scalar ldet = std::log(m.scale) * (za + zb) - hurwitz_zeta_deriv0_em(m.a) -
                      hurwitz_zeta_deriv0_em(1.0 - m.a) + kI * kPi * zb;
  return std::exp(ldet);
}

Scalar zeta_zero_circle(const CircleModel& m) {
  validate(m);
  return hurwitz_zeta(0.0, m.a) + hurwitz_zeta(0.0, 1.0 - m.a);
}

double rs_torsion_circle(const CircleModel& m) {
  validate(m);
  return 1.0 / std::abs(2.0 * std::sin(kPi * m.a));
}

double rs_log_det_truncated(const CircleModel& m) {
  validate(m);
  const double alpha = m.a.real();
  const double beta = m.a.imag();
  double sum = 2.0 * std::log(2.0);
  for (int n = -m.trunc - 1; n <= m.trunc; ++n) {
    const double u = n + alpha;
    const double h = n + 0.5;
    sum += std::log((u * u + beta * beta) / (h * h));
  }
  return sum;
}

NormCheck rs_norm_check(const CircleModel& m) {
  NormCheck out;
  out.value = std::abs(rho_an_circle(m)) * rs_torsion_circle(m);
  out.target = std::exp(kPi * eta_circle(m).imag());
  return out;
}

double duality_check(const CircleModel& m) {
  CircleModel dual = m;
  dual.a = std::conj(m.a);
  const Scalar lhs = std::conj(rho_an_circle(m));
  const Scalar rhs = rho_an_circle(dual) * std::exp(2.0 * kPi * kI * std::conj(eta_circle(m)));
  return std::abs(lhs - rhs);
}

double metric_scale_check(const CircleModel& m, double c) {
  CircleModel scaled = m;
  scaled.scale = c;
  CircleModel unit = m;
  unit.scale = 1.0;
  return std::abs(rho_an_circle(scaled) - rho_an_circle(unit));
}

double circle_gap_threshold(const CircleModel& m, int k) {
  validate(m);
  if (k < 0) throw ValidationError("circle_gap_threshold: k must be nonnegative");
  return 0.5 * (std::norm(model_eigenvalue(m, k)) + std::norm(model_eigenvalue(m, k + 1)));
}

Scalar rho_an_via_split(const CircleModel& m, double lambda) {
  validate(m);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("rho_an_via_split: lambda must be a nonnegative real");
  }
  const double tol = 1e-8 * std::max(1.0, lambda);
  auto small = [&](int n) {
    const double mod = std::norm(model_eigenvalue(m, n));
    if (std::abs(mod - lambda) <= tol) {
      throw NumericalBoundaryError("rho_an_via_split: eigenvalue modulus " + std::to_string(mod) +
                                   " lies on lambda");
    }
    return mod <= lambda;
  };
  // |n + a| grows monotonically away from -Re a, so the small part is
  // n = -k_neg .. k_pos - 1
  Scalar product(1.0);
  int k_pos = 0;
  while (small(k_pos)) product *= model_eigenvalue(m, k_pos++);
  int k_neg = 0;
  while (small(-k_neg - 1)) product *= model_eigenvalue(m, -(k_neg++) - 1);
  const Scalar qa = m.a + static_cast<double>(k_pos);
  const Scalar qb = 1.0 - m.a + static_cast<double>(k_neg);
  const Scalar za = hurwitz_zeta(0.0, qa);
  const Scalar zb = hurwitz_zeta(0.0, qb);
  const Scalar xi = std::log(m.scale) * (za + zb) - hurwitz_zeta_deriv0(qa) - hurwitz_zeta_deriv0(qb);
  const Scalar eta = 0.5 * (za - zb);
  const double count = static_cast<double>(k_pos + k_neg);
  return std::exp(xi - kI * kPi * eta - 0.5 * kI * kPi * count) * product;
}

}  // namespace reftor
