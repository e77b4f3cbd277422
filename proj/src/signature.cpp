#include "reftor/signature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace reftor {

namespace {

// Columns of the total space belonging to degrees of the given parity.
Matrix parity_embedding(const SignatureOp& s, int parity) {
  const int n = static_cast<int>(s.B.rows());
  int cols = 0;
  for (int j = parity; j <= s.complex.d(); j += 2) cols += s.complex.dim(j);
  Matrix e = Matrix::Zero(n, cols);
  int col = 0;
  for (int j = parity; j <= s.complex.d(); j += 2) {
    for (int i = 0; i < s.complex.dim(j); ++i) e(s.offset[j] + i, col++) = 1.0;
  }
  return e;
}

Matrix block_of(const Matrix& total, const SignatureOp& s, int row_deg, int col_deg) {
  return total.block(s.offset[row_deg], s.offset[col_deg], s.complex.dim(row_deg),
                     s.complex.dim(col_deg));
}

// Orthonormal columns spread over the given degrees of the total space.
Matrix embed_bases(const SignatureOp& s, const std::vector<Matrix>& bases, int parity) {
  const int n = static_cast<int>(s.B.rows());
  Eigen::Index cols = 0;
  for (int j = parity; j <= s.complex.d(); j += 2) cols += bases[j].cols();
  Matrix p = Matrix::Zero(n, cols);
  Eigen::Index col = 0;
  for (int j = parity; j <= s.complex.d(); j += 2) {
    p.block(s.offset[j], col, bases[j].rows(), bases[j].cols()) = bases[j];
    col += bases[j].cols();
  }
  return p;
}

// Swaps the adjacent diagonal entries k, k+1 of the upper triangular t,
// updating the unitary q so that q t q^H is unchanged.
void swap_schur(Matrix& t, Matrix& q, Eigen::Index k) {
  const Scalar t11 = t(k, k);
  const Scalar t12 = t(k, k + 1);
  const Scalar t22 = t(k + 1, k + 1);
  // eigenvector of the 2x2 block for t22
  const Scalar x1 = t12;
  const Scalar x2 = t22 - t11;
  const double nx = std::sqrt(std::norm(x1) + std::norm(x2));
  if (nx == 0.0) return;
  Matrix g(2, 2);
  g << x1 / nx, -std::conj(x2) / nx, x2 / nx, std::conj(x1) / nx;
  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  q.middleCols(k, 2) = q.middleCols(k, 2) * g;
  t(k + 1, k) = 0.0;
}

// Moves the flagged diagonal entries of the Schur form to the front,
// preserving their relative order. Returns the number moved.
Eigen::Index reorder_schur(Matrix& t, Matrix& q, std::vector<bool> flags) {
  Eigen::Index pos = 0;
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    if (!flags[static_cast<std::size_t>(k)]) continue;
    for (Eigen::Index i = k; i > pos; --i) {
      swap_schur(t, q, i - 1);
      std::swap(flags[static_cast<std::size_t>(i - 1)], flags[static_cast<std::size_t>(i)]);
    }
    ++pos;
  }
  return pos;
}

// Invariant subspace of m for the flagged Schur eigenvalues (orthonormal).
Matrix invariant_subspace(const Eigen::ComplexSchur<Matrix>& schur, const std::vector<bool>& flags) {
  Matrix t = schur.matrixT();
  Matrix q = schur.matrixU();
  const Eigen::Index n = reorder_schur(t, q, flags);
  return q.leftCols(n);
}

// arg of +-z in (-pi/2, pi/2]; eigenvalues within tol of the imaginary
// axis count as on it, as in eta_finite.
double folded_arg(Scalar z, double tol) {
  if (std::abs(z.real()) <= tol) return kPi / 2;
  double psi = std::arg(z);
  if (psi > kPi / 2) psi -= kPi;
  if (psi <= -kPi / 2) psi += kPi;
  return psi;
}

double zero_threshold(double scale) { return scale > 0.0 ? 1e-7 * scale : 1e-12; }

double wrap_positive(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a;
}

double spectral_radius(const std::vector<Scalar>& eigs) {
  double r = 0.0;
  for (const Scalar& z : eigs) r = std::max(r, std::abs(z));
  return r;
}

// Requires no eigenvalue with arg in (-pi/2, theta] or (pi/2, theta + pi].
void check_det_eta_sectors(const std::vector<Scalar>& eigs, double theta) {
  if (!(theta > -kPi / 2 && theta < 0.0)) {
    throw ValidationError("det-eta: theta must lie in (-pi/2, 0)");
  }
  const double tol = 1e-10 * spectral_radius(eigs);
  for (const Scalar& z : eigs) {
    if (std::abs(z) <= tol) continue;
    const double psi = folded_arg(z, tol);
    if (psi > -kPi / 2 + 1e-12 && psi <= theta + 1e-9) {
      throw NumericalBoundaryError("det-eta: eigenvalue " + std::to_string(z.real()) + "+" +
                                   std::to_string(z.imag()) + "i lies in a forbidden sector");
    }
  }
}

}  // namespace

std::vector<Scalar> eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("eigenvalues: matrix is not square");
  std::vector<Scalar> out;
  if (m.rows() == 0) return out;
  if (!m.allFinite()) throw ValidationError("eigenvalues: non-finite entry");
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalBoundaryError("eigenvalues: no convergence");
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

SignatureOp build_signature(const CochainComplex& c, const ChiralityOp& g) {
  validate(c, g);
  SignatureOp s;
  s.complex = c;
  s.chirality = g;
  const int d = c.d();
  int n = 0;
  for (int j = 0; j <= d; ++j) {
    s.offset.push_back(n);
    n += c.dim(j);
  }
  s.total_d = Matrix::Zero(n, n);
  s.total_gamma = Matrix::Zero(n, n);
  for (int j = 0; j <= d; ++j) {
    if (j < d) s.total_d.block(s.offset[j + 1], s.offset[j], c.dim(j + 1), c.dim(j)) = c.partial[j];
    s.total_gamma.block(s.offset[d - j], s.offset[j], c.dim(d - j), c.dim(j)) = g.gamma[j];
  }
  s.B = s.total_gamma * s.total_d + s.total_d * s.total_gamma;
  const double scale = std::max(1.0, op_norm(s.B) * std::max(op_norm(s.total_gamma), op_norm(s.total_d)));
  const double cg = op_norm(s.B * s.total_gamma - s.total_gamma * s.B);
  const double cd = op_norm(s.B * s.total_d - s.total_d * s.B);
  if (cg > 1e-9 * scale || cd > 1e-9 * scale) {
    throw ValidationError("signature: B fails to commute with gamma or d");
  }
  const Matrix ee = parity_embedding(s, 0);
  const Matrix eo = parity_embedding(s, 1);
  s.beven = ee.adjoint() * s.B * ee;
  s.bodd = eo.adjoint() * s.B * eo;
  return s;
}

PlusMinus plus_minus_split(const SignatureOp& s) {
  const CochainComplex& c = s.complex;
  const int d = c.d();
  PlusMinus pm;
  for (int j = 0; j <= d; ++j) {
    const int n = c.dim(j);
    const Matrix dg = c.diff(d - j) * s.chirality.gamma[j];
    pm.plus.push_back(j == 0 ? Matrix(Matrix::Identity(n, n)) : kernel_basis(dg));
    pm.minus.push_back(j == d ? Matrix(Matrix::Identity(n, n)) : kernel_basis(c.diff(j)));
    const Eigen::Index np = pm.plus.back().cols();
    const Eigen::Index nm = pm.minus.back().cols();
    if (np + nm != n) {
      throw ValidationError("plus/minus split: dims do not add up in degree " + std::to_string(j) +
                            " (B is not bijective)");
    }
    if (n == 0) continue;
    Matrix both(n, n);
    both << pm.plus.back(), pm.minus.back();
    if (numerical_rank(both) != n) {
      throw ValidationError("plus/minus split: C^+ and C^- intersect in degree " +
                            std::to_string(j) + " (B is not bijective)");
    }
  }
  return pm;
}

EvenBlocks even_blocks(const SignatureOp& s) {
  const PlusMinus pm = plus_minus_split(s);
  const Matrix pp = embed_bases(s, pm.plus, 0);
  const Matrix pmn = embed_bases(s, pm.minus, 0);
  EvenBlocks eb;
  eb.plus = pp.adjoint() * s.B * pp;
  eb.minus = pmn.adjoint() * s.B * pmn;
  return eb;
}

Scalar graded_det_finite(const SignatureOp& s) {
  const EvenBlocks eb = even_blocks(s);
  const Scalar num = det(eb.plus);
  const Scalar den = det(Matrix(-eb.minus));
  if (std::abs(den) == 0.0 || std::abs(num) == 0.0) {
    throw ValidationError("graded determinant: B is singular");
  }
  return num / den;
}

SpectralSplit spectral_split(const SignatureOp& s, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("spectral split: lambda must be a nonnegative real");
  }
  const CochainComplex& c = s.complex;
  const int d = c.d();
  const Matrix b2 = s.B * s.B;
  const double scale = op_norm(b2);
  const double zero_tol = zero_threshold(scale);
  const double gap_tol = 1e-8 * std::max(1.0, lambda);
  SpectralSplit sp;
  sp.lambda = lambda;
  for (int j = 0; j <= d; ++j) {
    const int n = c.dim(j);
    if (n == 0) {
      sp.small_basis.emplace_back(0, 0);
      sp.large_basis.emplace_back(0, 0);
      sp.d_small.push_back(0);
      continue;
    }
    const Matrix bj = block_of(b2, s, j, j);
    Eigen::ComplexSchur<Matrix> schur(bj);
    if (schur.info() != Eigen::Success) throw NumericalBoundaryError("spectral split: Schur failed");
    std::vector<bool> small(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double mod = std::abs(schur.matrixT()(i, i));
      if (mod > zero_tol && std::abs(mod - lambda) <= gap_tol) {
        throw NumericalBoundaryError("spectral split: eigenvalue modulus " + std::to_string(mod) +
                                     " of B^2 in degree " + std::to_string(j) +
                                     " lies on lambda");
      }
      small[static_cast<std::size_t>(i)] = mod <= zero_tol || mod <= lambda;
    }
    std::vector<bool> large(small.size());
    for (std::size_t i = 0; i < small.size(); ++i) large[i] = !small[i];
    sp.small_basis.push_back(invariant_subspace(schur, small));
    sp.large_basis.push_back(invariant_subspace(schur, large));
    sp.d_small.push_back(static_cast<int>(sp.small_basis.back().cols()));
    for (const Matrix* q : {&sp.small_basis.back(), &sp.large_basis.back()}) {
      if (q->cols() == 0) continue;
      const double res = op_norm(bj * *q - *q * (q->adjoint() * bj * *q));
      sp.invariance_residual = std::max(sp.invariance_residual, res / std::max(1.0, scale));
    }
  }
  auto restrict = [&](const std::vector<Matrix>& q, CochainComplex& part, ChiralityOp& gamma) {
    part.dims.d = d;
    for (int j = 0; j <= d; ++j) part.dims.dims.push_back(static_cast<int>(q[j].cols()));
    for (int j = 0; j < d; ++j) {
      const Matrix img = c.partial[j] * q[j];
      Matrix r = q[j + 1].adjoint() * img;
      const double res = op_norm(img - q[j + 1] * r);
      // a restriction that is pure rounding noise is the zero map
      if (op_norm(r) <= 1e-12 * std::max(1.0, op_norm(c.partial[j]))) r.setZero();
      sp.invariance_residual =
          std::max(sp.invariance_residual, res / std::max(1.0, op_norm(c.partial[j])));
      part.partial.push_back(r);
    }
    for (int j = 0; j <= d; ++j) {
      const Matrix img = s.chirality.gamma[j] * q[j];
      const Matrix r = q[d - j].adjoint() * img;
      const double res = op_norm(img - q[d - j] * r);
      sp.invariance_residual =
          std::max(sp.invariance_residual, res / std::max(1.0, op_norm(s.chirality.gamma[j])));
      gamma.gamma.push_back(r);
    }
  };
  restrict(sp.small_basis, sp.small, sp.small_gamma);
  restrict(sp.large_basis, sp.large, sp.large_gamma);
  for (int j = 0; j <= d; ++j) {
    if (sp.small.dims.dims[j] + sp.large.dims.dims[j] != c.dim(j)) {
      throw NumericalBoundaryError("spectral split: parts do not fill C^" + std::to_string(j));
    }
  }
  if (sp.invariance_residual > 1e-8) {
    throw NumericalBoundaryError("spectral split: invariant subspaces are inaccurate (residual " +
                                 std::to_string(sp.invariance_residual) + ")");
  }
  return sp;
}

std::vector<double> b_squared_moduli(const SignatureOp& s) {
  const Matrix b2 = s.B * s.B;
  const double zero_tol = zero_threshold(op_norm(b2));
  std::vector<double> mods;
  for (int j = 0; j <= s.complex.d(); ++j) {
    for (const Scalar& z : eigenvalues(block_of(b2, s, j, j))) {
      const double m = std::abs(z);
      mods.push_back(m <= zero_tol ? 0.0 : m);
    }
  }
  std::sort(mods.begin(), mods.end());
  std::vector<double> distinct;
  for (double m : mods) {
    if (distinct.empty() || m - distinct.back() > 1e-8 * std::max(1.0, m)) distinct.push_back(m);
  }
  return distinct;
}

std::vector<double> gap_thresholds(const SignatureOp& s) {
  const std::vector<double> m = b_squared_moduli(s);
  std::vector<double> out;
  if (m.empty()) return {0.0};
  if (m.front() > 0.0) out.push_back(0.5 * m.front());
  for (std::size_t i = 0; i + 1 < m.size(); ++i) out.push_back(0.5 * (m[i] + m[i + 1]));
  out.push_back(2.0 * m.back() + 1.0);
  return out;
}

CohomologyElement torsion_via_split(const CochainComplex& c, const ChiralityOp& g, double lambda) {
  const SignatureOp s = build_signature(c, g);
  const SpectralSplit sp = spectral_split(s, lambda);
  const Scalar det_large = graded_det_finite(build_signature(sp.large, sp.large_gamma));
  const FramePtr small_frame = cohomology_frame(sp.small);
  const CohomologyElement rho_small = refined_torsion(sp.small, sp.small_gamma, small_frame);
  std::vector<Matrix> reps;
  for (int j = 0; j <= c.d(); ++j) reps.push_back(sp.small_basis[j] * small_frame->H[j]);
  const FramePtr full = cohomology_frame(c);
  const Scalar carried = rho_small.coeff * change_of_harmonic_basis(reps, *full);
  return {det_large * carried, full};
}

Scalar log_det_cut(const std::vector<Scalar>& eigs, double theta) {
  if (!std::isfinite(theta)) throw ValidationError("log_det_cut: theta must be finite");
  const double tol = 1e-10 * spectral_radius(eigs);
  Scalar sum(0.0);
  for (const Scalar& z : eigs) {
    const double r = std::abs(z);
    if (r <= tol) continue;
    const double a = wrap_positive(std::arg(z) - theta);
    if (a < 1e-9 || a > 2.0 * kPi - 1e-9) {
      throw NumericalBoundaryError("log_det_cut: eigenvalue " + std::to_string(z.real()) + "+" +
                                   std::to_string(z.imag()) + "i lies on the cut");
    }
    sum += Scalar(std::log(r), theta + a);
  }
  return sum;
}

Scalar log_det_cut(const Matrix& m, double theta) { return log_det_cut(eigenvalues(m), theta); }

EtaData eta_finite(const std::vector<Scalar>& eigs) {
  const double tol = 1e-10 * spectral_radius(eigs);
  EtaData e;
  int count = 0;
  for (const Scalar& z : eigs) {
    if (std::abs(z) <= tol) {
      ++e.m_zero;
    } else if (z.real() > tol) {
      ++count;
    } else if (z.real() < -tol) {
      --count;
    } else if (z.imag() > 0.0) {
      ++e.m_plus;
    } else {
      ++e.m_minus;
    }
  }
  e.eta0 = static_cast<double>(count);
  e.eta = (e.eta0 + static_cast<double>(e.m_plus - e.m_minus + e.m_zero)) / 2.0;
  return e;
}

EtaData eta_finite(const Matrix& m) { return eta_finite(eigenvalues(m)); }

double det_eta_check(const Matrix& m, double theta) {
  const std::vector<Scalar> eigs = eigenvalues(m);
  check_det_eta_sectors(eigs, theta);
  const std::vector<Scalar> eigs2 = eigenvalues(m * m);
  const EtaData eta = eta_finite(eigs);
  const double tol2 = 1e-10 * spectral_radius(eigs2);
  int nonzero = 0;
  for (const Scalar& z : eigs2) {
    if (std::abs(z) > tol2) ++nonzero;
  }
  const Scalar res = log_det_cut(eigs, theta) - 0.5 * log_det_cut(eigs2, 2.0 * theta) +
                     kI * kPi * (eta.eta - 0.5 * static_cast<double>(nonzero + eta.m_zero));
  return std::abs(res);
}

double choose_agmon_angle(const std::vector<Scalar>& eigs) {
  const double tol = 1e-10 * spectral_radius(eigs);
  double bound = 0.0;
  for (const Scalar& z : eigs) {
    if (std::abs(z) <= tol) continue;
    const double psi = folded_arg(z, tol);
    bound = std::min(bound, psi);
  }
  if (bound <= -kPi / 2 + 1e-9) {
    throw NumericalBoundaryError("agmon angle: spectrum leaves no admissible angle");
  }
  return 0.5 * (-kPi / 2 + bound);
}

double choose_agmon_angle(const Matrix& m) { return choose_agmon_angle(eigenvalues(m)); }

Scalar graded_det_via_xi_eta(const SignatureOp& s, double lambda, double theta) {
  const SpectralSplit sp = spectral_split(s, lambda);
  const SignatureOp large = build_signature(sp.large, sp.large_gamma);
  const EvenBlocks eb = even_blocks(large);
  const Matrix neg_minus = -eb.minus;
  const std::vector<Scalar> ep = eigenvalues(eb.plus);
  const std::vector<Scalar> em = eigenvalues(neg_minus);
  if (std::isnan(theta)) {
    std::vector<Scalar> all = ep;
    all.insert(all.end(), em.begin(), em.end());
    theta = choose_agmon_angle(all);
  }
  check_det_eta_sectors(ep, theta);
  check_det_eta_sectors(em, theta);
  const Scalar xi = 0.5 * (log_det_cut(Matrix(eb.plus * eb.plus), 2.0 * theta) -
                           log_det_cut(Matrix(neg_minus * neg_minus), 2.0 * theta));
  const Scalar eta = eta_finite(ep).eta - eta_finite(em).eta;
  const double count = static_cast<double>(eb.plus.rows() - eb.minus.rows());
  return std::exp(xi - kI * kPi * eta + 0.5 * kI * kPi * count);
}

double even_odd_spectrum_residual(const SignatureOp& s) {
  const std::vector<Scalar> ev = eigenvalues(s.beven);
  std::vector<Scalar> od = eigenvalues(s.bodd);
  if (ev.size() != od.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const Scalar& z : ev) {
    auto best = std::min_element(od.begin(), od.end(), [&](const Scalar& a, const Scalar& b) {
      return std::abs(a - z) < std::abs(b - z);
    });
    worst = std::max(worst, std::abs(*best - z));
    od.erase(best);
  }
  return worst / std::max(1.0, spectral_radius(ev));
}

}  // namespace reftor
