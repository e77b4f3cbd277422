#include "reftor/torsion.hpp"

#include <cmath>
#include <string>

namespace reftor {

void validate(const CochainComplex& c, const ChiralityOp& g) {
  validate(c);
  require_odd(c.dims, "chirality");
  const int d = c.d();
  if (static_cast<int>(g.gamma.size()) != d + 1) {
    throw ValidationError("chirality: expected " + std::to_string(d + 1) + " blocks");
  }
  for (int j = 0; j <= d; ++j) {
    const Matrix& m = g.gamma[j];
    if (m.rows() != c.dim(d - j) || m.cols() != c.dim(j)) {
      throw ValidationError("chirality: block " + std::to_string(j) + " has wrong shape");
    }
    if (c.dim(j) != c.dim(d - j)) {
      throw ValidationError("chirality: dim C^j != dim C^{d-j} for j = " + std::to_string(j));
    }
    if (!m.allFinite()) throw ValidationError("chirality: non-finite entry");
  }
  for (int j = 0; j <= d; ++j) {
    const int n = c.dim(j);
    if (n == 0) continue;
    const Matrix prod = g.gamma[d - j] * g.gamma[j];
    const double scale = std::max(1.0, op_norm(g.gamma[d - j]) * op_norm(g.gamma[j]));
    const double res = op_norm(prod - Matrix::Identity(n, n));
    if (res > 1e-10 * scale) {
      throw ValidationError("chirality: not an involution on C^" + std::to_string(j) +
                            " (residual " + std::to_string(res) + ")");
    }
  }
}

int sign_R(const CochainComplex& c) {
  require_odd(c.dims, "sign_R");
  const int r = (c.d() + 1) / 2;
  long long twice = 0;
  for (int j = 0; j < r; ++j) {
    const long long n = c.dim(j);
    twice += n * (n + (((r + j) % 2 == 0) ? 1 : -1));
  }
  return static_cast<int>((twice / 2) % 2);
}

DetElement c_gamma_with(const CochainComplex& c, const ChiralityOp& g,
                        const std::vector<Scalar>& scales) {
  validate(c, g);
  const int d = c.d();
  const int r = (d + 1) / 2;
  if (static_cast<int>(scales.size()) != r) throw ValidationError("c_gamma: need r scales");
  Scalar coeff = static_cast<double>(sign_of(sign_R(c)));
  for (int j = 0; j < r; ++j) {
    const Scalar t = scales[j];
    if (t == Scalar(0.0)) throw ValidationError("c_gamma: zero scale");
    // slot j holds c_j^{(-1)^j}; slot d-j holds (Gamma c_j)^{(-1)^{d-j}}
    const Scalar image = t * det(g.gamma[j]);
    coeff *= (j % 2 == 0) ? t : Scalar(1.0) / t;
    coeff *= ((d - j) % 2 == 0) ? image : Scalar(1.0) / image;
  }
  return {coeff, c.dims, false};
}

DetElement c_gamma(const CochainComplex& c, const ChiralityOp& g) {
  return c_gamma_with(c, g, std::vector<Scalar>((c.d() + 1) / 2, Scalar(1.0)));
}

CohomologyElement refined_torsion(const CochainComplex& c, const ChiralityOp& g,
                                  const FramePtr& frame) {
  return phi(c, frame, c_gamma(c, g));
}

CohomologyElement refined_torsion(const CochainComplex& c, const ChiralityOp& g) {
  return refined_torsion(c, g, cohomology_frame(c));
}

double torsion_norm(const CochainComplex& c, const ChiralityOp& g) {
  const FramePtr f = cohomology_frame(c);
  const CohomologyElement rho = refined_torsion(c, g, f);
  // the phi-isometric metric assigns the frame wedge the norm 1/|phi(1)|
  return std::abs(rho.coeff) / std::abs(phi_factor(c, *f));
}

Scalar supertrace(const GradedDims& dims, const std::vector<Matrix>& blocks) {
  validate(dims);
  if (static_cast<int>(blocks.size()) != dims.d + 1) {
    throw ValidationError("supertrace: expected one block per degree");
  }
  Scalar s(0.0);
  for (int j = 0; j <= dims.d; ++j) {
    const Matrix& b = blocks[j];
    if (b.rows() != dims.at(j) || b.cols() != dims.at(j)) {
      throw ValidationError("supertrace: block " + std::to_string(j) + " has wrong shape");
    }
    if (b.size() == 0) continue;
    s += (j % 2 == 0) ? b.trace() : -b.trace();
  }
  return s;
}

std::vector<Matrix> chirality_product_blocks(const ChiralityOp& gdot, const ChiralityOp& g) {
  const int d = static_cast<int>(g.gamma.size()) - 1;
  std::vector<Matrix> out;
  for (int k = 0; k <= d; ++k) out.push_back(gdot.gamma[d - k] * g.gamma[k]);
  return out;
}

ChiralityOp direct_sum(const ChiralityOp& g1, const ChiralityOp& g2) {
  if (g1.gamma.size() != g2.gamma.size()) throw ValidationError("direct sum: length mismatch");
  ChiralityOp out;
  for (std::size_t j = 0; j < g1.gamma.size(); ++j) {
    const Matrix& a = g1.gamma[j];
    const Matrix& b = g2.gamma[j];
    Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    out.gamma.push_back(m);
  }
  return out;
}

ChiralityOp dual_chirality(const CochainComplex& c, const ChiralityOp& g) {
  validate(c, g);
  ChiralityOp out;
  for (const Matrix& m : g.gamma) out.gamma.push_back(m.adjoint());
  return out;
}

double variation_check(const ChiralityFamily& family, const CochainComplex& c,
                       double t0, double h) {
  if (!is_acyclic(c)) throw ValidationError("variation_check: complex is not acyclic");
  if (!(h > 0.0)) throw ValidationError("variation_check: step must be positive");
  const FramePtr f = cohomology_frame(c);
  const ChiralityOp gp = family(t0 + h);
  const ChiralityOp gm = family(t0 - h);
  const ChiralityOp g0 = family(t0);
  const Scalar rp = refined_torsion(c, gp, f).coeff;
  const Scalar rm = refined_torsion(c, gm, f).coeff;
  const Scalar lhs = std::log(rp / rm) / (2.0 * h);
  ChiralityOp gdot;
  for (std::size_t j = 0; j < g0.gamma.size(); ++j) {
    gdot.gamma.push_back((gp.gamma[j] - gm.gamma[j]) / (2.0 * h));
  }
  const Scalar rhs = 0.5 * supertrace(c.dims, chirality_product_blocks(gdot, g0));
  return std::abs(lhs - rhs);
}

double dual_torsion_check(const CochainComplex& c, const ChiralityOp& g) {
  const CochainComplex dc = dual_complex(c);
  const ChiralityOp dg = dual_chirality(c, g);
  const CohomologyElement rho = refined_torsion(c, g);
  const CohomologyElement expected = alpha_cohomology(c, rho);
  const CohomologyElement got = refined_torsion(dc, dg);
  const Scalar lhs = coefficient_in(got, *expected.frame);
  return std::abs(lhs - expected.coeff) / std::abs(expected.coeff);
}

double direct_sum_torsion_check(const CochainComplex& c1, const ChiralityOp& g1,
                                const CochainComplex& c2, const ChiralityOp& g2) {
  const CochainComplex cs = direct_sum(c1, c2);
  const ChiralityOp gs = direct_sum(g1, g2);
  const CohomologyElement r1 = refined_torsion(c1, g1);
  const CohomologyElement r2 = refined_torsion(c2, g2);
  const DetElement fused = fuse({r1.coeff, GradedDims{c1.d(), r1.frame->betti}, false},
                                {r2.coeff, GradedDims{c2.d(), r2.frame->betti}, false});
  const FramePtr block = direct_sum_frame(*r1.frame, *r2.frame);
  const CohomologyElement rs = refined_torsion(cs, gs);
  const Scalar got = coefficient_in(rs, *block);
  return std::abs(got - fused.coeff) / std::abs(fused.coeff);
}

}  // namespace reftor
