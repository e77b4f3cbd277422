#include "reftor/complexes.hpp"

#include <cmath>
#include <string>

namespace reftor {

Matrix CochainComplex::diff(int j) const {
  if (j < 0 || j >= dims.d) return Matrix::Zero(dim(j + 1), dim(j));
  return partial[static_cast<std::size_t>(j)];
}

ValidationReport validate(const CochainComplex& c) {
  validate(c.dims);
  if (static_cast<int>(c.partial.size()) != c.dims.d) {
    throw ValidationError("complex: expected " + std::to_string(c.dims.d) +
                          " differentials, got " + std::to_string(c.partial.size()));
  }
  for (int j = 0; j < c.dims.d; ++j) {
    const Matrix& m = c.partial[j];
    if (m.rows() != c.dim(j + 1) || m.cols() != c.dim(j)) {
      throw ValidationError("complex: differential in degree " + std::to_string(j) +
                            " has shape " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " +
                            std::to_string(c.dim(j + 1)) + "x" + std::to_string(c.dim(j)));
    }
    if (!m.allFinite()) {
      throw ValidationError("complex: non-finite entry in degree " + std::to_string(j));
    }
  }
  ValidationReport rep;
  for (int j = 0; j + 1 < c.dims.d; ++j) {
    const Matrix prod = c.partial[j + 1] * c.partial[j];
    if (prod.size() == 0) continue;
    const double scale = op_norm(c.partial[j + 1]) * op_norm(c.partial[j]);
    const double res = op_norm(prod);
    const double rel = scale > 0.0 ? res / scale : res;
    if (rel > 1e-10) {
      throw ValidationError("complex: d^2 != 0 at degree " + std::to_string(j) +
                            " (relative residual " + std::to_string(rel) + ")");
    }
    rep.max_residual = std::max(rep.max_residual, rel);
  }
  return rep;
}

namespace {

// Orthonormal basis of the part of span(k) orthogonal to span(b), where
// span(b) lies inside span(k) and both have orthonormal columns.
Matrix complement_within(const Matrix& k, const Matrix& b) {
  const Eigen::Index want = k.cols() - b.cols();
  if (want <= 0) return Matrix(k.rows(), 0);
  Matrix proj = k;
  if (b.cols() > 0) proj -= b * (b.adjoint() * k);
  Eigen::JacobiSVD<Matrix> svd(proj, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(want);
}

}  // namespace

FramePtr cohomology_frame(const CochainComplex& c) {
  validate(c);
  const int d = c.d();
  auto f = std::make_shared<CohomologyFrame>();
  f->dims = c.dims;
  f->B.resize(d + 1);
  f->H.resize(d + 1);
  f->A.resize(d + 1);
  f->betti.assign(d + 1, 0);
  f->ranks.assign(d + 1, 0);
  f->B[0] = Matrix(c.dim(0), 0);
  for (int j = 0; j <= d; ++j) {
    const Matrix dj = c.diff(j);
    const int n = c.dim(j);
    Matrix kernel;
    if (dj.rows() == 0 || n == 0) {
      f->A[j] = Matrix(n, 0);
      kernel = Matrix::Identity(n, n);
      if (j + 1 <= d) f->B[j + 1] = Matrix(c.dim(j + 1), 0);
    } else {
      Eigen::JacobiSVD<Matrix> svd(dj, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const int r = numerical_rank(dj);
      f->ranks[j] = r;
      f->A[j] = svd.matrixV().leftCols(r);
      kernel = svd.matrixV().rightCols(n - r);
      if (j + 1 <= d) f->B[j + 1] = svd.matrixU().leftCols(r);
    }
    // B^j sits inside the kernel; H^j is its orthogonal complement there
    f->H[j] = f->B[j].cols() > 0 ? complement_within(kernel, f->B[j]) : kernel;
    f->betti[j] = static_cast<int>(f->H[j].cols());
  }
  return f;
}

FramePtr direct_sum_frame(const CohomologyFrame& f1, const CohomologyFrame& f2) {
  const GradedDims dims = direct_sum(f1.dims, f2.dims);
  auto f = std::make_shared<CohomologyFrame>();
  f->dims = dims;
  const int d = dims.d;
  auto block = [](const Matrix& a, const Matrix& b) {
    Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
  };
  for (int j = 0; j <= d; ++j) {
    f->B.push_back(block(f1.B[j], f2.B[j]));
    f->H.push_back(block(f1.H[j], f2.H[j]));
    f->A.push_back(block(f1.A[j], f2.A[j]));
    f->betti.push_back(f1.betti[j] + f2.betti[j]);
    f->ranks.push_back(f1.ranks[j] + f2.ranks[j]);
  }
  return f;
}

int sign_N(const CochainComplex& c, const CohomologyFrame& f) {
  const int d = c.d();
  long long n2 = 0;  // twice N
  long long alt_c = 0;
  long long alt_h = 0;
  for (int j = 0; j <= d; ++j) {
    const long long a = static_cast<long long>(f.A[j].cols());
    n2 += a * (a + ((j % 2 == 0) ? -1 : 1));
    const int s = (j % 2 == 0) ? 1 : -1;
    alt_c += s * c.dim(j);
    alt_h += s * static_cast<long long>(f.H[j].cols());
    if (alt_c - s * a != alt_h) {
      throw std::logic_error("sign_N: Euler characteristic check failed at degree " +
                             std::to_string(j));
    }
  }
  return static_cast<int>((n2 / 2) % 2);
}

Scalar phi_factor(const CochainComplex& c, const CohomologyFrame& f) {
  const int d = c.d();
  Scalar factor(1.0);
  for (int j = 0; j <= d; ++j) {
    const int n = c.dim(j);
    Matrix basis(n, n);
    Eigen::Index col = 0;
    if (j > 0 && f.A[j - 1].cols() > 0) {
      const Matrix image = c.diff(j - 1) * f.A[j - 1];
      basis.middleCols(col, image.cols()) = image;
      col += image.cols();
    }
    basis.middleCols(col, f.H[j].cols()) = f.H[j];
    col += f.H[j].cols();
    basis.middleCols(col, f.A[j].cols()) = f.A[j];
    col += f.A[j].cols();
    if (col != n) throw ValidationError("phi: frame does not span C^" + std::to_string(j));
    const Scalar dj = det(basis);
    if (std::abs(dj) < 1e-300) {
      throw NumericalBoundaryError("phi: singular change of basis in degree " + std::to_string(j));
    }
    factor = (j % 2 == 0) ? factor / dj : factor * dj;
  }
  return static_cast<double>(sign_of(sign_N(c, f))) * factor;
}

CohomologyElement phi(const CochainComplex& c, const FramePtr& f, const DetElement& x) {
  if (x.dualized) throw ValidationError("phi: dualized element");
  if (x.dims != c.dims) throw ValidationError("phi: element and complex have different dims");
  return {x.coeff * phi_factor(c, *f), f};
}

CohomologyElement phi(const CochainComplex& c, const DetElement& x) {
  return phi(c, cohomology_frame(c), x);
}

Scalar change_of_harmonic_basis(const std::vector<Matrix>& from, const CohomologyFrame& target) {
  const int d = target.dims.d;
  if (static_cast<int>(from.size()) != d + 1) {
    throw ValidationError("change of basis: degree count mismatch");
  }
  Scalar factor(1.0);
  for (int j = 0; j <= d; ++j) {
    const Matrix& h = from[j];
    const Eigen::Index b = target.H[j].cols();
    if (h.cols() != b || h.rows() != target.H[j].rows()) {
      throw ValidationError("change of basis: betti mismatch in degree " + std::to_string(j));
    }
    if (b == 0) continue;
    Matrix closed(h.rows(), target.B[j].cols() + b);
    closed << target.B[j], target.H[j];
    const Matrix z = closed.completeOrthogonalDecomposition().solve(h);
    const double miss = (closed * z - h).norm();
    if (miss > 1e-8 * std::max(1.0, h.norm())) {
      throw ValidationError("change of basis: representatives leave ker d in degree " +
                            std::to_string(j));
    }
    const Scalar u = det(z.bottomRows(b));
    factor = (j % 2 == 0) ? factor * u : factor / u;
  }
  return factor;
}

Scalar coefficient_in(const CohomologyElement& e, const CohomologyFrame& target) {
  if (!e.frame) throw ValidationError("cohomology element without frame");
  if (e.frame->dims != target.dims) throw ValidationError("coefficient_in: dims mismatch");
  return e.coeff * change_of_harmonic_basis(e.frame->H, target);
}

CochainComplex dual_complex(const CochainComplex& c) {
  validate(c);
  require_odd(c.dims, "dual_complex");
  const int d = c.d();
  CochainComplex out;
  out.dims = dual_dims(c.dims);
  for (int j = 0; j < d; ++j) out.partial.push_back(c.partial[d - j - 1].adjoint());
  return out;
}

FramePtr dual_frame(const CochainComplex& c, const CohomologyFrame& f) {
  require_odd(c.dims, "dual_frame");
  const int d = c.d();
  auto g = std::make_shared<CohomologyFrame>();
  g->dims = dual_dims(c.dims);
  for (int j = 0; j <= d; ++j) {
    const int k = d - j;
    const Matrix& h = f.H[k];
    // dual basis under the Hermitian pairing: h (h^* h)^{-1}
    Matrix hd = h;
    if (h.cols() > 0) hd = h * (h.adjoint() * h).inverse();
    g->H.push_back(hd);
    g->B.push_back(f.A[k]);
    g->A.push_back(f.B[k]);
    g->betti.push_back(f.betti[k]);
    g->ranks.push_back(static_cast<int>(f.B[k].cols()));
  }
  return g;
}

CohomologyElement alpha_cohomology(const CochainComplex& c, const CohomologyElement& h) {
  if (!h.frame) throw ValidationError("cohomology element without frame");
  GradedDims bd{c.d(), h.frame->betti};
  const int p = dual_graded_sign(bd);
  return {static_cast<double>(sign_of(p)) * std::conj(h.coeff), dual_frame(c, *h.frame)};
}

CochainComplex direct_sum(const CochainComplex& c1, const CochainComplex& c2) {
  validate(c1);
  validate(c2);
  CochainComplex out;
  out.dims = direct_sum(c1.dims, c2.dims);
  for (int j = 0; j < out.dims.d; ++j) {
    const Matrix& a = c1.partial[j];
    const Matrix& b = c2.partial[j];
    Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    out.partial.push_back(m);
  }
  return out;
}

std::vector<int> betti_numbers(const CochainComplex& c) {
  validate(c);
  std::vector<int> b(c.d() + 1);
  std::vector<int> r(c.d() + 1, 0);
  for (int j = 0; j < c.d(); ++j) r[j] = numerical_rank(c.partial[j]);
  for (int j = 0; j <= c.d(); ++j) b[j] = c.dim(j) - r[j] - (j > 0 ? r[j - 1] : 0);
  return b;
}

bool is_acyclic(const CochainComplex& c) {
  for (int b : betti_numbers(c)) {
    if (b != 0) return false;
  }
  return true;
}

double fusion_compatibility_check(const CochainComplex& c1, const DetElement& x1,
                                  const CochainComplex& c2, const DetElement& x2) {
  const CohomologyElement h1 = phi(c1, x1);
  const CohomologyElement h2 = phi(c2, x2);
  const DetElement expected = fuse({h1.coeff, GradedDims{c1.d(), h1.frame->betti}, false},
                                   {h2.coeff, GradedDims{c2.d(), h2.frame->betti}, false});
  const FramePtr block = direct_sum_frame(*h1.frame, *h2.frame);
  const CohomologyElement got = phi(direct_sum(c1, c2), fuse(x1, x2));
  return std::abs(coefficient_in(got, *block) - expected.coeff) / std::abs(expected.coeff);
}

double duality_diagram_check(const CochainComplex& c, const DetElement& x) {
  const CochainComplex dc = dual_complex(c);
  // the dual standard bases are the standard bases of the dual complex
  DetElement y = dual_graded(x);
  y.dualized = false;
  const CohomologyElement got = phi(dc, y);
  const CohomologyElement expected = alpha_cohomology(c, phi(c, x));
  return std::abs(coefficient_in(got, *expected.frame) - expected.coeff) /
         std::abs(expected.coeff);
}

}  // namespace reftor
