#include "reftor/core.hpp"

#include <cstdlib>

namespace reftor {

double default_tolerance() {
  const char* env = std::getenv("REFTOR_TOL");
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return 1e-9;
}

Scalar det(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("det: matrix is not square");
  if (m.rows() == 0) return Scalar(1.0);
  return m.partialPivLu().determinant();
}

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

double rank_threshold(double sigma_max) {
  return sigma_max > 0.0 ? 1e-8 * sigma_max : 1e-12;
}

}  // namespace

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double thr = rank_threshold(s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) ++r;
  }
  return r;
}

Matrix kernel_basis(const Matrix& m) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const int r = numerical_rank(m);
  return svd.matrixV().rightCols(n - r);
}

}  // namespace reftor
