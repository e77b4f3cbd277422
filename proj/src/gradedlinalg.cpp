#include "reftor/gradedlinalg.hpp"

#include <string>

namespace reftor {

int GradedDims::total() const {
  int t = 0;
  for (int n : dims) t += n;
  return t;
}

void validate(const GradedDims& g) {
  if (g.d < 0) throw ValidationError("graded dims: negative top degree");
  if (static_cast<int>(g.dims.size()) != g.d + 1) {
    throw ValidationError("graded dims: expected " + std::to_string(g.d + 1) +
                          " entries, got " + std::to_string(g.dims.size()));
  }
  for (int n : g.dims) {
    if (n < 0) throw ValidationError("graded dims: negative dimension");
  }
}

void require_odd(const GradedDims& g, const char* where) {
  validate(g);
  if (g.d % 2 == 0) {
    throw ValidationError(std::string(where) + ": top degree must be odd");
  }
}

GradedDims direct_sum(const GradedDims& a, const GradedDims& b) {
  validate(a);
  validate(b);
  if (a.d != b.d) throw ValidationError("direct sum: degree mismatch");
  GradedDims s{a.d, a.dims};
  for (int j = 0; j <= a.d; ++j) s.dims[j] += b.dims[j];
  return s;
}

GradedDims dual_dims(const GradedDims& g) {
  validate(g);
  GradedDims h{g.d, std::vector<int>(g.dims.rbegin(), g.dims.rend())};
  return h;
}

int sign_M(const GradedDims& v, const GradedDims& w) {
  validate(v);
  validate(w);
  if (v.d != w.d) throw ValidationError("sign_M: degree mismatch");
  // sum over j of dimV^j * (dimW^0 + ... + dimW^{j-1}), kept mod 2
  long long acc = 0;
  long long prefix = 0;
  for (int j = 0; j <= v.d; ++j) {
    acc += static_cast<long long>(v.dims[j] % 2) * (prefix % 2);
    prefix += w.dims[j];
  }
  return static_cast<int>(acc % 2);
}

int sign_M(const GradedDims& v) { return sign_M(v, v); }

DetElement fuse(const DetElement& x, const DetElement& y) {
  if (x.dualized || y.dualized) {
    throw ValidationError("fuse: dualized inputs are not supported");
  }
  const int m = sign_M(x.dims, y.dims);
  DetElement out;
  out.dims = direct_sum(x.dims, y.dims);
  out.coeff = x.coeff * y.coeff * static_cast<double>(sign_of(m));
  return out;
}

LineElement inverse(const LineElement& x) {
  if (x.coeff == Scalar(0.0)) throw ValidationError("inverse of zero line element");
  return {Scalar(1.0) / x.coeff, x.dim, x.over_dual, -x.power};
}

LineElement fuse_lines(const LineElement& x, const LineElement& y) {
  if (x.over_dual != y.over_dual || x.power != y.power) {
    throw ValidationError("fuse_lines: lines of different kinds");
  }
  return {x.coeff * y.coeff, x.dim + y.dim, x.over_dual, x.power};
}

LineElement alpha_line(const LineElement& x) {
  if (!x.over_dual || x.power != 1 || x.dim < 0) {
    throw ValidationError("alpha_line: expects an element of Det(V*)");
  }
  return {std::conj(x.coeff), x.dim, false, -1};
}

LineElement alpha_line_inverse(const LineElement& x) {
  if (x.over_dual || x.power != -1 || x.dim < 0) {
    throw ValidationError("alpha_line_inverse: expects an element of Det(V)^{-1}");
  }
  return {std::conj(x.coeff), x.dim, true, 1};
}

LineElement beta_line(const LineElement& x) {
  if (x.over_dual || x.power != 1 || x.dim < 0) {
    throw ValidationError("beta_line: expects an element of Det(V)");
  }
  return {static_cast<double>(sign_of(x.dim)) * std::conj(x.coeff), x.dim, true, -1};
}

int dual_graded_sign(const GradedDims& g) {
  require_odd(g, "dual_graded");
  // even degrees go through beta and carry (-1)^{dim}; odd degrees go
  // through alpha^{-1} on the standard inverse wedge and carry nothing
  int p = sign_M(g);
  for (int j = 0; j <= g.d; j += 2) p += g.dims[j];
  return p % 2;
}

DetElement dual_graded(const DetElement& x) {
  const int p = dual_graded_sign(x.dims);
  DetElement out;
  out.dims = dual_dims(x.dims);
  out.dualized = !x.dualized;
  out.coeff = static_cast<double>(sign_of(p)) * std::conj(x.coeff);
  return out;
}

}  // namespace reftor
