#pragma once

#include <vector>

#include "reftor/core.hpp"

namespace reftor {

// Dimensions of a graded space V^0 + ... + V^d.
struct GradedDims {
  int d = 0;
  std::vector<int> dims;

  int total() const;
  int at(int j) const { return dims.at(static_cast<std::size_t>(j)); }
  bool operator==(const GradedDims& o) const { return d == o.d && dims == o.dims; }
  bool operator!=(const GradedDims& o) const { return !(*this == o); }
};

// Throws ValidationError unless dims has d+1 nonnegative entries.
void validate(const GradedDims& g);
// Additionally requires d odd.
void require_odd(const GradedDims& g, const char* where);

// Degreewise sum and the dual grading j -> dim V^{d-j}.
GradedDims direct_sum(const GradedDims& a, const GradedDims& b);
GradedDims dual_dims(const GradedDims& g);

// Element of Det(V^0) (x) Det(V^1)^{-1} (x) ..., stored as the coefficient in
// front of e_0 (x) e_1^{-1} (x) ... where e_j is the wedge of the standard
// ordered basis of V^j. When dualized is set the element lives in the line of
// the dual graded space, relative to the dual bases in reversed grading.
struct DetElement {
  Scalar coeff{1.0};
  GradedDims dims;
  bool dualized = false;
};

// Element of the line Det(V)^{power} or Det(V*)^{power} of a single space of
// dimension dim, relative to the standard (or dual standard) wedge.
struct LineElement {
  Scalar coeff{1.0};
  int dim = 0;
  bool over_dual = false;
  int power = 1;
};

// Parity of sum_{0<=k<j<=d} dimV^j * dimW^k.
int sign_M(const GradedDims& v, const GradedDims& w);
// sign_M(v, v).
int sign_M(const GradedDims& v);

// Fusion Det(V) (x) Det(W) -> Det(V + W) with concatenated bases per degree.
DetElement fuse(const DetElement& x, const DetElement& y);

// l -> l^{-1} in the inverse line.
LineElement inverse(const LineElement& x);

// Det(V*) -> Det(V)^{-1}, conjugate-linear, dual wedge to inverse wedge.
LineElement alpha_line(const LineElement& x);
// Inverse of alpha_line: Det(V)^{-1} -> Det(V*).
LineElement alpha_line_inverse(const LineElement& x);
// Det(V) -> Det(V*)^{-1}, conjugate-linear with the factor (-1)^dim.
LineElement beta_line(const LineElement& x);

// Det(V)^{p} (x) Det(W)^{p} -> Det(V + W)^{p} with the concatenated basis.
LineElement fuse_lines(const LineElement& x, const LineElement& y);

// Conjugate-linear map Det(V) -> Det(V^) with V^j = (V^{d-j})*, d odd.
DetElement dual_graded(const DetElement& x);

// Parity of the sign picked up by dual_graded on the standard element.
int dual_graded_sign(const GradedDims& g);

}  // namespace reftor
