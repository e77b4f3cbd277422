#pragma once

#include <memory>
#include <vector>

#include "reftor/gradedlinalg.hpp"

namespace reftor {

// 0 -> C^0 -> C^1 -> ... -> C^d -> 0 with partial[j] : C^j -> C^{j+1}.
struct CochainComplex {
  GradedDims dims;
  std::vector<Matrix> partial;

  int d() const { return dims.d; }
  int dim(int j) const { return (j < 0 || j > dims.d) ? 0 : dims.at(j); }
  // partial[j], or an empty map of the right shape outside 0..d-1.
  Matrix diff(int j) const;
};

struct ValidationReport {
  double max_residual = 0.0;  // max over j of |d_{j+1} d_j| / (|d_{j+1}| |d_j|)
};

// Checks shapes and d^2 = 0 up to 1e-10 relative; throws ValidationError
// naming the first offending degree.
ValidationReport validate(const CochainComplex& c);

// Per-degree bases of C^j = B^j + H^j + A^j. The default frame is orthonormal
// (B = im d_{j-1}, H = ker d_j orthogonal to B, A = (ker d_j)^perp), but the
// torsion maps accept any complement A and any basis of H.
struct CohomologyFrame {
  GradedDims dims;
  std::vector<Matrix> B, H, A;
  std::vector<int> betti;
  std::vector<int> ranks;  // rank of d_j, i.e. dim A^j
};

using FramePtr = std::shared_ptr<const CohomologyFrame>;

// Element of Det(H^0) (x) Det(H^1)^{-1} (x) ..., coefficient relative to the
// wedges of the frame's H bases.
struct CohomologyElement {
  Scalar coeff{1.0};
  FramePtr frame;
};

FramePtr cohomology_frame(const CochainComplex& c);

// Frame of c1 + c2 built from frames of the summands (block bases).
FramePtr direct_sum_frame(const CohomologyFrame& f1, const CohomologyFrame& f2);

// Parity of 1/2 sum_j dimA^j (dimA^j + (-1)^{j+1}); cross-checked against the
// Euler characteristic identity tying dim A^j to dims of C and H.
int sign_N(const CochainComplex& c, const CohomologyFrame& f);

// Factor f with phi(x) = x.coeff * f for the standard element, relative to
// the frame: (-1)^N prod_j det[d A^{j-1} | H^j | A^j]^{-(-1)^j}.
Scalar phi_factor(const CochainComplex& c, const CohomologyFrame& f);

CohomologyElement phi(const CochainComplex& c, const DetElement& x);
CohomologyElement phi(const CochainComplex& c, const FramePtr& f, const DetElement& x);

// Coefficient of e relative to another frame whose H^j span the same spaces
// (for the default frames these are the harmonic spaces). Representatives
// are projected off the target's B^j by least squares before comparison.
Scalar coefficient_in(const CohomologyElement& e, const CohomologyFrame& target);

// Same, for an arbitrary list of H representatives (columns) per degree.
Scalar change_of_harmonic_basis(const std::vector<Matrix>& from, const CohomologyFrame& target);

// Dual complex: C^j <- (C^{d-j})*, differential in degree j is the conjugate
// transpose of d_{d-j-1}. Requires odd d.
CochainComplex dual_complex(const CochainComplex& c);

// Frame of the dual complex induced by the Hermitian pairing: H^j of the
// dual uses the columns of H^{d-j}.
FramePtr dual_frame(const CochainComplex& c, const CohomologyFrame& f);

// Conjugate-linear map Det(H(d)) -> Det(H(d*)) relative to dual_frame.
CohomologyElement alpha_cohomology(const CochainComplex& c, const CohomologyElement& h);

CochainComplex direct_sum(const CochainComplex& c1, const CochainComplex& c2);

// Cohomology dimensions by rank-nullity.
std::vector<int> betti_numbers(const CochainComplex& c);

bool is_acyclic(const CochainComplex& c);

// Relative residual of phi(c1 + c2)(fuse(x1, x2)) against the fusion of
// phi(c1)(x1) and phi(c2)(x2), compared in the block frame.
double fusion_compatibility_check(const CochainComplex& c1, const DetElement& x1,
                                  const CochainComplex& c2, const DetElement& x2);

// Relative residual of phi(dual c)(alpha(x)) against alpha(phi(c)(x)).
double duality_diagram_check(const CochainComplex& c, const DetElement& x);

}  // namespace reftor
