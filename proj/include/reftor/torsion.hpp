#pragma once

#include <functional>
#include <vector>

#include "reftor/complexes.hpp"

namespace reftor {

// Involution with gamma[j] : C^j -> C^{d-j}.
struct ChiralityOp {
  std::vector<Matrix> gamma;
};

// Shapes, dim C^j = dim C^{d-j}, and gamma[d-j] * gamma[j] = I to 1e-10.
void validate(const CochainComplex& c, const ChiralityOp& g);

// Parity of 1/2 sum_{j<r} dimC^j (dimC^j + (-1)^{r+j}), r = (d+1)/2.
int sign_R(const CochainComplex& c);

// Canonical element of Det(C) built from g, relative to standard bases.
DetElement c_gamma(const CochainComplex& c, const ChiralityOp& g);

// Same element assembled from c_j = scales[j] * (standard wedge), j < r.
DetElement c_gamma_with(const CochainComplex& c, const ChiralityOp& g,
                        const std::vector<Scalar>& scales);

CohomologyElement refined_torsion(const CochainComplex& c, const ChiralityOp& g);
CohomologyElement refined_torsion(const CochainComplex& c, const ChiralityOp& g,
                                  const FramePtr& frame);

// Norm of the refined torsion in the metric on Det(H) for which phi is an
// isometry; evaluated through the frame.
double torsion_norm(const CochainComplex& c, const ChiralityOp& g);

// sum_j (-1)^j tr(blocks[j]).
Scalar supertrace(const GradedDims& dims, const std::vector<Matrix>& blocks);

// Degreewise blocks of gdot * g: on C^k it is gdot[d-k] * g[k].
std::vector<Matrix> chirality_product_blocks(const ChiralityOp& gdot, const ChiralityOp& g);

ChiralityOp direct_sum(const ChiralityOp& g1, const ChiralityOp& g2);

// Chirality of the dual complex: the adjoint of gamma[k] acts from degree k.
ChiralityOp dual_chirality(const CochainComplex& c, const ChiralityOp& g);

using ChiralityFamily = std::function<ChiralityOp(double)>;

// |central difference of log rho(t) at t0 - 1/2 Tr_s(gdot g)| with gdot also
// central-differenced. Requires an acyclic complex.
double variation_check(const ChiralityFamily& family, const CochainComplex& c,
                       double t0, double h);

// Relative difference between the torsion of (dual complex, dual chirality)
// and alpha applied to the torsion of (c, g).
double dual_torsion_check(const CochainComplex& c, const ChiralityOp& g);

// Relative difference between the torsion of the direct sum and the fusion
// of the torsions of the summands, compared in the block frame.
double direct_sum_torsion_check(const CochainComplex& c1, const ChiralityOp& g1,
                                const CochainComplex& c2, const ChiralityOp& g2);

}  // namespace reftor
