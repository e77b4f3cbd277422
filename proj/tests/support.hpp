#pragma once

#include <initializer_list>
#include <vector>

#include "reftor/torsion.hpp"

namespace testing {

using reftor::ChiralityOp;
using reftor::CochainComplex;
using reftor::Matrix;
using reftor::Scalar;

inline Matrix mat(int rows, int cols, std::initializer_list<Scalar> entries) {
  Matrix m(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return m;
}

inline Matrix scalar(Scalar z) { return mat(1, 1, {z}); }

// Complex with zero differentials of the given dims.
inline CochainComplex zero_complex(std::vector<int> dims) {
  CochainComplex c;
  c.dims.d = static_cast<int>(dims.size()) - 1;
  c.dims.dims = dims;
  for (int j = 0; j < c.dims.d; ++j) {
    c.partial.push_back(Matrix::Zero(dims[j + 1], dims[j]));
  }
  return c;
}

// d = 1, C^0 = C^1 = C, differential z.
inline CochainComplex line_complex(Scalar z) {
  CochainComplex c = zero_complex({1, 1});
  c.partial[0](0, 0) = z;
  return c;
}

// gamma_0 = [w], gamma_1 = [1/w].
inline ChiralityOp line_chirality(Scalar w) {
  return ChiralityOp{{scalar(w), scalar(1.0 / w)}};
}

}  // namespace testing
