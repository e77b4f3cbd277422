#include <doctest.h>

#include <cmath>

#include "reftor/torsion.hpp"
#include "reftor/workbench.hpp"
#include "support.hpp"

using namespace reftor;
using testing::line_chirality;
using testing::line_complex;
using testing::mat;
using testing::scalar;
using testing::zero_complex;

TEST_CASE("sign_R parities") {
  CHECK(sign_R(zero_complex({1, 1})) == 0);
  CHECK(sign_R(zero_complex({2, 2})) == 1);
  CHECK(sign_R(zero_complex({0, 0, 0, 0})) == 0);
  CHECK_THROWS_AS(sign_R(zero_complex({1, 1, 1})), ValidationError);
}

TEST_CASE("c_gamma on lines") {
  CHECK(c_gamma(line_complex(2.0), line_chirality(1.0)).coeff == Scalar(1.0));
  const Scalar w(2.0, 1.0);
  CHECK(std::abs(c_gamma(line_complex(2.0), line_chirality(w)).coeff - 1.0 / w) <= 1e-15);
}

TEST_CASE("c_gamma does not depend on the chosen wedges") {
  Rng rng(31);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Instance in = gen_random(s, 3, Profile{3, 1, false});
    const Scalar base = c_gamma(in.complex, in.chirality).coeff;
    const std::vector<Scalar> scales{rng.complex_in_annulus(0.5, 2.0), rng.complex_in_annulus(0.5, 2.0)};
    const Scalar scaled = c_gamma_with(in.complex, in.chirality, scales).coeff;
    CHECK(std::abs(scaled - base) <= 1e-12 * std::abs(base));
  }
}

TEST_CASE("refined torsion hand values") {
  CHECK(std::abs(refined_torsion(line_complex(2.0), line_chirality(1.0)).coeff - 2.0) <= 1e-15);
  CHECK(std::abs(refined_torsion(line_complex(2.0), line_chirality(2.0)).coeff - 1.0) <= 1e-15);
  const CohomologyElement h = refined_torsion(zero_complex({1, 1}), line_chirality(1.0));
  CHECK(h.coeff == Scalar(1.0));
  CHECK(h.frame->betti == std::vector<int>{1, 1});
}

TEST_CASE("torsion norm") {
  CHECK(std::abs(torsion_norm(line_complex(2.0), line_chirality(1.0)) - 1.0) <= 1e-15);
  CHECK(std::abs(torsion_norm(line_complex(2.0), line_chirality(2.0)) - 0.5) <= 1e-15);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Instance in = gen_random(s, 3, Profile{3, static_cast<int>(s % 3), true});
    CHECK(std::abs(torsion_norm(in.complex, in.chirality) - 1.0) <= 1e-10);
  }
}

TEST_CASE("chirality validation") {
  CHECK_THROWS_AS(validate(line_complex(1.0), ChiralityOp{{scalar(2.0), scalar(2.0)}}),
                  ValidationError);
  CHECK_THROWS_AS(validate(zero_complex({1, 2}), ChiralityOp{{scalar(1.0), scalar(1.0)}}),
                  ValidationError);
}

TEST_CASE("supertrace") {
  const std::vector<Matrix> id11{Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  CHECK(supertrace(zero_complex({1, 1}).dims, id11) == Scalar(0.0));
  const std::vector<Matrix> id21{Matrix::Identity(2, 2), Matrix::Identity(1, 1)};
  CHECK(supertrace(zero_complex({2, 1}).dims, id21) == Scalar(1.0));
  Rng rng(32);
  const CochainComplex c = zero_complex({2, 3, 1, 4});
  std::vector<Matrix> blocks;
  Scalar loop = 0.0;
  for (int j = 0; j <= 3; ++j) {
    Matrix m(c.dim(j), c.dim(j));
    for (int a = 0; a < m.rows(); ++a) {
      for (int b = 0; b < m.cols(); ++b) m(a, b) = rng.complex_normal();
    }
    for (int a = 0; a < m.rows(); ++a) loop += (j % 2 == 0 ? 1.0 : -1.0) * m(a, a);
    blocks.push_back(m);
  }
  CHECK(std::abs(supertrace(c.dims, blocks) - loop) <= 1e-14);
  CHECK_THROWS_AS(supertrace(c.dims, id11), ValidationError);
}

TEST_CASE("variation of the log torsion") {
  const CochainComplex c = line_complex(2.0);
  const ChiralityFamily constant = [](double) { return line_chirality(1.0); };
  CHECK(variation_check(constant, c, 0.3, 1e-2) <= 1e-12);
  // log rho = log 2 - t and 1/2 Tr_s(gdot g) = -1 up to the difference quotient
  const ChiralityFamily exponential = [](double t) { return line_chirality(std::exp(t)); };
  CHECK(variation_check(exponential, c, 0.3, 1e-3) <= 1e-6);
  CHECK_THROWS_AS(variation_check(constant, zero_complex({1, 1}), 0.0, 1e-2), ValidationError);
}

TEST_CASE("torsion of the dual complex") {
  const Scalar z(2.0, 0.5);
  const CochainComplex c = line_complex(z);
  const ChiralityOp g = line_chirality(1.0);
  const Scalar dual = refined_torsion(dual_complex(c), dual_chirality(c, g)).coeff;
  CHECK(std::abs(dual - std::conj(z)) <= 1e-15);
  CHECK(dual_torsion_check(c, g) <= 1e-15);
  CHECK(dual_torsion_check(zero_complex({2, 2}), ChiralityOp{{mat(2, 2, {0.0, 1.0, 1.0, 0.0}),
                                                              mat(2, 2, {0.0, 1.0, 1.0, 0.0})}}) <=
        1e-10);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Instance in = gen_random(s, 3, Profile{3, static_cast<int>(s % 3), false});
    CHECK(dual_torsion_check(in.complex, in.chirality) <= 1e-8);
  }
}

TEST_CASE("torsion of a direct sum") {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Instance a = gen_random(s, 3, Profile{2, 1, false});
    const Instance b = gen_random(s + 50, 3, Profile{2, static_cast<int>(s % 2), false});
    CHECK(direct_sum_torsion_check(a.complex, a.chirality, b.complex, b.chirality) <= 1e-9);
  }
}
