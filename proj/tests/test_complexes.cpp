#include <doctest.h>

#include <memory>
#include <string>

#include "reftor/complexes.hpp"
#include "reftor/workbench.hpp"
#include "support.hpp"

using namespace reftor;
using testing::line_complex;
using testing::mat;
using testing::zero_complex;

namespace {

// d = 3, dims (1, 2, 2, 1) with d_0, d_1 of rank 1 and d_2 = 0.
CochainComplex rank_one_complex() {
  CochainComplex c = zero_complex({1, 2, 2, 1});
  c.partial[0] = mat(2, 1, {1.0, 0.0});
  c.partial[1] = mat(2, 2, {0.0, 1.0, 0.0, 0.0});
  return c;
}

std::vector<int> rank_nullity_betti(const CochainComplex& c) {
  std::vector<int> rank(static_cast<std::size_t>(c.d() + 1), 0);
  for (int j = 0; j < c.d(); ++j) {
    if (c.partial[j].size() == 0) continue;
    rank[static_cast<std::size_t>(j)] = static_cast<int>(Eigen::FullPivLU<Matrix>(c.partial[j]).rank());
  }
  std::vector<int> b;
  for (int j = 0; j <= c.d(); ++j) {
    const int prev = j > 0 ? rank[static_cast<std::size_t>(j - 1)] : 0;
    b.push_back(c.dim(j) - rank[static_cast<std::size_t>(j)] - prev);
  }
  return b;
}

CochainComplex random_complex(std::uint64_t seed, int harmonic) {
  return gen_random(seed, 3, Profile{3, harmonic, false}).complex;
}

}  // namespace

TEST_CASE("validate reports residuals and names the failing degree") {
  CHECK(validate(zero_complex({2, 3, 1, 2})).max_residual == 0.0);
  CHECK(validate(line_complex(2.0)).max_residual == 0.0);
  CochainComplex bad = zero_complex({1, 1, 1, 1});
  bad.partial[1](0, 0) = 1.0;
  bad.partial[2](0, 0) = 1.0;
  bad.partial[0](0, 0) = 1.0;
  try {
    validate(bad);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("degree 0") != std::string::npos);
  }
  CochainComplex shape = zero_complex({1, 2});
  shape.partial[0] = Matrix::Zero(1, 1);
  CHECK_THROWS_AS(validate(shape), ValidationError);
}

TEST_CASE("cohomology frame dimensions") {
  const FramePtr f = cohomology_frame(line_complex(2.0));
  CHECK(f->betti == std::vector<int>{0, 0});
  CHECK(f->A[0].cols() == 1);
  CHECK(cohomology_frame(zero_complex({1, 1}))->betti == std::vector<int>{1, 1});
  const CochainComplex c = rank_one_complex();
  CHECK(cohomology_frame(c)->betti == rank_nullity_betti(c));
  CHECK(cohomology_frame(c)->betti == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("cohomology frame is orthonormal and spans every degree") {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const CochainComplex c = random_complex(s, 2);
    const FramePtr f = cohomology_frame(c);
    CHECK(f->betti == rank_nullity_betti(c));
    for (int j = 0; j <= c.d(); ++j) {
      Matrix q(c.dim(j), f->B[j].cols() + f->H[j].cols() + f->A[j].cols());
      q.leftCols(f->B[j].cols()) = f->B[j];
      q.middleCols(f->B[j].cols(), f->H[j].cols()) = f->H[j];
      q.rightCols(f->A[j].cols()) = f->A[j];
      REQUIRE(q.cols() == c.dim(j));
      const Matrix id = Matrix::Identity(c.dim(j), c.dim(j));
      CHECK((q.adjoint() * q - id).norm() <= 1e-10);
      CHECK((c.diff(j) * f->H[j]).norm() <= 1e-10 * std::max(1.0, c.diff(j).norm()));
    }
  }
}

TEST_CASE("sign_N parities") {
  CHECK(sign_N(line_complex(2.0), *cohomology_frame(line_complex(2.0))) == 0);
  CochainComplex two = zero_complex({2, 2});
  two.partial[0] = mat(2, 2, {1.0, 2.0, 3.0, 5.0});
  CHECK(sign_N(two, *cohomology_frame(two)) == 1);
  const CochainComplex z = zero_complex({3, 1, 2, 4});
  CHECK(sign_N(z, *cohomology_frame(z)) == 0);
}

TEST_CASE("phi on hand examples") {
  const CochainComplex c = line_complex(3.0);
  CHECK(std::abs(phi(c, DetElement{1.0, c.dims}).coeff - 3.0) <= 1e-15);
  const CochainComplex z = zero_complex({2, 1, 1, 2});
  const CohomologyElement e = phi(z, DetElement{Scalar(2.5, -1.0), z.dims});
  CHECK(e.coeff == Scalar(2.5, -1.0));
  CHECK(e.frame->H[0] == Matrix::Identity(2, 2));
  CHECK_THROWS_AS(phi(c, DetElement{1.0, zero_complex({1, 1, 1, 1}).dims}), ValidationError);
}

TEST_CASE("phi does not depend on the complement basis") {
  Rng rng(21);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const CochainComplex c = random_complex(s, 1);
    const FramePtr f = cohomology_frame(c);
    auto rotated = std::make_shared<CohomologyFrame>(*f);
    for (int j = 0; j <= c.d(); ++j) {
      rotated->A[j] = f->A[j] * random_unitary(rng, static_cast<int>(f->A[j].cols()));
    }
    const DetElement x{rng.complex_normal(), c.dims};
    const Scalar a = phi(c, f, x).coeff;
    const Scalar b = phi(c, rotated, x).coeff;
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  }
}

TEST_CASE("phi transforms by the harmonic rotation determinants") {
  Rng rng(22);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const CochainComplex c = random_complex(s, 2);
    const FramePtr f = cohomology_frame(c);
    auto rotated = std::make_shared<CohomologyFrame>(*f);
    Scalar expected = phi(c, f, DetElement{1.0, c.dims}).coeff;
    for (int j = 0; j <= c.d(); ++j) {
      const Matrix u = random_unitary(rng, static_cast<int>(f->H[j].cols()));
      rotated->H[j] = f->H[j] * u;
      expected *= j % 2 == 0 ? 1.0 / det(u) : det(u);
    }
    const Scalar got = phi(c, rotated, DetElement{1.0, c.dims}).coeff;
    CHECK(std::abs(got - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("dual complex") {
  const CochainComplex c = line_complex(Scalar(2.0, 3.0));
  CHECK(dual_complex(c).partial[0](0, 0) == Scalar(2.0, -3.0));
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const CochainComplex r = random_complex(s, 2);
    const CochainComplex rr = dual_complex(dual_complex(r));
    CHECK(rr.dims == r.dims);
    for (int j = 0; j < r.d(); ++j) CHECK(rr.partial[j] == r.partial[j]);
    std::vector<int> b = betti_numbers(r);
    std::reverse(b.begin(), b.end());
    CHECK(betti_numbers(dual_complex(r)) == b);
  }
  CHECK_THROWS_AS(dual_complex(zero_complex({1, 1, 1})), ValidationError);
}

TEST_CASE("direct sum of complexes") {
  const CochainComplex c = rank_one_complex();
  const CochainComplex s = direct_sum(c, zero_complex({0, 0, 0, 0}));
  CHECK(s.dims == c.dims);
  for (int j = 0; j < 3; ++j) CHECK(s.partial[j] == c.partial[j]);
  const CochainComplex a = random_complex(3, 1);
  const CochainComplex b = random_complex(4, 2);
  const CochainComplex ab = direct_sum(a, b);
  const std::vector<int> ba = betti_numbers(a);
  const std::vector<int> bb = betti_numbers(b);
  for (int j = 0; j <= 3; ++j) {
    CHECK(ab.dim(j) == a.dim(j) + b.dim(j));
    CHECK(betti_numbers(ab)[static_cast<std::size_t>(j)] ==
          ba[static_cast<std::size_t>(j)] + bb[static_cast<std::size_t>(j)]);
  }
  CHECK_THROWS_AS(direct_sum(line_complex(1.0), c), ValidationError);
}

TEST_CASE("phi is compatible with fusion and duality") {
  Rng rng(23);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const CochainComplex c1 = random_complex(s, static_cast<int>(s % 3));
    const CochainComplex c2 = random_complex(s + 100, 1);
    const DetElement x1{rng.complex_normal(), c1.dims};
    const DetElement x2{rng.complex_normal(), c2.dims};
    CHECK(fusion_compatibility_check(c1, x1, c2, x2) <= 1e-9);
    CHECK(duality_diagram_check(c1, x1) <= 1e-9);
  }
}
