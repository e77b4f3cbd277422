#include <doctest.h>

#include <algorithm>
#include <vector>

#include "reftor/gradedlinalg.hpp"
#include "reftor/workbench.hpp"

using namespace reftor;

namespace {

GradedDims graded(std::vector<int> dims) {
  return GradedDims{static_cast<int>(dims.size()) - 1, dims};
}

GradedDims random_dims(Rng& rng, int d) {
  GradedDims g{d, {}};
  for (int j = 0; j <= d; ++j) g.dims.push_back(rng.uniform_int(0, 4));
  return g;
}

// Sign of reordering the lines Det(V^0) .. Det(V^d) Det(W^0) .. Det(W^d) into
// Det(V^0) Det(W^0) Det(V^1) Det(W^1) .. by adjacent swaps, each costing
// (-1)^{parity a * parity b}.
int koszul_interleave_sign(const GradedDims& v, const GradedDims& w) {
  struct Token {
    int degree, owner, parity;
  };
  std::vector<Token> tokens;
  for (int j = 0; j <= v.d; ++j) tokens.push_back({j, 0, v.at(j) % 2});
  for (int j = 0; j <= w.d; ++j) tokens.push_back({j, 1, w.at(j) % 2});
  auto before = [](const Token& a, const Token& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.owner < b.owner;
  };
  int sign = 1;
  for (std::size_t pass = 0; pass < tokens.size(); ++pass) {
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (before(tokens[i + 1], tokens[i])) {
        if (tokens[i].parity * tokens[i + 1].parity == 1) sign = -sign;
        std::swap(tokens[i], tokens[i + 1]);
      }
    }
  }
  return sign;
}

// Sign of the permutation taking the concatenated basis (w_1..w_m, v_1..v_n)
// to (v_1..v_n, w_1..w_m), by counting inversions.
int block_swap_sign(int n, int m) {
  std::vector<int> perm;
  for (int i = 0; i < m; ++i) perm.push_back(n + i);
  for (int i = 0; i < n; ++i) perm.push_back(i);
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
  }
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

TEST_CASE("sign_M hand values") {
  CHECK(sign_M(graded({1, 1}), graded({1, 1})) == 1);
  CHECK(sign_M(graded({3, 5}), graded({0, 0})) == 0);
  CHECK(sign_M(graded({0, 0, 0, 0}), graded({2, 1, 1, 2})) == 0);
  CHECK(sign_M(graded({2, 1, 1, 2}), graded({1, 0, 3, 1})) == 0);
  CHECK_THROWS_AS(sign_M(graded({1, 1}), graded({1, 1, 1, 1})), ValidationError);
}

TEST_CASE("sign_M matches the double sum") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const GradedDims v = random_dims(rng, 3);
    const GradedDims w = random_dims(rng, 3);
    int sum = 0;
    for (int j = 0; j <= 3; ++j) {
      for (int k = 0; k < j; ++k) sum += v.at(j) * w.at(k);
    }
    CHECK(sign_M(v, w) == sum % 2);
  }
}

TEST_CASE("fuse of two lines in degrees 0 and 1") {
  const DetElement x{1.0, graded({1, 1})};
  const DetElement f = fuse(x, x);
  CHECK(f.coeff == Scalar(-1.0));
  CHECK(f.dims == graded({2, 2}));
}

TEST_CASE("fuse with the empty graded space is the identity") {
  const DetElement x{Scalar(2.0, -1.0), graded({2, 3, 1, 0})};
  const DetElement e{1.0, graded({0, 0, 0, 0})};
  CHECK(fuse(x, e).coeff == x.coeff);
  CHECK(fuse(e, x).coeff == x.coeff);
}

TEST_CASE("fuse sign equals the line reordering sign") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const int d = t % 2 == 0 ? 1 : 3;
    const GradedDims v = random_dims(rng, d);
    const GradedDims w = random_dims(rng, d);
    const DetElement x{rng.complex_normal(), v};
    const DetElement y{rng.complex_normal(), w};
    const Scalar expected = x.coeff * y.coeff * static_cast<double>(koszul_interleave_sign(v, w));
    CHECK(std::abs(fuse(x, y).coeff - expected) <= 1e-15 * std::abs(expected));
  }
}

TEST_CASE("fuse is graded commutative after the basis permutation") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const GradedDims v = random_dims(rng, 3);
    const GradedDims w = random_dims(rng, 3);
    const DetElement x{rng.complex_normal(), v};
    const DetElement y{rng.complex_normal(), w};
    Scalar yx = fuse(y, x).coeff;
    for (int q = 0; q <= 3; ++q) yx *= static_cast<double>(block_swap_sign(v.at(q), w.at(q)));
    const int koszul = sign_of(static_cast<long long>(v.total()) * w.total());
    CHECK(std::abs(fuse(x, y).coeff - static_cast<double>(koszul) * yx) <= 1e-15 * std::abs(yx));
  }
}

TEST_CASE("fuse rejects mismatched or dualized input") {
  const DetElement x{1.0, graded({1, 1})};
  const DetElement y{1.0, graded({1, 1, 1, 1})};
  CHECK_THROWS_AS(fuse(x, y), ValidationError);
  DetElement z = x;
  z.dualized = true;
  CHECK_THROWS_AS(fuse(z, x), ValidationError);
}

TEST_CASE("alpha and beta on single lines") {
  const LineElement i_line{Scalar(0.0, 1.0), 1, true, 1};
  CHECK(alpha_line(i_line).coeff == Scalar(0.0, -1.0));
  CHECK(alpha_line(i_line).power == -1);
  CHECK(!alpha_line(i_line).over_dual);
  CHECK(alpha_line(LineElement{1.0, 5, true, 1}).coeff == Scalar(1.0));
  CHECK(alpha_line(LineElement{Scalar(2.0, 3.0), 4, true, 1}).coeff == Scalar(2.0, -3.0));
  CHECK(beta_line(LineElement{1.0, 1, false, 1}).coeff == Scalar(-1.0));
  CHECK(beta_line(LineElement{1.0, 2, false, 1}).coeff == Scalar(1.0));
}

TEST_CASE("alpha inverse of the inverse line agrees with signed beta") {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(0, 6);
    const LineElement v{rng.complex_normal(), n, false, 1};
    const LineElement lhs = inverse(alpha_line_inverse(inverse(v)));
    const LineElement rhs = beta_line(v);
    CHECK(lhs.over_dual == rhs.over_dual);
    CHECK(lhs.power == rhs.power);
    const Scalar signed_rhs = static_cast<double>(sign_of(n)) * rhs.coeff;
    CHECK(std::abs(lhs.coeff - signed_rhs) <= 1e-14 * std::abs(v.coeff));
  }
}

TEST_CASE("dual_graded on one-dimensional degrees") {
  // M = 1 and the beta factor in degree 0 contributes (-1)^1
  const DetElement x{Scalar(1.0, 2.0), graded({1, 1})};
  const DetElement y = dual_graded(x);
  CHECK(y.coeff == Scalar(1.0, -2.0));
  CHECK(y.dualized);
  CHECK(dual_graded(DetElement{1.0, graded({0, 0, 0, 0})}).coeff == Scalar(1.0));
  CHECK_THROWS_AS(dual_graded(DetElement{1.0, graded({1, 1, 1})}), ValidationError);
}

TEST_CASE("dual_graded applied twice returns the element up to its two signs") {
  Rng rng(15);
  for (int t = 0; t < 50; ++t) {
    const GradedDims g = random_dims(rng, 3);
    const DetElement x{rng.complex_normal(), g};
    const DetElement xx = dual_graded(dual_graded(x));
    const int p = dual_graded_sign(g) + dual_graded_sign(dual_dims(g));
    CHECK(xx.dims == g);
    CHECK(!xx.dualized);
    CHECK(std::abs(xx.coeff - static_cast<double>(sign_of(p)) * x.coeff) <= 1e-15 * std::abs(x.coeff));
  }
}

TEST_CASE("graded dims validation") {
  CHECK_THROWS_AS(validate(GradedDims{1, {1}}), ValidationError);
  CHECK_THROWS_AS(validate(GradedDims{1, {1, -1}}), ValidationError);
  CHECK(direct_sum(graded({1, 2}), graded({3, 4})) == graded({4, 6}));
  CHECK(dual_dims(graded({1, 2, 3, 4})) == graded({4, 3, 2, 1}));
}
