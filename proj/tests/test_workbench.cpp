#include <doctest.h>

#include <string>

#include "reftor/checks.hpp"
#include "reftor/signature.hpp"
#include "reftor/workbench.hpp"

using namespace reftor;

TEST_CASE("elementary block reproduces the running example") {
  const Instance in = gen_elementary(1, 0, 2.0);
  CHECK(in.complex.dims.dims == std::vector<int>{1, 1});
  CHECK(in.complex.partial[0](0, 0) == Scalar(2.0));
  CHECK(in.chirality.gamma[0](0, 0) == Scalar(1.0));
  CHECK(in.chirality.gamma[1](0, 0) == Scalar(1.0));
}

TEST_CASE("elementary block arguments") {
  CHECK_THROWS_AS(gen_elementary(1, 0, 0.0), ValidationError);
  CHECK_THROWS_AS(gen_elementary(3, 0, 1.0, 4), ValidationError);
  CHECK_THROWS_AS(gen_elementary(3, 2, 1.0), ValidationError);
  CHECK_THROWS_AS(gen_elementary(2, 0, 1.0), ValidationError);
  const Instance h = gen_elementary(3, 0, 1.0, 1);
  CHECK(betti_numbers(h.complex) == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("elementary blocks have bijective signature operators") {
  for (int j : {0, 1}) {
    const Instance in = gen_elementary(3, j, kI);
    const SignatureOp s = build_signature(in.complex, in.chirality);
    const Eigen::FullPivLU<Matrix> lu(s.B);
    CHECK(lu.rank() == s.B.rows());
    for (const Scalar& ev : eigenvalues(s.B)) CHECK(std::abs(ev) >= 0.5);
  }
}

TEST_CASE("random generator is deterministic and respects the profile") {
  const Profile p{3, 2, false};
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const Instance a = gen_random(s, 3, p);
    const Instance b = gen_random(s, 3, p);
    for (int j = 0; j < 3; ++j) CHECK(a.complex.partial[j] == b.complex.partial[j]);
    for (int j = 0; j <= 3; ++j) {
      CHECK(a.chirality.gamma[j] == b.chirality.gamma[j]);
      const Matrix sq = a.chirality.gamma[3 - j] * a.chirality.gamma[j];
      CHECK((sq - Matrix::Identity(sq.rows(), sq.cols())).norm() <= 1e-12);
    }
    CHECK(betti_numbers(a.complex) == profile_betti(s, 3, p));
  }
  Rng r1(5), r2(5);
  for (int i = 0; i < 10; ++i) CHECK(r1.normal() == r2.normal());
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 2, 4));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 3));
}

TEST_CASE("json round trip is byte identical") {
  ComplexDocument doc;
  const Instance in = gen_random(77, 3, Profile{2, 1, false});
  doc.complex = in.complex;
  doc.chirality = in.chirality;
  doc.metadata["name"] = "random";
  doc.metadata["author"] = "generator";
  const std::string text = to_json(doc);
  const ComplexDocument back = from_json(text);
  CHECK(to_json(back) == text);
  CHECK(back.metadata == doc.metadata);
  for (int j = 0; j < 3; ++j) CHECK(back.complex.partial[j] == doc.complex.partial[j]);
  CHECK(text.find(' ') == std::string::npos);
}

TEST_CASE("canonical json of the running example") {
  ComplexDocument doc;
  const Instance in = gen_elementary(1, 0, 2.0);
  doc.complex = in.complex;
  doc.chirality = in.chirality;
  doc.complex.partial[0](0, 0) = Scalar(2.0, -0.0);
  doc.metadata["name"] = "running example";
  CHECK(to_json(doc) ==
        R"({"d":1,"dims":[1,1],"differential":[[[[2,0]]]],"chirality":[[[[1,0]]],[[[1,0]]]],)"
        R"("metadata":{"name":"running example"}})");
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(from_json("{"), ValidationError);
  CHECK_THROWS_AS(from_json("[]"), ValidationError);
  CHECK_THROWS_AS(from_json(R"({"d":1,"dims":[1,1],"differential":[[[[2]]]]})"), ValidationError);
  CHECK_THROWS_AS(from_json(R"({"d":1,"dims":[1,2],"differential":[[[[2,0]]]]})"), ValidationError);
  CHECK_THROWS_AS(
      from_json(R"({"d":3,"dims":[1,1,1,1],"differential":[[[[1,0]]],[[[1,0]]],[[[0,0]]]]})"),
      ValidationError);
  CHECK_THROWS_AS(read_document("/nonexistent/file.json"), ValidationError);
}

TEST_CASE("serial and parallel sweeps agree exactly") {
  const auto f = [](int i) { return checks::torsion_vs_graded_det(mix_seed(9, 1, static_cast<std::uint64_t>(i))); };
  const checks::Sweep serial = checks::run_sweep(40, f, false);
  const checks::Sweep parallel = checks::run_sweep(40, f, true);
  CHECK(serial.values == parallel.values);
  CHECK(serial.errors == 0);
  const checks::Sweep failing = checks::run_sweep(3, [](int i) -> double {
    if (i == 1) throw ValidationError("boom");
    return 0.0;
  }, true);
  CHECK(failing.errors == 1);
  CHECK(failing.first_error.find("boom") != std::string::npos);
}
