#include <doctest.h>

#include "mmx/simplex_lp.hpp"

using namespace mmx;

TEST_CASE("single bounding row") {
  // max t s.t. t <= lambda_2 over the 2-simplex
  std::vector<LpRow> upper{{{0.0, 1.0}, 0.0}};
  LpResult r = maximize_over_simplex(2, upper, {});
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.lambda[1] == doctest::Approx(1.0));
}

TEST_CASE("recession rows pin the balanced point") {
  // t <= 0, with lambda_1 - lambda_2 both >= 0 and <= 0
  std::vector<LpRow> upper{{{0.0, 0.0}, 0.0}};
  std::vector<LpRow> feas{{{-1.0, 1.0}, 0.0}, {{1.0, -1.0}, 0.0}};
  LpResult r = maximize_over_simplex(2, upper, feas);
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.lambda[0] == doctest::Approx(0.5));
  CHECK(r.lambda[1] == doctest::Approx(0.5));
}

TEST_CASE("min over two crossing rows") {
  // min t s.t. t >= lambda_1, t >= lambda_2: optimum 1/2
  std::vector<LpRow> lower{{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 0.0}};
  LpResult r = minimize_over_simplex(2, lower, {});
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == doctest::Approx(0.5));
}

TEST_CASE("infeasible cuts") {
  std::vector<LpRow> upper{{{0.0, 0.0}, 0.0}};
  std::vector<LpRow> feas{{{1.0, 1.0}, -2.0}};  // lambda_1 + lambda_2 >= 2 on the simplex
  LpResult r = maximize_over_simplex(2, upper, feas);
  CHECK(r.status == LpResult::Status::infeasible);
}

TEST_CASE("no bounding rows is unbounded") {
  LpResult r = maximize_over_simplex(2, {}, {});
  CHECK(r.status == LpResult::Status::unbounded);
}

TEST_CASE("degenerate ties terminate") {
  // several identical rows force degenerate pivots; Bland's rule must exit
  std::vector<LpRow> upper{{{1.0, 2.0, 3.0}, 0.0},
                           {{1.0, 2.0, 3.0}, 0.0},
                           {{1.0, 2.0, 3.0}, 0.0},
                           {{3.0, 2.0, 1.0}, 0.0}};
  LpResult r = maximize_over_simplex(3, upper, {});
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == doctest::Approx(2.0));
}

TEST_CASE("affine offsets") {
  // t <= 1 - lambda_1, t <= lambda_1 + 0.5: optimum at lambda_1 = 0.25
  std::vector<LpRow> upper{{{-1.0, 0.0}, 1.0}, {{1.0, 0.0}, 0.5}};
  LpResult r = maximize_over_simplex(2, upper, {});
  REQUIRE(r.status == LpResult::Status::optimal);
  CHECK(r.value == doctest::Approx(0.75));
  CHECK(r.lambda[0] == doctest::Approx(0.25));
}
