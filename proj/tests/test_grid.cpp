#include <doctest.h>

#include "mmx/grid.hpp"

using namespace mmx;

TEST_CASE("grid folds") {
  GridFunction g({{0.0, 1.0, 2.0}}, {ExtReal(3.0), ExtReal(1.0), ExtReal(2.0)});
  CHECK(grid_inf(g) == ExtReal(1.0));
  CHECK(grid_sup(g) == ExtReal(3.0));

  GridFunction all_minus({{0.0, 1.0}}, {ExtReal::minus_inf(), ExtReal::minus_inf()});
  CHECK(grid_sup(all_minus) == ExtReal::minus_inf());
}

TEST_CASE("midpoint convexity on 1-D grids") {
  GridFunction bad({{0.0, 1.0, 2.0}}, {ExtReal(0.0), ExtReal(2.0), ExtReal(3.0)});
  CHECK(!grid_convexity_check(bad));  // 2 > (0+3)/2
  GridFunction good({{0.0, 1.0, 2.0}}, {ExtReal(0.0), ExtReal(1.0), ExtReal(3.0)});
  CHECK(grid_convexity_check(good));
  // +inf inside the hull of finite nodes breaks midpoint convexity
  GridFunction hole({{0.0, 1.0, 2.0}}, {ExtReal(0.0), ExtReal::plus_inf(), ExtReal(0.0)});
  CHECK(!grid_convexity_check(hole));
  // +inf wings are fine (indicator shape)
  GridFunction ind({{0.0, 1.0, 2.0}}, {ExtReal::plus_inf(), ExtReal(0.0), ExtReal::plus_inf()});
  CHECK(grid_convexity_check(ind));
}

TEST_CASE("unequal spacing skips the triple") {
  GridFunction g({{0.0, 1.0, 3.0}}, {ExtReal(0.0), ExtReal(5.0), ExtReal(0.0)});
  CHECK(grid_convexity_check(g));  // no equally spaced triple to test
}

TEST_CASE("2-D convexity along both axes") {
  // f(x, y) = x^2 + y^2 sampled on {-1,0,1}^2
  std::vector<double> ax{-1.0, 0.0, 1.0};
  std::vector<ExtReal> vals;
  for (double x : ax)
    for (double y : ax) vals.push_back(ExtReal(x * x + y * y));
  GridFunction g({ax, ax}, vals);
  CHECK(grid_convexity_check(g));

  vals[4] = ExtReal(5.0);  // bump the center
  GridFunction h({ax, ax}, vals);
  CHECK(!grid_convexity_check(h));
}

TEST_CASE("sampling a PWL function") {
  GridFunction g = GridFunction::sample(PwlFunction::abs_shifted(0.0), {-2.0, 0.0, 1.0});
  CHECK(g.at(0) == ExtReal(2.0));
  CHECK(g.at(1) == ExtReal(0.0));
  CHECK(g.at(2) == ExtReal(1.0));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridFunction({{1.0, 1.0}}, {ExtReal(0.0), ExtReal(0.0)}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction({{0.0, 1.0}}, {ExtReal(0.0)}), std::invalid_argument);
}
