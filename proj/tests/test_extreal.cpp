#include <doctest.h>

#include <vector>

#include "mmx/extreal.hpp"

using namespace mmx;

namespace {

std::vector<ExtReal> representatives() {
  return {ExtReal::minus_inf(), ExtReal(-2.0), ExtReal(0.0), ExtReal(3.0), ExtReal::plus_inf()};
}

}  // namespace

TEST_CASE("addition conventions") {
  CHECK(add(ExtReal::plus_inf(), ExtReal::minus_inf()) == ExtReal::plus_inf());
  CHECK(add(ExtReal::minus_inf(), ExtReal::plus_inf()) == ExtReal::plus_inf());
  CHECK(add(ExtReal(3.0), ExtReal::minus_inf()) == ExtReal::minus_inf());
  CHECK(add(ExtReal(2.0), ExtReal(5.0)) == ExtReal(7.0));
  CHECK(add(ExtReal::minus_inf(), ExtReal::minus_inf()) == ExtReal::minus_inf());
  CHECK(add(ExtReal::plus_inf(), ExtReal(4.0)) == ExtReal::plus_inf());
}

TEST_CASE("addition is commutative and associative over all variants") {
  auto reps = representatives();
  for (ExtReal a : reps)
    for (ExtReal b : reps) CHECK(add(a, b) == add(b, a));
  for (ExtReal a : reps)
    for (ExtReal b : reps)
      for (ExtReal c : reps) CHECK(add(add(a, b), c) == add(a, add(b, c)));
}

TEST_CASE("scaling conventions") {
  CHECK(scale(0.0, ExtReal::plus_inf()) == ExtReal::plus_inf());
  CHECK(scale(0.0, ExtReal::minus_inf()) == ExtReal(0.0));
  CHECK(scale(0.0, ExtReal(17.0)) == ExtReal(0.0));
  CHECK(scale(2.0, ExtReal::minus_inf()) == ExtReal::minus_inf());
  CHECK(scale(2.0, ExtReal::plus_inf()) == ExtReal::plus_inf());
  CHECK(scale(0.5, ExtReal(6.0)) == ExtReal(3.0));
  CHECK_THROWS_AS(scale(-1.0, ExtReal(1.0)), std::invalid_argument);
}

TEST_CASE("positive scaling distributes over addition") {
  auto reps = representatives();
  for (double t : {0.5, 1.0, 3.0})
    for (ExtReal a : reps)
      for (ExtReal b : reps) CHECK(scale(t, add(a, b)) == add(scale(t, a), scale(t, b)));
}

TEST_CASE("zero scaling pinned case by case") {
  // 0 * ((+inf) + (-inf)) = 0 * (+inf) = +inf, and the term-wise route
  // +inf + 0 agrees under these conventions
  CHECK(scale(0.0, add(ExtReal::plus_inf(), ExtReal::minus_inf())) == ExtReal::plus_inf());
  CHECK(add(scale(0.0, ExtReal::plus_inf()), scale(0.0, ExtReal::minus_inf())) ==
        ExtReal::plus_inf());
  CHECK(scale(0.0, add(ExtReal::minus_inf(), ExtReal(5.0))) == ExtReal(0.0));
  CHECK(add(scale(0.0, ExtReal::minus_inf()), scale(0.0, ExtReal(5.0))) == ExtReal(0.0));
}

TEST_CASE("order compatibility of addition") {
  auto reps = representatives();
  for (ExtReal a : reps)
    for (ExtReal b : reps) {
      if (!(a <= b)) continue;
      for (ExtReal c : reps) CHECK(add(a, c) <= add(b, c));
    }
}

TEST_CASE("lattice folds and empty conventions") {
  std::vector<ExtReal> empty;
  CHECK(fold_inf(empty) == ExtReal::plus_inf());
  CHECK(fold_sup(empty) == ExtReal::minus_inf());
  std::vector<ExtReal> a{ExtReal(3.0), ExtReal::minus_inf(), ExtReal(7.0)};
  CHECK(fold_inf(a) == ExtReal::minus_inf());
  std::vector<ExtReal> b{ExtReal::minus_inf(), ExtReal(0.0)};
  CHECK(fold_sup(b) == ExtReal(0.0));
}

TEST_CASE("total order") {
  CHECK(ExtReal::minus_inf() < ExtReal(-1e300));
  CHECK(ExtReal(1e300) < ExtReal::plus_inf());
  CHECK(ExtReal::minus_inf() < ExtReal::plus_inf());
}

TEST_CASE("NaN is rejected") {
  CHECK_THROWS_AS(ExtReal(std::nan("")), std::invalid_argument);
}

TEST_CASE("tolerant comparisons") {
  CHECK(le_within(ExtReal(1.0), ExtReal(1.0 - 1e-12), 1e-9));
  CHECK(!le_within(ExtReal::plus_inf(), ExtReal(5.0), 1e-9));
  CHECK(le_within(ExtReal::minus_inf(), ExtReal::minus_inf(), 0.0));
  CHECK(eq_within(ExtReal(2.0), ExtReal(2.0 + 5e-10), 1e-9));
  CHECK(!eq_within(ExtReal::plus_inf(), ExtReal(2.0), 1e-9));
}
