#include <doctest.h>

#include <vector>

#include "mmx/harness.hpp"
#include "mmx/pwl.hpp"

using namespace mmx;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

PwlFunction half_open_unit() { return PwlFunction::indicator(Interval::left_open(0.0, 1.0)); }

std::vector<double> probe_points(const PwlFunction& f) {
  std::vector<double> ps(f.breakpoints());
  for (std::size_t i = 0; i + 1 < f.breakpoints().size(); ++i)
    ps.push_back(0.5 * (f.breakpoints()[i] + f.breakpoints()[i + 1]));
  ps.push_back(f.breakpoints().front() - 1.3);
  ps.push_back(f.breakpoints().front() - 6.1);
  ps.push_back(f.breakpoints().back() + 1.3);
  ps.push_back(f.breakpoints().back() + 6.1);
  return ps;
}

bool dominated_on_probes(const PwlFunction& low, const PwlFunction& high) {
  for (double x : probe_points(high))
    if (!le_within(low.evaluate(x), high.evaluate(x), 1e-9)) return false;
  for (double x : probe_points(low))
    if (!le_within(low.evaluate(x), high.evaluate(x), 1e-9)) return false;
  return true;
}

}  // namespace

TEST_CASE("evaluation honors endpoint semantics") {
  PwlFunction f = half_open_unit();
  CHECK(f.evaluate(0.0) == ExtReal::plus_inf());
  CHECK(f.evaluate(1.0) == ExtReal(0.0));
  CHECK(f.evaluate(0.5) == ExtReal(0.0));
  CHECK(f.evaluate(-0.1) == ExtReal::plus_inf());
  CHECK(PwlFunction::abs_shifted(0.0).evaluate(-2.0) == ExtReal(2.0));
}

TEST_CASE("domain computation") {
  std::vector<Interval> dom = half_open_unit().domain();
  REQUIRE(dom.size() == 1);
  CHECK(dom[0] == Interval::left_open(0.0, 1.0));

  PwlFunction abs = PwlFunction::abs_shifted(0.0);
  REQUIRE(abs.domain().size() == 1);
  CHECK(abs.domain()[0].lo == -kInf);
  CHECK(abs.domain()[0].hi == kInf);

  CHECK(PwlFunction::constant(ExtReal::plus_inf()).domain().empty());
  // -inf values are inside the domain
  CHECK(PwlFunction::constant(ExtReal::minus_inf()).domain().size() == 1);
}

TEST_CASE("weighted sum keeps the zero-weight domain restriction") {
  // 0 * I_(0,1] + 1 * y equals y + I_(0,1]
  std::vector<double> w{0.0, 1.0};
  std::vector<PwlFunction> fs{half_open_unit(), PwlFunction::affine(1.0, 0.0)};
  PwlFunction sum = weighted_sum(w, fs);
  PwlFunction expected = restrict_to(PwlFunction::affine(1.0, 0.0), Interval::left_open(0.0, 1.0));
  CHECK(pwl_equal(sum, expected));
  CHECK(sum.evaluate(0.0) == ExtReal::plus_inf());
  CHECK(sum.evaluate(1.0) == ExtReal(1.0));
  CHECK(sum.evaluate(0.25) == ExtReal(0.25));
}

TEST_CASE("balanced sum of opposite lines is zero") {
  std::vector<double> w{0.5, 0.5};
  std::vector<PwlFunction> fs{PwlFunction::affine(1.0, 0.0), PwlFunction::affine(-1.0, 0.0)};
  CHECK(pwl_equal(weighted_sum(w, fs), PwlFunction::constant(ExtReal(0.0))));
}

TEST_CASE("sum with a constant -inf member") {
  std::vector<double> w{0.5, 0.5};
  std::vector<PwlFunction> fs{PwlFunction::indicator(Interval::closed(0.0, 1.0)),
                              PwlFunction::constant(ExtReal::minus_inf())};
  PwlFunction sum = weighted_sum(w, fs);
  CHECK(sum.evaluate(0.0) == ExtReal::minus_inf());
  CHECK(sum.evaluate(0.5) == ExtReal::minus_inf());
  CHECK(sum.evaluate(1.0) == ExtReal::minus_inf());
  CHECK(sum.evaluate(1.5) == ExtReal::plus_inf());  // (+inf) + (-inf) = +inf off the domain
  CHECK(sum.evaluate(-0.5) == ExtReal::plus_inf());
}

TEST_CASE("negative weights are rejected") {
  std::vector<double> w{-0.5};
  std::vector<PwlFunction> fs{PwlFunction::abs_shifted(0.0)};
  CHECK_THROWS_AS(weighted_sum(w, fs), std::invalid_argument);
}

TEST_CASE("predicates on the motivating examples") {
  PwlFunction h = half_open_unit();
  CHECK(is_proper(h));
  CHECK(is_convex(h));
  CHECK(!is_lsc(h));
  CHECK(!is_gamma0(h));

  PwlFunction m = PwlFunction::constant(ExtReal::minus_inf());
  CHECK(!is_proper(m));
  CHECK(is_convex(m));
  CHECK(is_lsc(m));

  CHECK(is_gamma0(PwlFunction::abs_shifted(0.0)));
}

TEST_CASE("improper convexity requires -inf on the interior") {
  // -inf on [0,1], finite endpoints: convex
  PwlFunction f({0.0, 1.0}, {ExtReal(0.0), ExtReal(0.0)}, {Segment::minus_inf()},
                Tail::plus_inf(), Tail::plus_inf());
  CHECK(is_convex(f));
  // -inf only at an endpoint with finite interior: not convex
  PwlFunction g({0.0, 1.0}, {ExtReal::minus_inf(), ExtReal(0.0)}, {Segment::affine(0.0, 0.0)},
                Tail::plus_inf(), Tail::plus_inf());
  CHECK(!is_convex(g));
}

TEST_CASE("endpoint up-jumps stay convex, dips do not") {
  PwlFunction up({0.0, 1.0}, {ExtReal(5.0), ExtReal(0.0)}, {Segment::affine(0.0, 0.0)},
                 Tail::plus_inf(), Tail::plus_inf());
  CHECK(is_convex(up));
  CHECK(!is_lsc(up));
  PwlFunction down({0.0, 1.0}, {ExtReal(-5.0), ExtReal(0.0)}, {Segment::affine(0.0, 0.0)},
                   Tail::plus_inf(), Tail::plus_inf());
  CHECK(!is_convex(down));
}

TEST_CASE("lsc hull closes half-open indicators") {
  CHECK(pwl_equal(lsc_hull(half_open_unit()), PwlFunction::indicator(Interval::closed(0.0, 1.0))));
}

TEST_CASE("convex hull of a double-V has a plateau") {
  std::vector<PwlFunction> vs{PwlFunction::abs_shifted(0.0), PwlFunction::abs_shifted(2.0)};
  PwlFunction f = pointwise_min(vs);
  PwlFunction hull = convex_hull(f);
  PwlFunction expected({0.0, 2.0}, {ExtReal(0.0), ExtReal(0.0)}, {Segment::affine(0.0, 0.0)},
                       Tail::affine(-1.0), Tail::affine(1.0));
  CHECK(pwl_equal(hull, expected));
}

TEST_CASE("closed convex hull fixes Gamma0 functions") {
  PwlFunction f = PwlFunction::abs_shifted(0.0);
  CHECK(pwl_equal(closed_convex_hull(f), f));
}

TEST_CASE("hull of open-interval indicator keeps the open ends") {
  PwlFunction f = PwlFunction::indicator(Interval::open(0.0, 1.0));
  CHECK(pwl_equal(convex_hull(f), f));
  CHECK(pwl_equal(closed_convex_hull(f), PwlFunction::indicator(Interval::closed(0.0, 1.0))));
}

TEST_CASE("unbounded-below envelopes collapse to -inf") {
  // concave tent: slopes +1 then -1
  PwlFunction tent({0.0}, {ExtReal(0.0)}, {}, Tail::affine(1.0), Tail::affine(-1.0));
  CHECK(pwl_equal(convex_hull(tent), PwlFunction::constant(ExtReal::minus_inf())));
}

TEST_CASE("improper hull covers the closed domain hull") {
  // -inf at one point inside an indicator's domain
  PwlFunction f({-1.0, 0.0, 1.0}, {ExtReal(0.0), ExtReal::minus_inf(), ExtReal(0.0)},
                {Segment::affine(0.0, 0.0), Segment::affine(0.0, 0.0)}, Tail::plus_inf(),
                Tail::plus_inf());
  PwlFunction hull = convex_hull(f);
  CHECK(hull.evaluate(-1.0) == ExtReal::minus_inf());
  CHECK(hull.evaluate(0.3) == ExtReal::minus_inf());
  CHECK(hull.evaluate(1.0) == ExtReal::minus_inf());
  CHECK(hull.evaluate(1.5) == ExtReal::plus_inf());
  CHECK(is_convex(hull));
  CHECK(is_lsc(hull));
}

TEST_CASE("pointwise max and infimum basics") {
  std::vector<PwlFunction> fs{PwlFunction::affine(1.0, 0.0), PwlFunction::affine(-1.0, 0.0)};
  CHECK(pwl_equal(pointwise_max(fs), PwlFunction::abs_shifted(0.0)));

  InfimumResult inf_abs = infimum(PwlFunction::abs_shifted(0.0));
  CHECK(inf_abs.value == ExtReal(0.0));
  REQUIRE(inf_abs.argmin.has_value());
  CHECK(*inf_abs.argmin == doctest::Approx(0.0));

  PwlFunction open_line = restrict_to(PwlFunction::affine(1.0, 0.0), Interval::left_open(0.0, 1.0));
  InfimumResult r = infimum(open_line);
  CHECK(r.value == ExtReal(0.0));
  CHECK(!r.argmin.has_value());  // infimum over (0,1] of y is not attained
}

TEST_CASE("infimum of improper and unbounded shapes") {
  CHECK(infimum(PwlFunction::constant(ExtReal::minus_inf())).value == ExtReal::minus_inf());
  CHECK(infimum(PwlFunction::affine(1.0, 0.0)).value == ExtReal::minus_inf());
  CHECK(!infimum(PwlFunction::affine(1.0, 0.0)).argmin.has_value());
  CHECK(infimum(PwlFunction::constant(ExtReal::plus_inf())).value == ExtReal::plus_inf());
}

TEST_CASE("max inserts crossing breakpoints exactly") {
  PwlFunction a = PwlFunction::affine(1.0, 0.0);
  PwlFunction b = PwlFunction::affine(-1.0, 1.0);
  PwlFunction m = pointwise_max(a, b).canonical();
  REQUIRE(m.breakpoints().size() == 1);
  CHECK(m.breakpoints()[0] == doctest::Approx(0.5));
  CHECK(m.evaluate(0.5) == ExtReal(0.5));
}

TEST_CASE("canonical removes redundant breakpoints and normalizes anchors") {
  PwlFunction line({-1.0, 0.0, 1.0}, {ExtReal(-1.0), ExtReal(0.0), ExtReal(1.0)},
                   {Segment::affine(-1.0, 0.0), Segment::affine(0.0, 1.0)}, Tail::affine(1.0),
                   Tail::affine(1.0));
  PwlFunction c = line.canonical();
  CHECK(c.breakpoints().size() == 1);
  CHECK(pwl_equal(line, PwlFunction::affine(1.0, 0.0)));
  // constants anchored anywhere compare equal
  PwlFunction c5({5.0}, {ExtReal(2.0)}, {}, Tail::affine(0.0), Tail::affine(0.0));
  CHECK(pwl_equal(c5, PwlFunction::constant(ExtReal(2.0))));
}

TEST_CASE("validation rejects malformed structures") {
  CHECK_THROWS_AS(PwlFunction({1.0, 0.0}, {ExtReal(0.0), ExtReal(0.0)},
                              {Segment::affine(0.0, 0.0)}, Tail::plus_inf(), Tail::plus_inf()),
                  std::invalid_argument);
  // affine tail anchored at +inf
  CHECK_THROWS_AS(
      PwlFunction({0.0}, {ExtReal::plus_inf()}, {}, Tail::affine(1.0), Tail::plus_inf()),
      std::invalid_argument);
}

// ---------------------------------------------------------------------------
// randomized properties
// ---------------------------------------------------------------------------

namespace {

PwlFunction random_input(Rng& rng) {
  double roll = rng.uniform();
  PwlFunction f = roll < 0.4 ? gen::gamma0(rng) : gen::proper_pwl(rng);
  if (rng.chance(0.25)) f = gen::improper_inject(std::move(f), rng);
  return f;
}

}  // namespace

TEST_CASE("weighted sums evaluate pointwise") {
  Rng rng(101);
  for (int it = 0; it < 60; ++it) {
    int n = rng.uniform_int(1, 3);
    std::vector<PwlFunction> fs;
    std::vector<double> w;
    for (int k = 0; k < n; ++k) {
      fs.push_back(random_input(rng));
      w.push_back(rng.chance(0.2) ? 0.0 : rng.uniform(0.0, 2.0));
    }
    PwlFunction sum = weighted_sum(w, fs);
    for (double x : probe_points(sum)) {
      ExtReal expect(0.0);
      for (int k = 0; k < n; ++k)
        expect = add(expect, scale(w[static_cast<std::size_t>(k)],
                                   fs[static_cast<std::size_t>(k)].evaluate(x)));
      ExtReal got = sum.evaluate(x);
      CHECK(eq_within(got, expect, 1e-9));
    }
  }
}

TEST_CASE("pointwise extrema evaluate pointwise") {
  Rng rng(202);
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = random_input(rng);
    PwlFunction g = random_input(rng);
    PwlFunction mx = pointwise_max(f, g);
    PwlFunction mn = pointwise_min(f, g);
    for (double x : probe_points(mx)) {
      CHECK(eq_within(mx.evaluate(x), ext_max(f.evaluate(x), g.evaluate(x)), 1e-9));
      CHECK(eq_within(mn.evaluate(x), ext_min(f.evaluate(x), g.evaluate(x)), 1e-9));
    }
  }
}

TEST_CASE("infimum is blind to hulls") {
  Rng rng(303);
  for (int it = 0; it < 80; ++it) {
    PwlFunction f = random_input(rng);
    ExtReal i0 = infimum(f).value;
    CHECK(eq_within(i0, infimum(lsc_hull(f)).value, 1e-9));
    CHECK(eq_within(i0, infimum(convex_hull(f)).value, 1e-9));
    CHECK(eq_within(i0, infimum(closed_convex_hull(f)).value, 1e-9));
  }
}

TEST_CASE("hull operators are idempotent and dominated") {
  Rng rng(404);
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = random_input(rng);
    PwlFunction l = lsc_hull(f), c = convex_hull(f), cc = closed_convex_hull(f);
    CHECK(pwl_equal(lsc_hull(l), l));
    CHECK(pwl_equal(convex_hull(c), c));
    CHECK(pwl_equal(closed_convex_hull(cc), cc));
    CHECK(dominated_on_probes(l, f));
    CHECK(dominated_on_probes(c, f));
    CHECK(dominated_on_probes(cc, c));
    CHECK(is_convex(c));
    CHECK(is_lsc(l));
    CHECK(is_convex(cc));
    CHECK(is_lsc(cc));
  }
}

TEST_CASE("hulls are monotone") {
  Rng rng(505);
  for (int it = 0; it < 40; ++it) {
    PwlFunction f = random_input(rng);
    PwlFunction g = random_input(rng);
    PwlFunction low = pointwise_min(f, g);  // low <= f everywhere
    CHECK(dominated_on_probes(lsc_hull(low), lsc_hull(f)));
    CHECK(dominated_on_probes(convex_hull(low), convex_hull(f)));
    CHECK(dominated_on_probes(closed_convex_hull(low), closed_convex_hull(f)));
  }
}

TEST_CASE("gamma0 functions are hull fixed points") {
  Rng rng(606);
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = gen::gamma0(rng);
    REQUIRE(is_gamma0(f));
    CHECK(pwl_equal(closed_convex_hull(f), f));
    CHECK(pwl_equal(convex_hull(f), f));
    CHECK(pwl_equal(lsc_hull(f), f));
  }
}

namespace {

// convex members may jump only upward at closed domain endpoints
PwlFunction endpoint_jump(PwlFunction f, Rng& rng) {
  std::vector<ExtReal> vs = f.values();
  if (rng.chance(0.5) && vs.front().is_finite())
    vs.front() = ExtReal(vs.front().as_double() + rng.uniform(0.5, 2.0));
  if (rng.chance(0.5) && vs.back().is_finite())
    vs.back() = ExtReal(vs.back().as_double() + rng.uniform(0.5, 2.0));
  return PwlFunction(f.breakpoints(), std::move(vs), f.segments(), f.left_tail(), f.right_tail());
}

}  // namespace

TEST_CASE("closing the max of same-domain convex functions commutes") {
  // families with one shared effective domain and finite sup inside it
  Rng rng(707);
  for (int it = 0; it < 30; ++it) {
    double a = rng.uniform(-5.0, -1.0), b = rng.uniform(1.0, 5.0);
    Interval dom = Interval::closed(a, b);
    int n = rng.uniform_int(2, 4);
    std::vector<PwlFunction> fs;
    for (int k = 0; k < n; ++k) {
      Rng inner(static_cast<std::uint64_t>(rng.uniform_int(0, 1 << 30)));
      PwlFunction base = gen::gamma0(inner);
      while (base.left_tail().kind != PieceKind::affine ||
             base.right_tail().kind != PieceKind::affine)
        base = gen::gamma0(inner);
      PwlFunction f = restrict_to(base, dom);
      if (rng.chance(0.5)) f = endpoint_jump(std::move(f), rng);
      fs.push_back(std::move(f));
    }
    std::vector<PwlFunction> closed;
    for (const auto& f : fs) closed.push_back(lsc_hull(f));
    PwlFunction lhs = lsc_hull(pointwise_max(fs));
    PwlFunction rhs = pointwise_max(closed);
    CHECK(pwl_equal(lhs, rhs));
  }
}

TEST_CASE("convexity matches the hull fixed-point characterization on proper inputs") {
  Rng rng(808);
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = rng.chance(0.5) ? gen::proper_pwl(rng) : gen::convex_proper(rng, true);
    CHECK(is_convex(f) == pwl_equal(f, convex_hull(f)));
  }
}
