#include <doctest.h>

#include "mmx/conjugate.hpp"
#include "mmx/harness.hpp"

using namespace mmx;

TEST_CASE("conjugate of |x| is the indicator of [-1, 1]") {
  PwlFunction c = conjugate(PwlFunction::abs_shifted(0.0));
  CHECK(pwl_equal(c, PwlFunction::indicator(Interval::closed(-1.0, 1.0))));
}

TEST_CASE("conjugate of a line is a point indicator") {
  PwlFunction c = conjugate(PwlFunction::affine(2.0, 0.0));
  CHECK(pwl_equal(c, PwlFunction::point_indicator(2.0)));
  // with an intercept the point value shifts
  PwlFunction c2 = conjugate(PwlFunction::affine(2.0, 3.0));
  CHECK(c2.evaluate(2.0) == ExtReal(-3.0));
  CHECK(c2.evaluate(1.9) == ExtReal::plus_inf());
}

TEST_CASE("conjugate of the unit-interval indicator") {
  PwlFunction c = conjugate(PwlFunction::indicator(Interval::closed(0.0, 1.0)));
  std::vector<PwlFunction> lines{PwlFunction::affine(0.0, 0.0), PwlFunction::affine(1.0, 0.0)};
  CHECK(pwl_equal(c, pointwise_max(lines)));  // s -> max(s, 0)
}

TEST_CASE("improper and void inputs conjugate to constants") {
  PwlFunction with_minus({0.0}, {ExtReal::minus_inf()}, {}, Tail::plus_inf(), Tail::plus_inf());
  CHECK(pwl_equal(conjugate(with_minus), PwlFunction::constant(ExtReal::plus_inf())));
  CHECK(pwl_equal(conjugate(PwlFunction::constant(ExtReal::plus_inf())),
                  PwlFunction::constant(ExtReal::minus_inf())));
}

TEST_CASE("conjugates are convex and lsc") {
  Rng rng(911);
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = rng.chance(0.5) ? gen::gamma0(rng) : gen::proper_pwl(rng);
    if (rng.chance(0.2)) f = gen::improper_inject(std::move(f), rng);
    PwlFunction c = conjugate(f);
    CHECK(is_convex(c));
    CHECK(is_lsc(c));
  }
}

TEST_CASE("conjugation is blind to hulls") {
  Rng rng(912);
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = rng.chance(0.5) ? gen::gamma0(rng) : gen::proper_pwl(rng);
    if (rng.chance(0.25)) f = gen::improper_inject(std::move(f), rng);
    PwlFunction c = conjugate(f);
    CHECK(pwl_equal(c, conjugate(convex_hull(f))));
    CHECK(pwl_equal(c, conjugate(closed_convex_hull(f))));
  }
}

TEST_CASE("grid conjugation oracle values") {
  std::vector<double> axis;
  for (int i = 0; i <= 100; ++i) axis.push_back(-5.0 + 0.1 * i);
  GridFunction sabs = GridFunction::sample(PwlFunction::abs_shifted(0.0), axis);
  GridFunction c = conjugate_grid(sabs, {0.0, 2.0});
  CHECK(c.at(0) == ExtReal(0.0));
  CHECK(c.at(1) == ExtReal(5.0));  // finite-window truncation: 2*5 - 5

  GridFunction allinf({{0.0, 1.0}}, {ExtReal::plus_inf(), ExtReal::plus_inf()});
  GridFunction cg = conjugate_grid(allinf, {0.0, 1.0});
  CHECK(cg.at(0) == ExtReal::minus_inf());
  CHECK(cg.at(1) == ExtReal::minus_inf());
}

TEST_CASE("biconjugate closes and convexifies") {
  PwlFunction open_ind = PwlFunction::indicator(Interval::open(0.0, 1.0));
  CHECK(pwl_equal(biconjugate(open_ind), PwlFunction::indicator(Interval::closed(0.0, 1.0))));

  PwlFunction abs = PwlFunction::abs_shifted(0.0);
  CHECK(pwl_equal(biconjugate(abs), abs));

  PwlFunction with_minus({0.0}, {ExtReal::minus_inf()}, {}, Tail::plus_inf(), Tail::plus_inf());
  CHECK(pwl_equal(biconjugate(with_minus), PwlFunction::constant(ExtReal::minus_inf())));
  IdentityReport rep = check_moreau(with_minus);
  CHECK(!rep.hypothesis_ok);
}

TEST_CASE("Moreau biconjugation on random inputs") {
  Rng rng(913);
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = gen::gamma0(rng);
    CHECK(pwl_equal(biconjugate(f), f));
    IdentityReport rep = check_moreau(f);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.holds);
  }
  for (int it = 0; it < 60; ++it) {
    PwlFunction f = gen::proper_pwl(rng);
    IdentityReport rep = check_moreau(f);
    if (rep.hypothesis_ok) CHECK(rep.holds);
  }
}

TEST_CASE("conjugate of inf equals sup of conjugates") {
  // family {x, -x}: conjugate of min is identically +inf
  std::vector<PwlFunction> lines{PwlFunction::affine(1.0, 0.0), PwlFunction::affine(-1.0, 0.0)};
  PwlFunction cmin = conjugate(pointwise_min(lines));
  CHECK(pwl_equal(cmin, PwlFunction::constant(ExtReal::plus_inf())));
  CHECK(conj_of_inf(lines).holds);

  std::vector<PwlFunction> single{PwlFunction::abs_shifted(1.0)};
  CHECK(conj_of_inf(single).holds);

  // {I_{0}, I_{1}}: conjugate of the two-point indicator is max(0, s)
  std::vector<PwlFunction> pts{PwlFunction::point_indicator(0.0), PwlFunction::point_indicator(1.0)};
  PwlFunction lhs = conjugate(pointwise_min(pts));
  std::vector<PwlFunction> lines2{PwlFunction::affine(0.0, 0.0), PwlFunction::affine(1.0, 0.0)};
  CHECK(pwl_equal(lhs, pointwise_max(lines2)));
  CHECK(conj_of_inf(pts).holds);
}

TEST_CASE("conjugate of sup with the Gamma0 gate") {
  std::vector<PwlFunction> lines{PwlFunction::affine(1.0, 0.0), PwlFunction::affine(-1.0, 0.0)};
  IdentityReport rep = conj_of_sup(lines);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.holds);
  // direct form: (|x|)* = cl co min(I_{1}, I_{-1})
  std::vector<PwlFunction> pts{PwlFunction::point_indicator(1.0), PwlFunction::point_indicator(-1.0)};
  CHECK(pwl_equal(conjugate(PwlFunction::abs_shifted(0.0)),
                  closed_convex_hull(pointwise_min(pts))));

  std::vector<PwlFunction> single{PwlFunction::abs_shifted(0.0)};
  CHECK(conj_of_sup(single).holds);

  std::vector<PwlFunction> gated{PwlFunction::indicator(Interval::left_open(0.0, 1.0)),
                                 PwlFunction::affine(1.0, 0.0)};
  IdentityReport gate = conj_of_sup(gated);
  CHECK(!gate.hypothesis_ok);
}

TEST_CASE("random families satisfy both conjugate calculus rules") {
  Rng rng(914);
  for (int it = 0; it < 40; ++it) {
    int n = rng.uniform_int(2, 4);
    std::vector<PwlFunction> fam;
    for (int k = 0; k < n; ++k) {
      PwlFunction f = gen::proper_pwl(rng);
      if (rng.chance(0.2)) f = gen::improper_inject(std::move(f), rng);
      fam.push_back(std::move(f));
    }
    CHECK(conj_of_inf(fam).holds);
  }
  for (int it = 0; it < 40; ++it) {
    int n = rng.uniform_int(2, 4);
    std::vector<PwlFunction> fam;
    for (int k = 0; k < n; ++k) fam.push_back(gen::gamma0(rng));
    IdentityReport rep = conj_of_sup(fam);
    if (rep.hypothesis_ok) CHECK(rep.holds);
  }
}

TEST_CASE("Fenchel-Young inequality on probe pairs") {
  Rng rng(915);
  for (int it = 0; it < 40; ++it) {
    PwlFunction f = rng.chance(0.5) ? gen::gamma0(rng) : gen::proper_pwl(rng);
    PwlFunction c = conjugate(f);
    std::vector<double> px(f.breakpoints());
    px.push_back(px.front() - 2.5);
    px.push_back(px.back() + 2.5);
    std::vector<double> ps(c.breakpoints());
    ps.push_back(ps.front() - 2.5);
    ps.push_back(ps.back() + 2.5);
    for (double x : px)
      for (double s : ps) CHECK(le_within(ExtReal(s * x), add(f.evaluate(x), c.evaluate(s)), 1e-9));
  }
}

TEST_CASE("envelope at a minimizer and along a constrained line") {
  CHECK(lipschitz_envelope(PwlFunction::abs_shifted(2.0), 7.0, 2.0) == ExtReal(0.0));
  CHECK(lipschitz_envelope(PwlFunction::abs_shifted(2.0), 0.25, 2.0) == ExtReal(0.0));

  PwlFunction f = restrict_to(PwlFunction::affine(2.0, 0.0), Interval::closed(0.0, 1.0));
  CHECK(lipschitz_envelope(f, 1.0, 1.0) == ExtReal(1.0));  // R < 2: value R
  CHECK(lipschitz_envelope(f, 5.0, 1.0) == ExtReal(2.0));  // R >= 2: value f(1)

  // point indicator: envelope R|x0 - 1| grows without bound off the domain
  PwlFunction pt = PwlFunction::point_indicator(1.0);
  CHECK(lipschitz_envelope(pt, 3.0, 0.0) == ExtReal(3.0));
  CHECK(lipschitz_envelope(pt, 100.0, 0.0) == ExtReal(100.0));
}

TEST_CASE("grid envelope agrees with the PWL envelope on sampled data") {
  PwlFunction f = PwlFunction::abs_shifted(1.0);
  std::vector<double> axis;
  for (int i = 0; i <= 40; ++i) axis.push_back(-4.0 + 0.25 * i);
  GridFunction g = GridFunction::sample(f, axis);
  for (double r : {0.5, 1.0, 4.0})
    CHECK(eq_within(lipschitz_envelope(g, r, 0.5), lipschitz_envelope(f, r, 0.5), 1e-9));
}

TEST_CASE("envelope properties on random Gamma0 inputs") {
  Rng rng(916);
  for (int it = 0; it < 30; ++it) {
    PwlFunction f = gen::gamma0(rng);
    std::vector<Interval> dom = f.domain();
    REQUIRE(!dom.empty());
    double lo = std::isfinite(dom[0].lo) ? dom[0].lo : -5.0;
    double hi = std::isfinite(dom[0].hi) ? dom[0].hi : 5.0;
    double x0 = lo + (hi - lo) * rng.uniform();
    double slope_bound = 1.0;
    if (f.left_tail().kind == PieceKind::affine)
      slope_bound = std::max(slope_bound, std::abs(f.left_tail().slope));
    if (f.right_tail().kind == PieceKind::affine)
      slope_bound = std::max(slope_bound, std::abs(f.right_tail().slope));
    for (const Segment& s : f.segments())
      if (s.kind == PieceKind::affine)
        slope_bound = std::max(slope_bound, std::abs(s.right_limit - s.left_limit));

    ExtReal prev = ExtReal::minus_inf();
    for (double r : {0.5, 2.0, 50.0, 1e6 * (1.0 + slope_bound)}) {
      ExtReal env = lipschitz_envelope(f, r, x0);
      CHECK(le_within(prev, env, 1e-12));
      CHECK(le_within(env, f.evaluate(x0), 1e-12));
      prev = env;
    }
    ExtReal last = lipschitz_envelope(f, 1e6 * (1.0 + slope_bound), x0);
    REQUIRE(f.evaluate(x0).is_finite());
    CHECK(f.evaluate(x0).as_double() - last.as_double() <= 1e-6);
  }
}
