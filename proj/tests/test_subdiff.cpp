#include <doctest.h>

#include <algorithm>

#include "mmx/conjugate.hpp"
#include "mmx/harness.hpp"
#include "mmx/subdiff.hpp"

using namespace mmx;

TEST_CASE("subdifferential of |x|") {
  PwlFunction abs = PwlFunction::abs_shifted(0.0);
  SubdiffInterval at_kink = eps_subdifferential(abs, 0.0, 0.0);
  REQUIRE(!at_kink.empty);
  CHECK(at_kink.lo == doctest::Approx(-1.0));
  CHECK(at_kink.hi == doctest::Approx(1.0));

  SubdiffInterval smooth = eps_subdifferential(abs, 1.0, 0.0);
  REQUIRE(!smooth.empty);
  CHECK(smooth.lo == doctest::Approx(1.0));
  CHECK(smooth.hi == doctest::Approx(1.0));

  CHECK(eps_subdifferential(abs, 0.0, -0.1).empty);
  CHECK(eps_subdifferential(abs, 0.0, -1e-12).empty);
}

TEST_CASE("outside the domain and at -inf points") {
  PwlFunction ind = PwlFunction::indicator(Interval::closed(0.0, 1.0));
  CHECK(eps_subdifferential(ind, 2.0, 0.0).empty);

  PwlFunction plateau({0.0, 1.0}, {ExtReal::minus_inf(), ExtReal::minus_inf()},
                      {Segment::minus_inf()}, Tail::plus_inf(), Tail::plus_inf());
  SubdiffInterval all = eps_subdifferential(plateau, 0.5, 0.0);
  REQUIRE(!all.empty);
  CHECK(!std::isfinite(all.lo));
  CHECK(!std::isfinite(all.hi));
}

TEST_CASE("non-convex inputs are rejected") {
  std::vector<PwlFunction> vs{PwlFunction::abs_shifted(0.0), PwlFunction::abs_shifted(2.0)};
  PwlFunction w = pointwise_min(vs);
  CHECK_THROWS_AS(eps_subdifferential(w, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("epsilon widens the interval on a V shape") {
  // at x = 1 on |x|, slopes s qualify iff 1 + f*(s) <= s + eps
  PwlFunction abs = PwlFunction::abs_shifted(0.0);
  SubdiffInterval wide = eps_subdifferential(abs, 1.0, 1.0);
  REQUIRE(!wide.empty);
  CHECK(wide.lo == doctest::Approx(0.5));
  CHECK(wide.hi == doctest::Approx(1.0));
}

TEST_CASE("grid oracle on sampled |x|") {
  std::vector<double> axis;
  for (int i = -20; i <= 20; ++i) axis.push_back(0.25 * i);
  GridFunction g = GridFunction::sample(PwlFunction::abs_shifted(0.0), axis);
  std::vector<double> probes{-2.0, -1.0, 0.0, 1.0, 2.0};
  std::vector<double> got = eps_subdiff_oracle(g, 0.0, 0.0, probes);
  CHECK(got == std::vector<double>{-1.0, 0.0, 1.0});

  // large epsilon dominates the sampled range: every probe qualifies
  std::vector<double> all = eps_subdiff_oracle(g, 0.0, 100.0, probes);
  CHECK(all.size() == probes.size());

  // off-grid and outside-domain queries are empty
  CHECK(eps_subdiff_oracle(g, 0.33, 0.0, probes).empty());
  GridFunction ind = GridFunction::sample(PwlFunction::indicator(Interval::closed(0.0, 1.0)), axis);
  CHECK(eps_subdiff_oracle(ind, -2.0, 0.0, probes).empty());
}

TEST_CASE("oracle agreement on random convex data") {
  Rng rng(921);
  int checked = 0;
  for (int it = 0; it < 100; ++it) {
    PwlFunction f = gen::gamma0(rng);
    std::vector<Interval> dom = f.domain();
    double lo = std::isfinite(dom[0].lo) ? dom[0].lo : -6.0;
    double hi = std::isfinite(dom[0].hi) ? dom[0].hi : 6.0;
    double eps_choices[] = {0.0, 0.1, 1.0};
    double eps = eps_choices[it % 3];
    // grid containing x0 exactly
    double x0 = lo + (hi - lo) * (rng.uniform_int(1, 15) / 16.0);
    std::vector<double> axis;
    for (int i = 0; i <= 64; ++i) axis.push_back(lo + (hi - lo) * i / 64.0);
    for (double b : f.breakpoints()) axis.push_back(b);
    axis.push_back(x0);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    GridFunction g = GridFunction::sample(f, axis);

    SubdiffInterval exact = eps_subdifferential(f, x0, eps);
    // probe slopes away from the interval endpoints to dodge ties
    std::vector<double> probes;
    for (int i = -30; i <= 30; ++i) {
      double sp = 0.37 * i + 0.011;
      if (!exact.empty && (std::abs(sp - exact.lo) < 1e-5 || std::abs(sp - exact.hi) < 1e-5))
        continue;
      probes.push_back(sp);
    }
    std::vector<double> qualified = eps_subdiff_oracle(g, x0, eps, probes);
    // oracle inequality over a sampled subset of Y is weaker: exact implies
    // sampled, and a sampled slope outside the exact interval would witness
    // a violation of the defining inequality somewhere on the grid
    for (double sp : probes) {
      bool in_exact = exact.contains(sp, 1e-9);
      bool in_oracle = std::binary_search(qualified.begin(), qualified.end(), sp);
      if (in_exact) CHECK(in_oracle);
      if (!in_oracle) CHECK(!in_exact);
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("epsilon monotonicity") {
  Rng rng(922);
  for (int it = 0; it < 40; ++it) {
    PwlFunction f = gen::gamma0(rng);
    std::vector<Interval> dom = f.domain();
    double lo = std::isfinite(dom[0].lo) ? dom[0].lo : -6.0;
    double hi = std::isfinite(dom[0].hi) ? dom[0].hi : 6.0;
    double x0 = rng.uniform(lo, hi);
    SubdiffInterval a = eps_subdifferential(f, x0, 0.05);
    SubdiffInterval b = eps_subdifferential(f, x0, 0.5);
    SubdiffInterval c = eps_subdifferential(f, x0, 2.0);
    CHECK(b.contains_interval(a, 1e-9));
    CHECK(c.contains_interval(b, 1e-9));
  }
}

TEST_CASE("zero slope characterizes near-minimizers") {
  Rng rng(923);
  for (int it = 0; it < 40; ++it) {
    PwlFunction f = gen::gamma0(rng);
    std::vector<Interval> dom = f.domain();
    double lo = std::isfinite(dom[0].lo) ? dom[0].lo : -6.0;
    double hi = std::isfinite(dom[0].hi) ? dom[0].hi : 6.0;
    double x0 = rng.uniform(lo, hi);
    double eps_choices[] = {0.0, 0.3, 2.0};
    double eps = eps_choices[it % 3];
    ExtReal inf = infimum(f).value;
    ExtReal fx = f.evaluate(x0);
    if (!fx.is_finite() || !inf.is_finite()) continue;
    bool theta_in = eps_subdifferential(f, x0, eps).contains(0.0, 1e-9);
    bool near_min = fx.as_double() <= inf.as_double() + eps + 1e-9;
    CHECK(theta_in == near_min);
  }
}

TEST_CASE("max rule on two lines") {
  std::vector<PwlFunction> lines{PwlFunction::affine(1.0, 0.0), PwlFunction::affine(-1.0, 0.0)};

  MaxRuleReport at0 = max_rule(lines, 0.0, 0.0);
  REQUIRE(at0.hypothesis_ok);
  REQUIRE(!at0.vacuous);
  CHECK(at0.lhs.lo == doctest::Approx(-1.0));
  CHECK(at0.lhs.hi == doctest::Approx(1.0));
  CHECK(at0.inclusion_ok);
  CHECK(at0.endpoint_gap <= 1e-6);

  MaxRuleReport at2 = max_rule(lines, 2.0, 0.0);
  CHECK(at2.lhs.lo == doctest::Approx(1.0));
  CHECK(at2.lhs.hi == doctest::Approx(1.0));
  CHECK(at2.inclusion_ok);
  CHECK(at2.endpoint_gap <= 1e-6);
  REQUIRE(at2.rhs_cover.size() == 1);
  CHECK(at2.rhs_cover[0].lo == doctest::Approx(1.0));
}

TEST_CASE("max rule degenerates to identity on singletons") {
  std::vector<PwlFunction> single{PwlFunction::abs_shifted(0.5)};
  MaxRuleReport rep = max_rule(single, 0.5, 0.2);
  SubdiffInterval direct = eps_subdifferential(single[0], 0.5, 0.2);
  REQUIRE(!rep.lhs.empty);
  CHECK(rep.lhs.lo == doctest::Approx(direct.lo));
  CHECK(rep.lhs.hi == doctest::Approx(direct.hi));
  CHECK(rep.inclusion_ok);
  CHECK(rep.endpoint_gap <= 1e-6);
}

TEST_CASE("max rule is vacuous off the domain") {
  std::vector<PwlFunction> fam{PwlFunction::indicator(Interval::closed(0.0, 1.0)),
                               PwlFunction::abs_shifted(0.5)};
  MaxRuleReport rep = max_rule(fam, 3.0, 0.0);
  CHECK(rep.vacuous);
}

TEST_CASE("max rule hypothesis gate") {
  std::vector<PwlFunction> vs{PwlFunction::abs_shifted(0.0), PwlFunction::abs_shifted(2.0)};
  std::vector<PwlFunction> bad{pointwise_min(vs)};
  MaxRuleReport rep = max_rule(bad, 0.0, 0.0);
  CHECK(!rep.hypothesis_ok);
}

TEST_CASE("max rule randomized inclusion and attainment") {
  Rng rng(924);
  for (int it = 0; it < 25; ++it) {
    int n = rng.uniform_int(2, 3);
    std::vector<PwlFunction> fam;
    for (int k = 0; k < n; ++k) fam.push_back(gen::gamma0(rng));
    PwlFunction fmax = pointwise_max(fam);
    std::vector<Interval> dom = fmax.domain();
    if (dom.empty()) continue;
    double lo = std::isfinite(dom[0].lo) ? dom[0].lo : -5.0;
    double hi = std::isfinite(dom[0].hi) ? dom[0].hi : 5.0;
    double x0 = rng.uniform(lo, hi);
    double eps_choices[] = {0.0, 0.1, 1.0};
    MaxRuleReport rep = max_rule(fam, x0, eps_choices[it % 3]);
    if (rep.vacuous || !rep.hypothesis_ok) continue;
    CHECK(rep.inclusion_ok);
    CHECK(rep.endpoint_gap <= 1e-6);
  }
}
