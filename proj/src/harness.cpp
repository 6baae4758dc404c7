#include "mmx/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "mmx/mesh.hpp"

namespace mmx {

namespace gen {

namespace {

std::vector<double> increasing_values(Rng& rng, int count, double start_lo, double start_hi,
                                      double gap_lo, double gap_hi) {
  std::vector<double> out;
  double v = rng.uniform(start_lo, start_hi);
  for (int i = 0; i < count; ++i) {
    out.push_back(v);
    v += rng.uniform(gap_lo, gap_hi);
  }
  return out;
}

}  // namespace

PwlFunction gamma0(Rng& rng) {
  int m = rng.uniform_int(1, 5);
  std::vector<double> xs = increasing_values(rng, m, -8.0, -2.0, 0.5, 3.0);
  std::vector<double> slopes = increasing_values(rng, m + 1, -6.0, -1.0, 0.1, 2.0);
  std::vector<ExtReal> vals(static_cast<std::size_t>(m));
  std::vector<Segment> segs;
  double v = rng.uniform(-4.0, 4.0);
  vals[0] = ExtReal(v);
  for (int i = 0; i + 1 < m; ++i) {
    double nv = v + slopes[static_cast<std::size_t>(i) + 1] * (xs[i + 1] - xs[i]);
    segs.push_back(Segment::affine(v, nv));
    v = nv;
    vals[static_cast<std::size_t>(i) + 1] = ExtReal(v);
  }
  Tail left = rng.chance(0.5) ? Tail::affine(slopes.front()) : Tail::plus_inf();
  Tail right = rng.chance(0.5) ? Tail::affine(slopes.back()) : Tail::plus_inf();
  return PwlFunction(std::move(xs), std::move(vals), std::move(segs), left, right);
}

PwlFunction convex_proper(Rng& rng, bool allow_nonlsc) {
  PwlFunction f = gamma0(rng);
  if (!allow_nonlsc) return f;
  // upward jumps at closed domain endpoints keep convexity, break lsc
  std::vector<double> xs = f.breakpoints();
  std::vector<ExtReal> vs = f.values();
  std::vector<Segment> segs = f.segments();
  bool jumped = false;
  if (f.left_tail().kind == PieceKind::plus_inf && xs.size() > 1 && rng.chance(0.6)) {
    vs.front() = ExtReal(vs.front().as_double() + rng.uniform(0.5, 2.0));
    jumped = true;
  }
  if (f.right_tail().kind == PieceKind::plus_inf && xs.size() > 1 && (!jumped || rng.chance(0.5))) {
    vs.back() = ExtReal(vs.back().as_double() + rng.uniform(0.5, 2.0));
  }
  return PwlFunction(std::move(xs), std::move(vs), std::move(segs), f.left_tail(), f.right_tail());
}

PwlFunction proper_pwl(Rng& rng) {
  int m = rng.uniform_int(2, 6);
  std::vector<double> xs = increasing_values(rng, m, -8.0, -2.0, 0.5, 3.0);
  std::vector<ExtReal> vs(static_cast<std::size_t>(m));
  std::vector<Segment> segs(static_cast<std::size_t>(m) - 1);
  bool any_finite = false;
  for (int i = 0; i < m; ++i) {
    if (rng.chance(0.8)) {
      vs[static_cast<std::size_t>(i)] = ExtReal(rng.uniform(-5.0, 5.0));
      any_finite = true;
    } else {
      vs[static_cast<std::size_t>(i)] = ExtReal::plus_inf();
    }
  }
  if (!any_finite) vs[0] = ExtReal(rng.uniform(-5.0, 5.0));
  for (int i = 0; i + 1 < m; ++i) {
    if (rng.chance(0.85))
      segs[static_cast<std::size_t>(i)] =
          Segment::affine(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
    else
      segs[static_cast<std::size_t>(i)] = Segment::plus_inf();
  }
  auto tail = [&](bool left) {
    ExtReal anchor = left ? vs.front() : vs.back();
    if (anchor.is_finite() && rng.chance(0.6)) return Tail::affine(rng.uniform(-4.0, 4.0));
    return Tail::plus_inf();
  };
  Tail lt = tail(true), rt = tail(false);
  return PwlFunction(std::move(xs), std::move(vs), std::move(segs), lt, rt);
}

PwlFunction improper_plateau(Rng& rng) {
  double a = rng.uniform(-6.0, 2.0);
  double b = a + rng.uniform(0.5, 4.0);
  if (rng.chance(0.15)) return PwlFunction::constant(ExtReal::minus_inf());
  return PwlFunction({a, b}, {ExtReal::minus_inf(), ExtReal::minus_inf()}, {Segment::minus_inf()},
                     Tail::plus_inf(), Tail::plus_inf());
}

PwlFunction nonlsc_corrupt(PwlFunction f, Rng& rng) {
  std::vector<double> xs = f.breakpoints();
  std::vector<ExtReal> vs = f.values();
  std::size_t i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(xs.size()) - 1));
  if (vs[i].is_finite())
    vs[i] = ExtReal(vs[i].as_double() + rng.uniform(0.5, 3.0));
  else
    vs[i] = ExtReal::plus_inf();
  Tail lt = f.left_tail(), rt = f.right_tail();
  // an affine tail must stay anchored to a finite value; bump breaks nothing
  return PwlFunction(std::move(xs), std::move(vs), f.segments(), lt, rt);
}

PwlFunction improper_inject(PwlFunction f, Rng& rng) {
  std::vector<double> xs = f.breakpoints();
  std::vector<ExtReal> vs = f.values();
  std::vector<Segment> segs = f.segments();
  Tail lt = f.left_tail(), rt = f.right_tail();
  if (segs.empty()) {
    vs[0] = ExtReal::minus_inf();
    if (lt.kind == PieceKind::affine) lt = Tail::plus_inf();
    if (rt.kind == PieceKind::affine) rt = Tail::plus_inf();
    return PwlFunction(std::move(xs), std::move(vs), std::move(segs), lt, rt);
  }
  std::size_t i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(segs.size()) - 1));
  segs[i] = Segment::minus_inf();
  vs[i] = ExtReal::minus_inf();
  vs[i + 1] = ExtReal::minus_inf();
  if (i == 0 && lt.kind == PieceKind::affine) lt = Tail::plus_inf();
  if (i + 1 == segs.size() && rt.kind == PieceKind::affine) rt = Tail::plus_inf();
  return PwlFunction(std::move(xs), std::move(vs), std::move(segs), lt, rt);
}

}  // namespace gen

// ---------------------------------------------------------------------------
// scenario serialization
// ---------------------------------------------------------------------------

Json to_json(const Scenario& s) {
  return Json{{"id", s.id},
              {"kind", s.kind},
              {"seed", s.seed},
              {"payload", s.payload},
              {"tolerances",
               Json{{"exact", s.tol.exact}, {"mesh", s.tol.mesh}, {"envelope", s.tol.envelope}}}};
}

Scenario scenario_from_json(const Json& j) {
  static const std::set<std::string> kKinds = {
      "conjugacy", "subdiff",           "mm1",      "mmb",      "localized",
      "simplex_duality", "interior_equality", "monotone", "envelope", "marginal"};
  Scenario s;
  s.id = j.at("id").get<std::string>();
  s.kind = j.at("kind").get<std::string>();
  if (!kKinds.count(s.kind)) throw std::runtime_error("unknown scenario kind '" + s.kind + "'");
  s.seed = j.value("seed", std::uint64_t{0});
  s.payload = j.at("payload");
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    s.tol.exact = t.value("exact", s.tol.exact);
    s.tol.mesh = t.value("mesh", s.tol.mesh);
    s.tol.envelope = t.value("envelope", s.tol.envelope);
  }
  return s;
}

std::vector<Scenario> suite_from_json(const Json& j) {
  const Json& arr = j.is_array() ? j : j.at("scenarios");
  if (!arr.is_array()) throw std::runtime_error("/scenarios: expected an array");
  std::vector<Scenario> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    Scenario s;
    try {
      s = scenario_from_json(arr[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("/scenarios/" + std::to_string(i) + ": " + e.what());
    }
    if (!ids.insert(s.id).second)
      throw std::runtime_error("/scenarios/" + std::to_string(i) + ": duplicate id '" + s.id + "'");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open suite file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("parse error in '" + path + "': " + e.what());
  }
  return suite_from_json(j);
}

// ---------------------------------------------------------------------------
// scenario generation
// ---------------------------------------------------------------------------

namespace {

Json gen_conjugacy(Rng& rng, const Json& params) {
  static const char* kIdentities[] = {"moreau", "tricy",     "ehuls",        "oracle",
                                      "conv3",  "infsupcon", "fenchel_young"};
  std::string identity = params.value("identity", std::string());
  if (identity.empty()) identity = kIdentities[rng.uniform_int(0, 6)];

  Json funcs = Json::array();
  if (identity == "conv3") {
    int n = rng.uniform_int(2, 4);
    for (int k = 0; k < n; ++k) {
      PwlFunction f = gen::proper_pwl(rng);
      if (rng.chance(0.25)) f = gen::improper_inject(std::move(f), rng);
      funcs.push_back(to_json(f));
    }
  } else if (identity == "infsupcon") {
    int n = rng.uniform_int(2, 4);
    for (int k = 0; k < n; ++k) {
      // common-domain Gamma0 members keep the sup proper
      PwlFunction f = gen::gamma0(rng);
      if (rng.chance(0.3)) f = gen::nonlsc_corrupt(std::move(f), rng);  // gate-check variants
      funcs.push_back(to_json(f));
    }
  } else {
    PwlFunction f = rng.chance(0.5) ? gen::gamma0(rng) : gen::proper_pwl(rng);
    bool allow_improper = identity == "tricy" || identity == "ehuls" || identity == "moreau";
    if (allow_improper && rng.chance(0.25)) f = gen::improper_inject(std::move(f), rng);
    funcs.push_back(to_json(f));
  }
  return Json{{"identity", identity}, {"functions", funcs}};
}

Json gen_subdiff(Rng& rng, const Json& params) {
  int n = params.value("n", rng.uniform_int(2, 3));
  Json funcs = Json::array();
  std::vector<PwlFunction> gens;
  for (int k = 0; k < n; ++k) {
    PwlFunction f = gen::gamma0(rng);
    gens.push_back(f);
    funcs.push_back(to_json(f));
  }
  PwlFunction fmax = pointwise_max(gens);
  std::vector<Interval> dom = fmax.domain();
  double x;
  if (dom.empty()) {
    x = 0.0;
  } else {
    const Interval& d = dom[0];
    double lo = std::isfinite(d.lo) ? d.lo : -5.0;
    double hi = std::isfinite(d.hi) ? d.hi : 5.0;
    x = rng.chance(0.3) ? lo : rng.uniform(lo, hi);
  }
  double eps_choices[] = {0.0, 0.1, 1.0};
  double eps = params.contains("eps") ? params.at("eps").get<double>()
                                      : eps_choices[rng.uniform_int(0, 2)];
  return Json{{"functions", funcs}, {"x", x}, {"eps", eps}};
}

Json gen_family(Rng& rng, const std::string& variant, int n) {
  std::vector<PwlFunction> gens;
  if (variant == "empty_A0") {
    double a = rng.uniform(-3.0, 0.0), b = a + rng.uniform(1.0, 3.0);
    Interval shared = Interval::left_open(a, b);
    for (int k = 0; k < n; ++k) {
      PwlFunction base = gen::gamma0(rng);
      gens.push_back(restrict_to(base, shared));
    }
  } else if (variant == "allinf") {
    for (int k = 0; k < n; ++k) {
      double a = 3.0 * k, b = a + 1.0;
      gens.push_back(restrict_to(gen::gamma0(rng), Interval::closed(a, b)));
    }
  } else if (variant == "improper") {
    gens.push_back(gen::improper_plateau(rng));
    for (int k = 1; k < n; ++k) gens.push_back(gen::gamma0(rng));
  } else if (variant == "nonlsc") {
    gens.push_back(gen::convex_proper(rng, true));
    for (int k = 1; k < n; ++k)
      gens.push_back(rng.chance(0.5) ? gen::convex_proper(rng, true) : gen::gamma0(rng));
  } else {  // mixed
    for (int k = 0; k < n; ++k) {
      double roll = rng.uniform();
      if (roll < 0.5)
        gens.push_back(gen::gamma0(rng));
      else if (roll < 0.7)
        gens.push_back(gen::convex_proper(rng, true));
      else if (roll < 0.9)
        gens.push_back(gen::improper_plateau(rng));
      else
        gens.push_back(PwlFunction::constant(ExtReal::minus_inf()));
    }
  }
  BifunctionFamily fam{std::move(gens), std::nullopt};
  return to_json(fam);
}

Json gen_mm1(Rng& rng, const Json& params) {
  std::string variant = params.value("variant", std::string("mixed"));
  int n = params.value("n", rng.uniform_int(2, 3));
  if (variant == "grid_sup_inf") {
    // staggered +inf rows: proper convex rows whose joint sup is +inf at
    // every node; the degenerate branch without the theorem's hypotheses
    BifunctionGrid grid;
    grid.x_nodes = {0.0, 1.0};
    grid.y_nodes = {0.0, 1.0};
    double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    grid.values = {ExtReal(a), ExtReal::plus_inf(), ExtReal::plus_inf(), ExtReal(b)};
    return Json{{"grid", to_json(grid)}};
  }
  if (variant == "grid_sampled") {
    BifunctionFamily fam = family_from_json(gen_family(rng, "mixed", n));
    std::vector<double> ys;
    for (int i = 0; i <= 12; ++i) ys.push_back(-6.0 + i);
    return Json{{"grid", to_json(sample_family(fam, 4, ys))}};
  }
  return Json{{"family", gen_family(rng, variant, n)}};
}

PwlFunction finite_everywhere_gamma0(Rng& rng) {
  // affine tails on both sides: finite on all of R
  while (true) {
    PwlFunction f = gen::gamma0(rng);
    if (f.left_tail().kind == PieceKind::affine && f.right_tail().kind == PieceKind::affine)
      return f;
  }
}

Json gen_mmb(Rng& rng, const Json& params) {
  std::string variant = params.value("variant", std::string());
  int n = params.value("n", rng.uniform_int(2, 3));
  std::vector<PwlFunction> gens;
  for (int k = 0; k < n; ++k) gens.push_back(finite_everywhere_gamma0(rng));
  if (variant == "violate") gens[0] = restrict_to(gens[0], Interval::closed(-0.5, 0.5));
  double c = rng.uniform(1.0, 4.0);
  BifunctionFamily fam{std::move(gens), Interval::closed(-c, c)};
  return Json{{"family", to_json(fam)}};
}

Json gen_localized(Rng& rng, const Json& params) {
  int n = params.value("n", rng.uniform_int(2, 3));
  std::vector<PwlFunction> gens;
  for (int k = 0; k < n; ++k)
    gens.push_back(rng.chance(0.7) ? gen::gamma0(rng) : gen::convex_proper(rng, true));
  double a = rng.uniform(-4.0, 0.0), b = a + rng.uniform(1.0, 5.0);
  Interval box{a, b, rng.chance(0.7), rng.chance(0.7)};
  BifunctionFamily fam{std::move(gens), box};
  return Json{{"family", to_json(fam)}};
}

Json gen_simplex_duality(Rng& rng, const Json& params) {
  std::string variant = params.value("variant", std::string("lp"));
  int n = params.value("n", rng.uniform_int(2, 6));
  Json funcs = Json::array();
  if (variant == "improper_lsc") {
    n = std::max(2, std::min(n, 4));
    funcs.push_back(to_json(gen::improper_plateau(rng)));
    for (int k = 1; k < n; ++k) funcs.push_back(to_json(gen::gamma0(rng)));
  } else if (variant == "proper_nonlsc") {
    n = std::max(2, std::min(n, 4));
    funcs.push_back(to_json(gen::convex_proper(rng, true)));
    for (int k = 1; k < n; ++k) funcs.push_back(to_json(gen::convex_proper(rng, rng.chance(0.5))));
  } else {
    for (int k = 0; k < n; ++k) funcs.push_back(to_json(gen::gamma0(rng)));
  }
  return Json{{"functions", funcs}, {"variant", variant}};
}

Json gen_interior(Rng& rng, const Json& params) {
  std::string variant = params.value("variant", std::string());
  int n = params.value("n", rng.uniform_int(2, 3));
  std::vector<PwlFunction> gens;
  for (int k = 0; k < n; ++k) gens.push_back(finite_everywhere_gamma0(rng));
  if (variant == "violate") gens[0] = gen::improper_plateau(rng);
  BifunctionFamily fam{std::move(gens), std::nullopt};
  return Json{{"family", to_json(fam)}};
}

Json gen_monotone(Rng& rng, const Json& params) {
  bool mono = params.value("non_decreasing", rng.chance(0.5));
  int nodes = params.value("nodes", rng.uniform_int(2, 16));
  int terms = rng.uniform_int(2, 6);
  std::vector<double> axis;
  double x = rng.uniform(-5.0, 0.0);
  for (int i = 0; i < nodes; ++i) {
    axis.push_back(x);
    x += rng.uniform(0.25, 1.5);
  }
  auto random_row = [&]() {
    Json row = Json::array();
    for (int i = 0; i < nodes; ++i) {
      double roll = rng.uniform();
      if (roll < 0.05)
        row.push_back("-inf");
      else if (roll < 0.12)
        row.push_back("inf");
      else
        row.push_back(rng.uniform(-8.0, 8.0));
    }
    return row;
  };
  Json rows = Json::array();
  if (mono) {
    std::vector<ExtReal> cur(static_cast<std::size_t>(nodes), ExtReal::minus_inf());
    for (int t = 0; t < terms; ++t) {
      Json raw = random_row();
      Json row = Json::array();
      for (int i = 0; i < nodes; ++i) {
        cur[static_cast<std::size_t>(i)] =
            ext_max(cur[static_cast<std::size_t>(i)], extreal_from_json(raw[i]));
        row.push_back(to_json(cur[static_cast<std::size_t>(i)]));
      }
      rows.push_back(std::move(row));
    }
  } else {
    for (int t = 0; t < terms; ++t) rows.push_back(random_row());
  }
  return Json{{"sequence", Json{{"axis", axis}, {"terms", rows}}}, {"non_decreasing", mono}};
}

Json gen_envelope(Rng& rng, const Json& params) {
  bool outside = params.value("outside", false);
  PwlFunction f = gen::gamma0(rng);
  double x0;
  std::vector<Interval> dom = f.domain();
  const Interval& d = dom[0];
  if (outside) {
    // force a bounded side, then step past it
    if (!std::isfinite(d.lo) && !std::isfinite(d.hi)) {
      f = restrict_to(f, Interval::closed(-3.0, 3.0));
      x0 = rng.chance(0.5) ? 3.0 + rng.uniform(0.5, 4.0) : -3.0 - rng.uniform(0.5, 4.0);
    } else if (std::isfinite(d.hi)) {
      x0 = d.hi + rng.uniform(0.5, 4.0);
    } else {
      x0 = d.lo - rng.uniform(0.5, 4.0);
    }
  } else {
    double lo = std::isfinite(d.lo) ? d.lo : -5.0;
    double hi = std::isfinite(d.hi) ? d.hi : 5.0;
    x0 = rng.uniform(lo, hi);
  }
  double slope_bound = 1.0;
  for (const Segment& s : f.segments())
    if (s.kind == PieceKind::affine)
      slope_bound = std::max(slope_bound, std::abs(s.right_limit - s.left_limit));
  if (f.left_tail().kind == PieceKind::affine)
    slope_bound = std::max(slope_bound, std::abs(f.left_tail().slope));
  if (f.right_tail().kind == PieceKind::affine)
    slope_bound = std::max(slope_bound, std::abs(f.right_tail().slope));
  Json radii = Json::array({0.5, 2.0, 10.0, 1e3, 1e6 * (1.0 + slope_bound)});
  return Json{{"function", to_json(f)}, {"x0", x0}, {"radii", radii}};
}

Json gen_marginal(Rng& rng, const Json& params) {
  int n = params.value("n", 2);
  std::vector<PwlFunction> gens;
  for (int k = 0; k < n; ++k) gens.push_back(gen::gamma0(rng));
  BifunctionFamily fam{std::move(gens), std::nullopt};
  return Json{{"family", to_json(fam)}};
}

}  // namespace

Scenario generate(const std::string& kind, std::uint64_t seed, const Json& params) {
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  Scenario s;
  s.kind = kind;
  s.seed = seed;
  std::string variant = params.value("variant", std::string());
  s.id = kind + (variant.empty() ? "" : "-" + variant) + "-s" + std::to_string(seed);

  if (kind == "conjugacy")
    s.payload = gen_conjugacy(rng, params);
  else if (kind == "subdiff")
    s.payload = gen_subdiff(rng, params);
  else if (kind == "mm1")
    s.payload = gen_mm1(rng, params);
  else if (kind == "mmb")
    s.payload = gen_mmb(rng, params);
  else if (kind == "localized")
    s.payload = gen_localized(rng, params);
  else if (kind == "simplex_duality")
    s.payload = gen_simplex_duality(rng, params);
  else if (kind == "interior_equality")
    s.payload = gen_interior(rng, params);
  else if (kind == "monotone")
    s.payload = gen_monotone(rng, params);
  else if (kind == "envelope")
    s.payload = gen_envelope(rng, params);
  else if (kind == "marginal")
    s.payload = gen_marginal(rng, params);
  else
    throw std::invalid_argument("generate: unknown scenario kind '" + kind + "'");
  return s;
}

// ---------------------------------------------------------------------------
// scenario execution
// ---------------------------------------------------------------------------

namespace {

std::string status_of(bool hypothesis_ok, bool vacuous, bool holds) {
  if (!hypothesis_ok || vacuous) return "vacuous";
  return holds ? "pass" : "fail";
}

Report run_conjugacy_scenario(const Scenario& s) {
  Report rep;
  const Json& p = s.payload;
  std::string identity = p.at("identity").get<std::string>();
  std::vector<PwlFunction> funcs;
  for (const Json& e : p.at("functions")) funcs.push_back(pwl_from_json(e));
  if (funcs.empty()) throw std::runtime_error("conjugacy scenario without functions");
  const PwlFunction& f = funcs.front();

  if (identity == "moreau") {
    IdentityReport r = check_moreau(f, s.tol.exact);
    rep.status = status_of(r.hypothesis_ok, false, r.holds);
    rep.detail = to_json(r);
  } else if (identity == "tricy") {
    PwlFunction c1 = conjugate(f);
    PwlFunction c2 = conjugate(convex_hull(f));
    PwlFunction c3 = conjugate(closed_convex_hull(f));
    bool holds = pwl_equal(c1, c2, s.tol.exact) && pwl_equal(c1, c3, s.tol.exact);
    double disc = std::max(max_discrepancy(c1, c2), max_discrepancy(c1, c3));
    rep.status = holds ? "pass" : "fail";
    rep.detail = Json{{"identity", "tricy"}, {"holds", holds}, {"max_discrepancy", to_json(ExtReal(disc))}};
  } else if (identity == "ehuls") {
    ExtReal i0 = infimum(f).value;
    ExtReal i1 = infimum(lsc_hull(f)).value;
    ExtReal i2 = infimum(convex_hull(f)).value;
    ExtReal i3 = infimum(closed_convex_hull(f)).value;
    bool holds = eq_within(i0, i1, s.tol.exact) && eq_within(i0, i2, s.tol.exact) &&
                 eq_within(i0, i3, s.tol.exact);
    rep.status = holds ? "pass" : "fail";
    rep.detail = Json{{"identity", "ehuls"},
                      {"inf", to_json(i0)},
                      {"inf_cl", to_json(i1)},
                      {"inf_co", to_json(i2)},
                      {"inf_clco", to_json(i3)},
                      {"holds", holds}};
  } else if (identity == "oracle") {
    // slope window with a truncation margin, primal nodes at breakpoints and
    // just beside them (to catch one-sided limits), plus a uniform fill
    std::vector<double> slopes;
    const auto& xs = f.breakpoints();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if (f.segments()[i].kind == PieceKind::affine)
        slopes.push_back((f.segments()[i].right_limit - f.segments()[i].left_limit) /
                         (xs[i + 1] - xs[i]));
    if (f.left_tail().kind == PieceKind::affine) slopes.push_back(f.left_tail().slope);
    if (f.right_tail().kind == PieceKind::affine) slopes.push_back(f.right_tail().slope);
    double smin = -1.0, smax = 1.0;
    if (!slopes.empty()) {
      smin = *std::min_element(slopes.begin(), slopes.end());
      smax = *std::max_element(slopes.begin(), slopes.end());
    }
    std::vector<double> duals;
    if (smax - smin < 1e-9) {
      duals.push_back(smin);
    } else {
      double margin = 0.05 * (smax - smin);
      for (int i = 0; i <= 20; ++i)
        duals.push_back(smin + margin + (smax - smin - 2 * margin) * i / 20.0);
    }
    std::vector<double> nodes;
    for (double x : xs) {
      nodes.push_back(x - 1e-8);
      nodes.push_back(x);
      nodes.push_back(x + 1e-8);
    }
    double lo = xs.front() - 2.0, hi = xs.back() + 2.0;
    for (int i = 0; i <= 100; ++i) nodes.push_back(lo + (hi - lo) * i / 100.0);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    GridFunction sampled = GridFunction::sample(f, nodes);
    GridFunction oracle = conjugate_grid(sampled, duals);
    PwlFunction exact = conjugate(f);
    double worst = 0.0;
    bool holds = true;
    for (std::size_t i = 0; i < duals.size(); ++i) {
      ExtReal a = exact.evaluate(duals[i]);
      ExtReal b = oracle.at(i);
      if (a.is_finite() && b.is_finite())
        worst = std::max(worst, std::abs(a.as_double() - b.as_double()));
      else if (!(a == b))
        holds = false;
    }
    holds = holds && worst <= s.tol.mesh;
    rep.status = holds ? "pass" : "fail";
    rep.detail = Json{{"identity", "oracle"},
                      {"dual_points", duals.size()},
                      {"max_discrepancy", to_json(ExtReal(worst))},
                      {"holds", holds}};
  } else if (identity == "conv3") {
    IdentityReport r = conj_of_inf(funcs, s.tol.exact);
    rep.status = status_of(r.hypothesis_ok, false, r.holds);
    rep.detail = to_json(r);
  } else if (identity == "infsupcon") {
    IdentityReport r = conj_of_sup(funcs, s.tol.exact);
    rep.status = status_of(r.hypothesis_ok, false, r.holds);
    rep.detail = to_json(r);
  } else if (identity == "fenchel_young") {
    PwlFunction conj = conjugate(f);
    std::vector<double> px(f.breakpoints());
    px.push_back(px.front() - 3.0);
    px.push_back(px.back() + 3.0);
    std::vector<double> ps(conj.breakpoints());
    ps.push_back(ps.front() - 3.0);
    ps.push_back(ps.back() + 3.0);
    bool holds = true;
    for (double x : px)
      for (double sdual : ps)
        holds = holds && le_within(ExtReal(sdual * x), add(f.evaluate(x), conj.evaluate(sdual)),
                                   s.tol.exact);
    rep.status = holds ? "pass" : "fail";
    rep.detail = Json{{"identity", "fenchel_young"}, {"holds", holds}};
  } else {
    throw std::runtime_error("unknown conjugacy identity '" + identity + "'");
  }
  return rep;
}

Report run_subdiff_scenario(const Scenario& s) {
  Report rep;
  std::vector<PwlFunction> funcs;
  for (const Json& e : s.payload.at("functions")) funcs.push_back(pwl_from_json(e));
  double x = s.payload.at("x").get<double>();
  double eps = s.payload.at("eps").get<double>();
  MaxRuleOptions opts;
  opts.tol = s.tol.mesh;
  MaxRuleReport r = max_rule(funcs, x, eps, opts);
  bool holds = r.inclusion_ok && r.endpoint_gap <= opts.tol;
  rep.status = status_of(r.hypothesis_ok, r.vacuous, holds);
  rep.detail = to_json(r);
  return rep;
}

Report run_minimax_scenario(const Scenario& s) {
  Report rep;
  MinimaxReport r;
  if (s.payload.contains("grid")) {
    BifunctionGrid grid = bifgrid_from_json(s.payload.at("grid"));
    r = s.kind == "mmb" ? verify_mmb_grid(grid, s.tol.exact) : verify_mm1_grid(grid, s.tol.exact);
  } else {
    BifunctionFamily fam = family_from_json(s.payload.at("family"));
    if (s.kind == "mmb")
      r = verify_mmb(fam, s.tol.exact);
    else if (s.kind == "localized")
      r = verify_localized(fam, s.tol.exact);
    else
      r = verify_mm1(fam, s.tol.exact);
  }
  rep.status = status_of(r.hypothesis_ok, r.vacuous, r.holds);
  rep.detail = to_json(r);
  return rep;
}

Report run_duality_scenario(const Scenario& s) {
  Report rep;
  std::vector<PwlFunction> funcs;
  for (const Json& e : s.payload.at("functions")) funcs.push_back(pwl_from_json(e));
  bool all_proper = true;
  for (const auto& f : funcs) all_proper = all_proper && is_proper(f);
  double tol = all_proper ? s.tol.exact : s.tol.mesh;
  DualityReport r = simplex_duality(funcs, tol);
  rep.status = status_of(r.hypothesis_ok, false, r.holds);
  rep.detail = to_json(r);
  return rep;
}

Report run_interior_scenario(const Scenario& s) {
  Report rep;
  BifunctionFamily fam = family_from_json(s.payload.at("family"));
  InteriorEqualityReport r = interior_equality(fam, s.tol.exact);
  rep.status = status_of(true, r.vacuous, r.holds);
  rep.detail = to_json(r);
  return rep;
}

Report run_monotone_scenario(const Scenario& s) {
  Report rep;
  FunctionSequence seq = sequence_from_json(s.payload.at("sequence"));
  MonotoneReport r = monotone_minimax(seq);
  rep.status = (r.holds && r.plain_holds) ? "pass" : "fail";
  rep.detail = to_json(r);
  return rep;
}

Report run_envelope_scenario(const Scenario& s) {
  Report rep;
  PwlFunction f = pwl_from_json(s.payload.at("function"));
  double x0 = s.payload.at("x0").get<double>();
  std::vector<double> radii = s.payload.at("radii").get<std::vector<double>>();
  ExtReal fx = f.evaluate(x0);

  std::vector<ExtReal> env;
  for (double r : radii) env.push_back(lipschitz_envelope(f, r, x0));
  bool monotone = true, bounded = true;
  for (std::size_t i = 0; i + 1 < env.size(); ++i)
    monotone = monotone && le_within(env[i], env[i + 1], 1e-12);
  for (const ExtReal& v : env) bounded = bounded && le_within(v, fx, 1e-12);

  bool limit_ok;
  Json limit_note;
  if (fx.is_finite()) {
    ExtReal last = env.back();
    limit_ok = last.is_finite() && fx.as_double() - last.as_double() <= s.tol.envelope;
    limit_note = Json{{"gap", fx.as_double() - (last.is_finite() ? last.as_double() : 0.0)}};
  } else {
    // x0 outside dom f: the envelope must blow up along the radius ladder
    ExtReal last = env.back();
    limit_ok = last.is_plus_inf() || (last.is_finite() && last.as_double() >= 1e3);
    limit_note = Json{{"diverged_to", to_json(last)}};
  }
  bool holds = monotone && bounded && limit_ok;
  rep.status = holds ? "pass" : "fail";
  Json values = Json::array();
  for (const ExtReal& v : env) values.push_back(to_json(v));
  rep.detail = Json{{"f_at_x0", to_json(fx)},   {"envelope", values}, {"monotone", monotone},
                    {"dominated", bounded},     {"limit_ok", limit_ok}, {"note", limit_note}};
  return rep;
}

Report run_marginal_scenario(const Scenario& s) {
  Report rep;
  BifunctionFamily fam = family_from_json(s.payload.at("family"));
  MarginalReport r = marginal_check(fam, 8, 64, s.tol.mesh);
  rep.status = r.convex_ok ? "pass" : "fail";
  rep.detail = to_json(r);
  return rep;
}

}  // namespace

Report run_scenario(const Scenario& s) {
  auto start = std::chrono::steady_clock::now();
  Report rep;
  try {
    if (s.kind == "conjugacy")
      rep = run_conjugacy_scenario(s);
    else if (s.kind == "subdiff")
      rep = run_subdiff_scenario(s);
    else if (s.kind == "mm1" || s.kind == "mmb" || s.kind == "localized")
      rep = run_minimax_scenario(s);
    else if (s.kind == "simplex_duality")
      rep = run_duality_scenario(s);
    else if (s.kind == "interior_equality")
      rep = run_interior_scenario(s);
    else if (s.kind == "monotone")
      rep = run_monotone_scenario(s);
    else if (s.kind == "envelope")
      rep = run_envelope_scenario(s);
    else if (s.kind == "marginal")
      rep = run_marginal_scenario(s);
    else
      throw std::runtime_error("unknown scenario kind '" + s.kind + "'");
  } catch (const std::exception& e) {
    rep.status = "error";
    rep.detail = Json{{"error", e.what()}};
  }
  rep.id = s.id;
  rep.kind = s.kind;
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SuiteResult run_suite(const std::vector<Scenario>& scenarios, int jobs) {
  SuiteResult res;
  res.reports.resize(scenarios.size());
  if (jobs < 1) jobs = 1;
  jobs = std::min<int>(jobs, static_cast<int>(scenarios.size() ? scenarios.size() : 1));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= scenarios.size()) break;
      res.reports[i] = run_scenario(scenarios[i]);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const Report& r : res.reports) {
    if (r.status == "pass")
      ++res.summary.pass;
    else if (r.status == "fail")
      ++res.summary.fail;
    else if (r.status == "vacuous")
      ++res.summary.vacuous;
    else
      ++res.summary.error;
  }
  return res;
}

Json report_to_json(const Report& r, bool include_timing) {
  Json j{{"id", r.id}, {"kind", r.kind}, {"status", r.status}, {"detail", r.detail}};
  if (include_timing) j["wall_ms"] = r.wall_ms;
  return j;
}

Json suite_report_json(const SuiteResult& res, bool include_timing) {
  Json reports = Json::array();
  for (const Report& r : res.reports) reports.push_back(report_to_json(r, include_timing));
  return Json{{"reports", reports},
              {"summary", Json{{"pass", res.summary.pass},
                               {"fail", res.summary.fail},
                               {"vacuous", res.summary.vacuous},
                               {"error", res.summary.error}}}};
}

namespace {

std::string field(const Json& detail, const char* key) {
  if (!detail.is_object() || !detail.contains(key)) return "";
  const Json& v = detail.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v.get<double>());
    return buf;
  }
  return v.dump();
}

}  // namespace

std::string suite_report_text(const SuiteResult& res) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-34s %-18s %-8s %12s %12s %12s\n", "id", "kind", "status",
                "lhs", "rhs", "gap");
  out << line;
  for (const Report& r : res.reports) {
    std::snprintf(line, sizeof(line), "%-34s %-18s %-8s %12s %12s %12s\n", r.id.c_str(),
                  r.kind.c_str(), r.status.c_str(), field(r.detail, "lhs").c_str(),
                  field(r.detail, "rhs").c_str(), field(r.detail, "gap").c_str());
    out << line;
  }
  std::snprintf(line, sizeof(line), "summary: %d pass, %d fail, %d vacuous, %d error\n",
                res.summary.pass, res.summary.fail, res.summary.vacuous, res.summary.error);
  out << line;
  return out.str();
}

std::string suite_report_csv(const SuiteResult& res) {
  std::ostringstream out;
  out << "id,kind,status,lhs,rhs,gap\n";
  for (const Report& r : res.reports)
    out << r.id << ',' << r.kind << ',' << r.status << ',' << field(r.detail, "lhs") << ','
        << field(r.detail, "rhs") << ',' << field(r.detail, "gap") << '\n';
  return out.str();
}

}  // namespace mmx
