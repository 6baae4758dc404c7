#include "mmx/json_io.hpp"

#include <stdexcept>

namespace mmx {

namespace {

std::string kind_name(PieceKind k) {
  switch (k) {
    case PieceKind::affine: return "affine";
    case PieceKind::plus_inf: return "inf";
    case PieceKind::minus_inf: return "-inf";
  }
  return "affine";
}

PieceKind kind_from(const Json& j) {
  std::string s = j.get<std::string>();
  if (s == "affine") return PieceKind::affine;
  if (s == "inf") return PieceKind::plus_inf;
  if (s == "-inf") return PieceKind::minus_inf;
  throw std::runtime_error("unknown piece kind '" + s + "'");
}

}  // namespace

Json to_json(ExtReal v) {
  if (v.is_plus_inf()) return "inf";
  if (v.is_minus_inf()) return "-inf";
  return v.as_double();
}

ExtReal extreal_from_json(const Json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf") return ExtReal::plus_inf();
    if (s == "-inf") return ExtReal::minus_inf();
    throw std::runtime_error("invalid extended-real string '" + s + "'");
  }
  if (!j.is_number()) throw std::runtime_error("extended real must be a number or inf string");
  return ExtReal(j.get<double>());
}

Json to_json(const Interval& iv) {
  return Json{{"lo", to_json(ExtReal(iv.lo))},
              {"hi", to_json(ExtReal(iv.hi))},
              {"lo_closed", iv.lo_closed},
              {"hi_closed", iv.hi_closed}};
}

Interval interval_from_json(const Json& j) {
  Interval iv;
  iv.lo = extreal_from_json(j.at("lo")).as_double();
  iv.hi = extreal_from_json(j.at("hi")).as_double();
  iv.lo_closed = j.value("lo_closed", false);
  iv.hi_closed = j.value("hi_closed", false);
  return iv;
}

Json to_json(const PwlFunction& f) {
  Json segs = Json::array();
  for (const Segment& s : f.segments()) {
    Json e{{"kind", kind_name(s.kind)}};
    if (s.kind == PieceKind::affine) {
      e["left"] = s.left_limit;
      e["right"] = s.right_limit;
    }
    segs.push_back(std::move(e));
  }
  auto tail_json = [](const Tail& t) {
    Json e{{"kind", kind_name(t.kind)}};
    if (t.kind == PieceKind::affine) e["slope"] = t.slope;
    return e;
  };
  Json vals = Json::array();
  for (ExtReal v : f.values()) vals.push_back(to_json(v));
  return Json{{"breakpoints", f.breakpoints()},
              {"values", vals},
              {"segments", segs},
              {"left_tail", tail_json(f.left_tail())},
              {"right_tail", tail_json(f.right_tail())}};
}

PwlFunction pwl_from_json(const Json& j) {
  std::vector<double> xs = j.at("breakpoints").get<std::vector<double>>();
  std::vector<ExtReal> vs;
  for (const Json& e : j.at("values")) vs.push_back(extreal_from_json(e));
  std::vector<Segment> segs;
  for (const Json& e : j.at("segments")) {
    Segment s;
    s.kind = kind_from(e.at("kind"));
    if (s.kind == PieceKind::affine) {
      s.left_limit = e.at("left").get<double>();
      s.right_limit = e.at("right").get<double>();
    }
    segs.push_back(s);
  }
  auto tail_from = [](const Json& e) {
    Tail t;
    t.kind = kind_from(e.at("kind"));
    if (t.kind == PieceKind::affine) t.slope = e.at("slope").get<double>();
    return t;
  };
  return PwlFunction(std::move(xs), std::move(vs), std::move(segs), tail_from(j.at("left_tail")),
                     tail_from(j.at("right_tail")));
}

Json to_json(const GridFunction& g) {
  Json vals = Json::array();
  for (ExtReal v : g.values()) vals.push_back(to_json(v));
  return Json{{"axes", g.axes()}, {"values", vals}};
}

GridFunction grid_from_json(const Json& j) {
  auto axes = j.at("axes").get<std::vector<std::vector<double>>>();
  std::vector<ExtReal> vals;
  for (const Json& e : j.at("values")) vals.push_back(extreal_from_json(e));
  return GridFunction(std::move(axes), std::move(vals));
}

Json to_json(const BifunctionFamily& fam) {
  Json gens = Json::array();
  for (const auto& g : fam.generators) gens.push_back(to_json(g));
  Json out{{"generators", gens}};
  out["y_restriction"] = fam.y_restriction ? to_json(*fam.y_restriction) : Json(nullptr);
  return out;
}

BifunctionFamily family_from_json(const Json& j) {
  BifunctionFamily fam;
  for (const Json& e : j.at("generators")) fam.generators.push_back(pwl_from_json(e));
  if (j.contains("y_restriction") && !j.at("y_restriction").is_null())
    fam.y_restriction = interval_from_json(j.at("y_restriction"));
  return fam;
}

Json to_json(const BifunctionGrid& g) {
  Json vals = Json::array();
  for (ExtReal v : g.values) vals.push_back(to_json(v));
  return Json{{"x_nodes", g.x_nodes}, {"y_nodes", g.y_nodes}, {"values", vals}};
}

BifunctionGrid bifgrid_from_json(const Json& j) {
  BifunctionGrid g;
  g.x_nodes = j.at("x_nodes").get<std::vector<double>>();
  g.y_nodes = j.at("y_nodes").get<std::vector<double>>();
  for (const Json& e : j.at("values")) g.values.push_back(extreal_from_json(e));
  if (g.values.size() != g.x_nodes.size() * g.y_nodes.size())
    throw std::runtime_error("bifunction grid value count mismatch");
  return g;
}

Json to_json(const FunctionSequence& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) {
    Json vals = Json::array();
    for (ExtReal v : t.values()) vals.push_back(to_json(v));
    terms.push_back(std::move(vals));
  }
  Json axis = s.terms.empty() ? Json::array() : Json(s.terms.front().axes()[0]);
  return Json{{"axis", axis}, {"terms", terms}};
}

FunctionSequence sequence_from_json(const Json& j) {
  FunctionSequence seq;
  auto axis = j.at("axis").get<std::vector<double>>();
  for (const Json& t : j.at("terms")) {
    std::vector<ExtReal> vals;
    for (const Json& e : t) vals.push_back(extreal_from_json(e));
    seq.terms.emplace_back(std::vector<std::vector<double>>{axis}, std::move(vals));
  }
  return seq;
}

Json to_json(const SubdiffInterval& s) {
  if (s.empty) return Json(nullptr);
  return Json{to_json(ExtReal(s.lo)), to_json(ExtReal(s.hi))};
}

Json to_json(const IdentityReport& r) {
  return Json{{"identity", r.identity},
              {"hypothesis_ok", r.hypothesis_ok},
              {"hypothesis_note", r.hypothesis_note},
              {"holds", r.holds},
              {"max_discrepancy", to_json(ExtReal(r.max_discrepancy))}};
}

Json to_json(const MaxRuleReport& r) {
  Json cover = Json::array();
  for (const auto& m : r.rhs_cover) cover.push_back(to_json(m));
  return Json{{"hypothesis_ok", r.hypothesis_ok},
              {"hypothesis_note", r.hypothesis_note},
              {"vacuous", r.vacuous},
              {"lhs", to_json(r.lhs)},
              {"rhs_cover", cover},
              {"inclusion_ok", r.inclusion_ok},
              {"endpoint_gap", to_json(ExtReal(r.endpoint_gap))},
              {"density_used", r.density_used}};
}

Json to_json(const MinimaxReport& r) {
  return Json{{"theorem", r.theorem},
              {"hypotheses", Json{{"ok", r.hypothesis_ok}, {"note", r.hypothesis_note}}},
              {"vacuous", r.vacuous},
              {"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},
              {"gap", to_json(ExtReal(r.gap))},
              {"holds", r.holds},
              {"subset_size", r.subset_size},
              {"lambda_star", r.lambda_star.weights},
              {"mode", r.mode},
              {"degenerate_empty_subset", r.degenerate_empty_subset},
              {"degenerate_sup_plus_inf", r.degenerate_sup_plus_inf}};
}

Json to_json(const DualityReport& r) {
  return Json{{"hypothesis_ok", r.hypothesis_ok},
              {"hypothesis_note", r.hypothesis_note},
              {"primal", to_json(r.primal)},
              {"dual", to_json(r.dual)},
              {"lambda_star", r.lambda_star.weights},
              {"mode", r.mode},
              {"gap", to_json(ExtReal(r.gap))},
              {"holds", r.holds}};
}

Json to_json(const InteriorEqualityReport& r) {
  return Json{{"cond_interior_finite", r.cond_interior_finite},
              {"cond_interior_gamma0", r.cond_interior_gamma0},
              {"vacuous", r.vacuous},
              {"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},
              {"holds", r.holds}};
}

Json to_json(const MonotoneReport& r) {
  return Json{{"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},
              {"holds", r.holds},
              {"non_decreasing", r.non_decreasing},
              {"lhs_plain", to_json(r.lhs_plain)},
              {"rhs_plain", to_json(r.rhs_plain)},
              {"plain_holds", r.plain_holds}};
}

Json to_json(const MarginalReport& r) {
  return Json{{"convex_ok", r.convex_ok},
              {"density_used", r.density_used},
              {"dual_nodes", r.dual_nodes},
              {"lp_polish", r.lp_polish}};
}

}  // namespace mmx
