#include "mmx/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmx/conjugate.hpp"
#include "mmx/mesh.hpp"
#include "mmx/simplex_lp.hpp"

namespace mmx {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<double> merged_breakpoints(std::span<const PwlFunction> gens) {
  std::vector<double> xs;
  for (const auto& g : gens) {
    std::vector<double> merged;
    std::merge(xs.begin(), xs.end(), g.breakpoints().begin(), g.breakpoints().end(),
               std::back_inserter(merged));
    xs.clear();
    for (double x : merged)
      if (xs.empty() || x - xs.back() > 1e-12) xs.push_back(x);
  }
  return xs;
}

// one-sided limit of g at an arbitrary coordinate (equals the value off
// breakpoints)
ExtReal ext_limit(const PwlFunction& g, double x, bool from_right) {
  const auto& xs = g.breakpoints();
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it != xs.end() && *it == x) {
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    return from_right ? g.right_limit_at(i) : g.left_limit_at(i);
  }
  return g.evaluate(x);
}

PieceKind tail_kind(const PwlFunction& g, bool left) {
  return left ? g.left_tail().kind : g.right_tail().kind;
}

bool in_support(const std::vector<std::size_t>& support, std::size_t k) {
  return std::find(support.begin(), support.end(), k) != support.end();
}

// A face's relative interior is worth a dedicated LP only if no generator in
// its support dips to -inf at a point every generator tolerates (< +inf);
// such a point pins g = -inf across the whole face.
bool face_hits_minus_inf(std::span<const PwlFunction> gens, const std::vector<std::size_t>& support,
                         const std::vector<double>& xs) {
  auto atom_check = [&](auto value_of) {
    bool any_minus_in_s = false, any_plus = false;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      ExtReal v = value_of(gens[k]);
      if (v.is_plus_inf()) any_plus = true;
      if (v.is_minus_inf() && in_support(support, k)) any_minus_in_s = true;
    }
    return any_minus_in_s && !any_plus;
  };
  for (double x : xs)
    if (atom_check([&](const PwlFunction& g) { return g.evaluate(x); })) return true;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double mid = 0.5 * (xs[i] + xs[i + 1]);
    if (atom_check([&](const PwlFunction& g) { return g.evaluate(mid); })) return true;
  }
  double lo = xs.front() - 1.0, hi = xs.back() + 1.0;
  if (atom_check([&](const PwlFunction& g) { return g.evaluate(lo); })) return true;
  if (atom_check([&](const PwlFunction& g) { return g.evaluate(hi); })) return true;
  return false;
}

struct DualRows {
  std::vector<LpRow> upper;
  std::vector<LpRow> feas;
};

// rows of g(lambda) = inf_y f(lambda, y) restricted to a support face:
// value and one-sided-limit evaluations at merged breakpoints bound t from
// above, recession slopes gate feasibility. Rows with a +inf term anywhere
// are vacuous and skipped.
DualRows build_dual_rows(std::span<const PwlFunction> gens, const std::vector<std::size_t>& support,
                         const std::vector<double>& xs) {
  DualRows rows;
  const std::size_t ns = support.size();

  auto try_row = [&](auto value_of) {
    std::vector<double> a(ns, 0.0);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      ExtReal v = value_of(gens[k]);
      if (v.is_plus_inf()) return;  // vacuous bound
      if (!in_support(support, k)) continue;
      if (v.is_minus_inf()) return;  // face skipped upstream; defensive
      for (std::size_t s = 0; s < ns; ++s)
        if (support[s] == k) a[s] = v.as_double();
    }
    rows.upper.push_back(LpRow{std::move(a), 0.0});
  };

  for (double x : xs) {
    try_row([&](const PwlFunction& g) { return g.evaluate(x); });
    try_row([&](const PwlFunction& g) { return ext_limit(g, x, true); });
    try_row([&](const PwlFunction& g) { return ext_limit(g, x, false); });
  }

  auto tail_row = [&](bool left) {
    for (const auto& g : gens)
      if (tail_kind(g, left) == PieceKind::plus_inf) return;  // ray outside the common domain
    std::vector<double> a(ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
      const PwlFunction& g = gens[support[s]];
      if (tail_kind(g, left) == PieceKind::affine)
        a[s] = left ? -g.left_tail().slope : g.right_tail().slope;
    }
    rows.feas.push_back(LpRow{std::move(a), 0.0});
  };
  tail_row(true);
  tail_row(false);
  return rows;
}

SimplexPoint lift(const std::vector<std::size_t>& support, const std::vector<double>& sub,
                  std::size_t n) {
  std::vector<double> w(n, 0.0);
  for (std::size_t s = 0; s < support.size(); ++s) w[support[s]] = sub[s];
  return SimplexPoint(std::move(w));
}

std::vector<std::vector<std::size_t>> all_supports(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1u << k)) s.push_back(k);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> w) : weights(std::move(w)) {
  if (weights.empty()) throw std::invalid_argument("SimplexPoint: empty weight vector");
  double sum = 0.0;
  for (double& x : weights) {
    if (x < -1e-9) throw std::invalid_argument("SimplexPoint: negative weight");
    if (x < 0) x = 0;
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("SimplexPoint: weights must sum to 1");
  for (double& x : weights) x /= sum;
}

SimplexPoint SimplexPoint::vertex(std::size_t n, std::size_t k) {
  std::vector<double> w(n, 0.0);
  w[k] = 1.0;
  return SimplexPoint(std::move(w));
}

SimplexPoint SimplexPoint::barycenter(std::size_t n) {
  return SimplexPoint(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

PwlFunction BifunctionFamily::at_unrestricted(std::span<const double> lambda) const {
  return weighted_sum(lambda, generators);
}

PwlFunction BifunctionFamily::at(std::span<const double> lambda) const {
  PwlFunction f = at_unrestricted(lambda);
  if (y_restriction) f = restrict_to(f, *y_restriction);
  return f;
}

std::size_t Classification::member_count() const {
  std::size_t c = 0;
  for (const auto& [lam, m] : probes) c += m ? 1 : 0;
  return c;
}

bool Classification::any_member() const {
  if (faces)
    for (const auto& f : *faces)
      if (f.member) return true;
  return member_count() > 0;
}

namespace {

Classification classify_impl(const std::vector<PwlFunction>& gens, int density,
                             bool (*pred)(const PwlFunction&)) {
  Classification cls;
  const std::size_t n = gens.size();
  for (const auto& lam : simplex_mesh(n, density)) {
    PwlFunction f = weighted_sum(lam, gens);
    cls.probes.emplace_back(lam, pred(f));
  }
  bool convex_gens = true;
  for (const auto& g : gens) convex_gens = convex_gens && is_convex(g);
  if (convex_gens && n <= 16) {
    std::vector<FaceStatus> faces;
    for (const auto& support : all_supports(n)) {
      std::vector<double> w(n, 0.0);
      for (std::size_t k : support) w[k] = 1.0 / static_cast<double>(support.size());
      PwlFunction f = weighted_sum(w, gens);
      faces.push_back(FaceStatus{support, pred(f)});
    }
    cls.faces = std::move(faces);
  }
  return cls;
}

}  // namespace

Classification classify_A0(const BifunctionFamily& fam, int mesh_density) {
  std::vector<PwlFunction> gens;
  for (const auto& g : fam.generators)
    gens.push_back(fam.y_restriction ? restrict_to(g, *fam.y_restriction) : g);
  return classify_impl(gens, mesh_density, +[](const PwlFunction& f) { return is_gamma0(f); });
}

Classification classify_A1(const BifunctionFamily& fam, int mesh_density) {
  return classify_impl(fam.generators, mesh_density,
                       +[](const PwlFunction& f) { return is_convex(f); });
}

std::vector<bool> classify_rows_A0(const BifunctionGrid& grid) {
  std::vector<bool> out(grid.x_nodes.size());
  for (std::size_t i = 0; i < grid.x_nodes.size(); ++i) {
    bool has_finite = false, has_minus = false;
    std::vector<ExtReal> row(grid.y_nodes.size());
    for (std::size_t j = 0; j < grid.y_nodes.size(); ++j) {
      row[j] = grid.at(i, j);
      has_finite = has_finite || row[j].is_finite();
      has_minus = has_minus || row[j].is_minus_inf();
    }
    bool proper = has_finite && !has_minus;
    GridFunction g({grid.y_nodes}, row);
    out[i] = proper && grid_convexity_check(g);
  }
  return out;
}

std::vector<bool> classify_rows_A1(const BifunctionGrid& grid) {
  std::vector<bool> out(grid.x_nodes.size());
  for (std::size_t i = 0; i < grid.x_nodes.size(); ++i) {
    std::vector<ExtReal> row(grid.y_nodes.size());
    for (std::size_t j = 0; j < grid.y_nodes.size(); ++j) row[j] = grid.at(i, j);
    GridFunction g({grid.y_nodes}, row);
    out[i] = grid_convexity_check(g);
  }
  return out;
}

DualValue rhs_value(const BifunctionFamily& fam) {
  const std::size_t n = fam.arity();
  if (n == 0) throw std::invalid_argument("rhs_value: family needs at least one generator");
  if (n > 16) throw std::invalid_argument("rhs_value: arity too large");

  std::vector<PwlFunction> gens;
  for (const auto& g : fam.generators)
    gens.push_back(fam.y_restriction ? restrict_to(g, *fam.y_restriction) : g);
  std::vector<double> xs = merged_breakpoints(gens);

  bool all_proper = true;
  for (const auto& g : gens) all_proper = all_proper && is_proper(g);

  auto solve_face = [&](const std::vector<std::size_t>& support)
      -> std::optional<std::pair<ExtReal, SimplexPoint>> {
    if (face_hits_minus_inf(gens, support, xs)) return std::nullopt;  // g = -inf on the face
    DualRows rows = build_dual_rows(gens, support, xs);
    std::vector<double> uniform(support.size(), 1.0 / static_cast<double>(support.size()));
    if (rows.upper.empty())
      return std::make_pair(ExtReal::plus_inf(), lift(support, uniform, n));
    LpResult res = maximize_over_simplex(support.size(), rows.upper, rows.feas);
    switch (res.status) {
      case LpResult::Status::optimal:
        return std::make_pair(ExtReal(res.value), lift(support, res.lambda, n));
      case LpResult::Status::unbounded:
        return std::make_pair(ExtReal::plus_inf(), lift(support, uniform, n));
      case LpResult::Status::infeasible:
        return std::nullopt;  // every lambda on the face has g = -inf
    }
    return std::nullopt;
  };

  DualValue out;
  out.maximizer = SimplexPoint::barycenter(n);
  if (all_proper) {
    std::vector<std::size_t> full(n);
    for (std::size_t k = 0; k < n; ++k) full[k] = k;
    out.mode = "lp";
    auto best = solve_face(full);
    if (best) {
      out.value = best->first;
      out.maximizer = best->second;
    } else {
      out.value = ExtReal::minus_inf();
    }
    return out;
  }

  out.mode = "face-lp";
  out.value = ExtReal::minus_inf();
  for (const auto& support : all_supports(n)) {
    auto cand = solve_face(support);
    if (cand && cand->first > out.value) {
      out.value = cand->first;
      out.maximizer = cand->second;
    }
  }
  return out;
}

namespace {

// sup of f(., y) over the relative interior of a support face, as an exact
// PWL function of y: +inf wherever any generator outside the support leaves
// its domain or any supported generator is +inf; -inf wherever a supported
// generator dips to -inf; the finite max otherwise.
PwlFunction face_sup_function(std::span<const PwlFunction> gens,
                              const std::vector<std::size_t>& support) {
  std::vector<PwlFunction> sub;
  for (std::size_t k : support) sub.push_back(gens[k]);
  PwlFunction m = pointwise_max(sub);

  std::vector<double> xs(m.breakpoints().begin(), m.breakpoints().end());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    if (in_support(support, j)) continue;
    std::vector<double> merged;
    std::merge(xs.begin(), xs.end(), gens[j].breakpoints().begin(), gens[j].breakpoints().end(),
               std::back_inserter(merged));
    xs.clear();
    for (double x : merged)
      if (xs.empty() || x - xs.back() > 1e-12) xs.push_back(x);
  }

  std::vector<ExtReal> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool plus = false, minus = false;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      ExtReal v = gens[k].evaluate(xs[i]);
      if (v.is_plus_inf()) plus = true;
      if (v.is_minus_inf() && in_support(support, k)) minus = true;
    }
    vals[i] = plus ? ExtReal::plus_inf() : (minus ? ExtReal::minus_inf() : m.evaluate(xs[i]));
  }

  auto combine_piece = [&](double a, double b) {
    bool plus = false, minus = false;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      PieceExpr e = gens[k].piece_on(a, b);
      if (e.kind == PieceKind::plus_inf) plus = true;
      if (e.kind == PieceKind::minus_inf && in_support(support, k)) minus = true;
    }
    return std::make_pair(plus, minus);
  };

  std::vector<Segment> cells(xs.size() > 0 ? xs.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    auto [plus, minus] = combine_piece(xs[i], xs[i + 1]);
    if (plus) {
      cells[i] = Segment::plus_inf();
    } else if (minus) {
      cells[i] = Segment::minus_inf();
    } else {
      PieceExpr e = m.piece_on(xs[i], xs[i + 1]);
      cells[i] = Segment::affine(e.at(xs[i]), e.at(xs[i + 1]));
    }
  }

  auto ray = [&](bool left) {
    double anchor = left ? xs.front() : xs.back();
    auto [plus, minus] = left ? combine_piece(-kInf, anchor) : combine_piece(anchor, kInf);
    Segment spec = plus ? Segment::plus_inf() : (minus ? Segment::minus_inf() : Segment::affine(0, 0));
    PieceExpr e = left ? m.piece_on(-kInf, anchor) : m.piece_on(anchor, kInf);
    struct R {
      PieceKind kind;
      double slope, limit;
    } r{spec.kind, 0, 0};
    if (spec.kind == PieceKind::affine) {
      r.slope = e.slope;
      r.limit = e.at(anchor);
    }
    return r;
  };
  auto lr = ray(true);
  auto rr = ray(false);

  // assemble through the validating constructor, inserting anchor breakpoints
  // for affine rays whose limit disagrees with the breakpoint value
  if (lr.kind == PieceKind::affine &&
      !(vals.front().is_finite() && std::abs(vals.front().as_double() - lr.limit) <= 1e-12)) {
    xs.insert(xs.begin(), xs.front() - 1.0);
    vals.insert(vals.begin(), ExtReal(lr.limit - lr.slope));
    cells.insert(cells.begin(), Segment::affine(lr.limit - lr.slope, lr.limit));
  }
  if (rr.kind == PieceKind::affine &&
      !(vals.back().is_finite() && std::abs(vals.back().as_double() - rr.limit) <= 1e-12)) {
    xs.push_back(xs.back() + 1.0);
    vals.push_back(ExtReal(rr.limit + rr.slope));
    cells.push_back(Segment::affine(rr.limit, rr.limit + rr.slope));
  }
  Tail lt = lr.kind == PieceKind::affine ? Tail::affine(lr.slope) : Tail{lr.kind, 0};
  Tail rt = rr.kind == PieceKind::affine ? Tail::affine(rr.slope) : Tail{rr.kind, 0};
  return PwlFunction(std::move(xs), std::move(vals), std::move(cells), lt, rt);
}

}  // namespace

LhsValue lhs_value(const BifunctionFamily& fam, SubsetKind subset, const Classification& cls) {
  LhsValue out;
  std::vector<PwlFunction> pieces;
  if (subset == SubsetKind::full) {
    pieces.push_back(pointwise_max(fam.generators));
  } else if (cls.faces) {
    for (const auto& face : *cls.faces)
      if (face.member) pieces.push_back(face_sup_function(fam.generators, face.support));
  } else {
    for (const auto& [lam, member] : cls.probes)
      if (member) pieces.push_back(fam.at_unrestricted(lam));
  }
  if (pieces.empty()) {
    out.empty_subset = true;
    out.value = ExtReal::minus_inf();  // sup over the empty set
    return out;
  }
  PwlFunction sup = pointwise_max(pieces);
  if (fam.y_restriction) sup = restrict_to(sup, *fam.y_restriction);
  out.sup_identically_plus_inf = sup.identically_plus_inf();
  out.value = infimum(sup).value;
  return out;
}

namespace {

double report_gap(ExtReal lhs, ExtReal rhs) {
  if (lhs.is_finite() && rhs.is_finite()) return rhs.as_double() - lhs.as_double();
  return lhs <= rhs ? kInf : -kInf;
}

}  // namespace

MinimaxReport verify_mm1(const BifunctionFamily& fam, double tol) {
  if (fam.y_restriction) return verify_localized(fam, tol);
  MinimaxReport rep;
  rep.theorem = "MM1";
  Classification cls = classify_A0(fam);
  DualValue dv = rhs_value(fam);
  LhsValue lv = lhs_value(fam, SubsetKind::A0, cls);

  rep.lhs = lv.value;
  rep.rhs = dv.value;
  rep.gap = report_gap(rep.lhs, rep.rhs);
  rep.lambda_star = dv.maximizer;
  rep.mode = dv.mode;
  rep.subset_size = cls.member_count();
  rep.degenerate_empty_subset = lv.empty_subset;
  rep.degenerate_sup_plus_inf = !lv.empty_subset && lv.sup_identically_plus_inf;
  rep.holds = le_within(rep.lhs, rep.rhs, tol);
  if (rep.degenerate_sup_plus_inf) rep.holds = rep.holds && rep.rhs.is_plus_inf();
  return rep;
}

MinimaxReport verify_localized(const BifunctionFamily& fam, double tol) {
  if (!fam.y_restriction) return verify_mm1(fam, tol);
  BifunctionFamily transformed;
  for (const auto& g : fam.generators)
    transformed.generators.push_back(restrict_to(g, *fam.y_restriction));
  MinimaxReport rep = verify_mm1(transformed, tol);
  rep.theorem = "MM-localized";
  return rep;
}

namespace {

bool finite_on(const PwlFunction& g, const Interval& b) {
  const auto& xs = g.breakpoints();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (b.contains(xs[i]) && !g.values()[i].is_finite()) return false;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double lo = std::max(xs[i], b.lo), hi = std::min(xs[i + 1], b.hi);
    if (lo < hi && g.segments()[i].kind != PieceKind::affine) return false;
  }
  if (b.lo < xs.front() && g.left_tail().kind != PieceKind::affine) return false;
  if (b.hi > xs.back() && g.right_tail().kind != PieceKind::affine) return false;
  return true;
}

}  // namespace

MinimaxReport verify_mmb(const BifunctionFamily& fam, double tol) {
  MinimaxReport rep;
  rep.theorem = "MMB";
  PwlFunction fmax = pointwise_max(fam.generators);

  Interval b;
  if (fam.y_restriction) {
    b = *fam.y_restriction;
  } else {
    std::vector<Interval> dom = fmax.domain();
    if (dom.empty()) {
      rep.hypothesis_ok = false;
      rep.vacuous = true;
      rep.hypothesis_note = "dom(max) is empty; no candidate B";
      rep.holds = true;
      return rep;
    }
    b = closed_hull(dom);
  }
  if (b.empty()) {
    rep.hypothesis_ok = false;
    rep.vacuous = true;
    rep.hypothesis_note = "B is empty";
    rep.holds = true;
    return rep;
  }
  for (const auto& g : fam.generators)
    if (!finite_on(g, b)) {
      rep.hypothesis_ok = false;
      rep.hypothesis_note = "finiteness on A x B fails";
    }

  Classification cls = classify_A1(fam);
  BifunctionFamily restricted{fam.generators, b};
  DualValue dv = rhs_value(restricted);
  LhsValue lv = lhs_value(restricted, SubsetKind::A1, cls);

  rep.lhs = lv.value;
  rep.rhs = dv.value;
  rep.gap = report_gap(rep.lhs, rep.rhs);
  rep.lambda_star = dv.maximizer;
  rep.mode = dv.mode;
  rep.subset_size = cls.member_count();
  rep.degenerate_empty_subset = lv.empty_subset;
  if (rep.hypothesis_ok) {
    rep.holds = le_within(rep.lhs, rep.rhs, tol);
  } else {
    rep.vacuous = true;
    rep.holds = true;  // hypotheses violated: values recorded, nothing asserted
  }
  return rep;
}

namespace {

MinimaxReport verify_grid_impl(const BifunctionGrid& grid, const std::vector<bool>& subset,
                               const char* theorem, double tol) {
  MinimaxReport rep;
  rep.theorem = theorem;
  rep.mode = "grid";
  const std::size_t nx = grid.x_nodes.size(), ny = grid.y_nodes.size();

  std::size_t members = 0;
  for (bool m : subset) members += m ? 1 : 0;
  rep.subset_size = members;

  ExtReal lhs = ExtReal::plus_inf();
  bool sup_all_plus = members > 0;
  for (std::size_t j = 0; j < ny; ++j) {
    ExtReal sup = ExtReal::minus_inf();
    for (std::size_t i = 0; i < nx; ++i)
      if (subset[i]) sup = ext_max(sup, grid.at(i, j));
    if (!sup.is_plus_inf()) sup_all_plus = false;
    lhs = ext_min(lhs, sup);
  }
  ExtReal rhs = ExtReal::minus_inf();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    ExtReal inf = ExtReal::plus_inf();
    for (std::size_t j = 0; j < ny; ++j) inf = ext_min(inf, grid.at(i, j));
    if (inf > rhs) {
      rhs = inf;
      arg = i;
    }
  }
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.gap = report_gap(lhs, rhs);
  rep.degenerate_empty_subset = members == 0;
  rep.degenerate_sup_plus_inf = sup_all_plus;
  std::vector<double> w(nx, 0.0);
  if (nx > 0) w[arg] = 1.0;
  rep.lambda_star = SimplexPoint(std::move(w));

  rep.holds = le_within(lhs, rhs, tol);
  if (!rep.holds || rep.degenerate_sup_plus_inf) {
    // concavity/usc in x has no meaning on a finite node set, so a violated
    // inequality (or a degenerate branch without its conclusion) reports as
    // a hypothesis failure rather than a theorem failure
    rep.hypothesis_ok = false;
    rep.vacuous = true;
    rep.hypothesis_note = "discrete x-nodes: concave-usc hypotheses not establishable";
    rep.holds = true;
  }
  return rep;
}

}  // namespace

MinimaxReport verify_mm1_grid(const BifunctionGrid& grid, double tol) {
  return verify_grid_impl(grid, classify_rows_A0(grid), "MM1-grid", tol);
}

MinimaxReport verify_mmb_grid(const BifunctionGrid& grid, double tol) {
  return verify_grid_impl(grid, classify_rows_A1(grid), "MMB-grid", tol);
}

BifunctionGrid sample_family(const BifunctionFamily& fam, int density,
                             std::span<const double> y_nodes) {
  BifunctionGrid grid;
  grid.y_nodes.assign(y_nodes.begin(), y_nodes.end());
  for (const auto& lam : simplex_mesh(fam.arity(), density)) {
    PwlFunction f = fam.at(lam);
    grid.x_nodes.push_back(static_cast<double>(grid.x_nodes.size()));  // mesh index axis
    for (double y : y_nodes) grid.values.push_back(f.evaluate(y));
  }
  return grid;
}

DualityReport simplex_duality(std::span<const PwlFunction> funcs, double tol) {
  if (funcs.empty()) throw std::invalid_argument("simplex_duality: empty family");
  DualityReport rep;
  PwlFunction fmax = pointwise_max(funcs);

  bool all_proper = true, all_lsc = true;
  for (const auto& f : funcs) {
    all_proper = all_proper && is_proper(f);
    all_lsc = all_lsc && is_lsc(f);
  }
  bool dom_ok = !fmax.domain().empty();
  if (!dom_ok) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note = "dom(max) is empty";
  } else if (!all_proper && !all_lsc) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note = "neither all-proper nor all-lsc";
  }

  rep.primal = infimum(fmax).value;
  BifunctionFamily fam{{funcs.begin(), funcs.end()}, std::nullopt};
  DualValue dv = rhs_value(fam);
  rep.dual = dv.value;
  rep.lambda_star = dv.maximizer;
  rep.mode = dv.mode;
  if (rep.primal.is_finite() && rep.dual.is_finite())
    rep.gap = std::abs(rep.primal.as_double() - rep.dual.as_double());
  else
    rep.gap = rep.primal == rep.dual ? 0.0 : kInf;
  rep.holds = rep.hypothesis_ok ? rep.gap <= tol : true;
  return rep;
}

InteriorEqualityReport interior_equality(const BifunctionFamily& fam, double tol) {
  InteriorEqualityReport rep;
  std::vector<PwlFunction> gens;
  for (const auto& g : fam.generators)
    gens.push_back(fam.y_restriction ? restrict_to(g, *fam.y_restriction) : g);
  const std::size_t n = gens.size();
  std::vector<double> xs = merged_breakpoints(gens);

  // (iii): for every y some interior lambda keeps f(., y) > -inf; violated
  // exactly on atoms where a generator dips to -inf and none is +inf
  std::vector<std::size_t> full(n);
  for (std::size_t k = 0; k < n; ++k) full[k] = k;
  rep.cond_interior_finite = !face_hits_minus_inf(gens, full, xs);

  // (iv): Gamma0 on the interior face
  BifunctionFamily plain{gens, std::nullopt};
  Classification cls = classify_A0(plain);
  if (cls.faces) {
    for (const auto& f : *cls.faces)
      if (f.support.size() == n) rep.cond_interior_gamma0 = f.member;
  } else {
    bool all = true;
    bool saw_interior = false;
    for (const auto& [lam, member] : cls.probes) {
      bool interior = true;
      for (double w : lam) interior = interior && w > 0;
      if (interior) {
        saw_interior = true;
        all = all && member;
      }
    }
    rep.cond_interior_gamma0 = saw_interior && all;
  }

  if (!rep.cond_interior_finite || !rep.cond_interior_gamma0) {
    rep.vacuous = true;
    rep.holds = true;
    return rep;
  }
  rep.lhs = infimum(pointwise_max(gens)).value;  // inf_y max over the full simplex
  rep.rhs = rhs_value(plain).value;
  rep.holds = eq_within(rep.lhs, rep.rhs, tol);
  return rep;
}

MonotoneReport monotone_minimax(const FunctionSequence& seq) {
  if (seq.terms.empty()) throw std::invalid_argument("monotone_minimax: empty sequence");
  const GridFunction& first = seq.terms.front();
  if (first.dims() != 1) throw std::invalid_argument("monotone_minimax: 1-D grids only");
  const auto& ax = first.axes()[0];
  for (const auto& t : seq.terms)
    if (t.dims() != 1 || t.axes()[0] != ax)
      throw std::invalid_argument("monotone_minimax: terms must share one grid");

  const std::size_t nn = ax.size(), nt = seq.terms.size();
  // tail infima psi_i = inf_{j >= i} phi_j
  std::vector<std::vector<ExtReal>> psi(nt, std::vector<ExtReal>(nn));
  for (std::size_t x = 0; x < nn; ++x) psi[nt - 1][x] = seq.terms[nt - 1].at(x);
  for (std::size_t i = nt - 1; i-- > 0;)
    for (std::size_t x = 0; x < nn; ++x) psi[i][x] = ext_min(seq.terms[i].at(x), psi[i + 1][x]);

  MonotoneReport rep;
  ExtReal lhs = ExtReal::plus_inf();
  for (std::size_t x = 0; x < nn; ++x) {
    ExtReal sup = ExtReal::minus_inf();
    for (std::size_t i = 0; i < nt; ++i) sup = ext_max(sup, psi[i][x]);
    lhs = ext_min(lhs, sup);
  }
  ExtReal rhs = ExtReal::minus_inf();
  for (std::size_t i = 0; i < nt; ++i) {
    ExtReal inf = ExtReal::plus_inf();
    for (std::size_t x = 0; x < nn; ++x) inf = ext_min(inf, psi[i][x]);
    rhs = ext_max(rhs, inf);
  }
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.holds = lhs == rhs;

  rep.non_decreasing = true;
  for (std::size_t i = 0; i + 1 < nt && rep.non_decreasing; ++i)
    for (std::size_t x = 0; x < nn; ++x)
      if (!(seq.terms[i].at(x) <= seq.terms[i + 1].at(x))) {
        rep.non_decreasing = false;
        break;
      }

  ExtReal lp = ExtReal::plus_inf();
  for (std::size_t x = 0; x < nn; ++x) {
    ExtReal sup = ExtReal::minus_inf();
    for (std::size_t i = 0; i < nt; ++i) sup = ext_max(sup, seq.terms[i].at(x));
    lp = ext_min(lp, sup);
  }
  ExtReal rp = ExtReal::minus_inf();
  for (std::size_t i = 0; i < nt; ++i) {
    ExtReal inf = ExtReal::plus_inf();
    for (std::size_t x = 0; x < nn; ++x) inf = ext_min(inf, seq.terms[i].at(x));
    rp = ext_max(rp, inf);
  }
  rep.lhs_plain = lp;
  rep.rhs_plain = rp;
  rep.plain_holds = rep.non_decreasing ? lp == rp : true;
  return rep;
}

MarginalReport marginal_check(const BifunctionFamily& fam, int initial_density, int max_density,
                              double tol) {
  MarginalReport rep;
  const std::size_t n = fam.arity();
  std::vector<PwlFunction> gens;
  for (const auto& g : fam.generators)
    gens.push_back(fam.y_restriction ? restrict_to(g, *fam.y_restriction) : g);

  // dual axis: union of the vertex conjugates' breakpoints plus a uniform fill
  std::vector<double> axis;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> w(n, 0.0);
    w[k] = 1.0;
    PwlFunction conj = conjugate(weighted_sum(w, gens));
    for (double s : conj.breakpoints()) axis.push_back(s);
  }
  if (axis.empty()) axis = {-1.0, 1.0};
  std::sort(axis.begin(), axis.end());
  double lo = axis.front() - 1.0, hi = axis.back() + 1.0;
  for (int i = 0; i <= 16; ++i) axis.push_back(lo + (hi - lo) * i / 16.0);
  std::sort(axis.begin(), axis.end());
  axis.erase(std::unique(axis.begin(), axis.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-9; }),
             axis.end());
  rep.dual_nodes = axis.size();

  auto build_marginal = [&](const std::vector<std::vector<double>>& probes) {
    std::vector<ExtReal> vals(axis.size(), ExtReal::plus_inf());
    for (const auto& lam : probes) {
      PwlFunction conj = conjugate(weighted_sum(lam, gens));
      for (std::size_t i = 0; i < axis.size(); ++i)
        vals[i] = ext_min(vals[i], conj.evaluate(axis[i]));
    }
    return GridFunction({axis}, std::move(vals));
  };

  std::vector<std::vector<double>> probes;
  for (int d = initial_density;; d *= 2) {
    probes = simplex_mesh(n, d);
    rep.density_used = d;
    if (grid_convexity_check(build_marginal(probes), tol)) {
      rep.convex_ok = true;
      return rep;
    }
    if (d >= max_density) break;
  }

  // augment the probe set with the exact per-node minimizers from the dual LP
  bool all_proper = true;
  for (const auto& g : gens) all_proper = all_proper && is_proper(g);
  if (!all_proper) {
    rep.convex_ok = false;
    return rep;
  }
  rep.lp_polish = true;
  std::vector<double> xs = merged_breakpoints(gens);
  for (double ystar : axis) {
    std::vector<LpRow> lower, feas;
    auto try_row = [&](double at, auto value_of) {
      std::vector<double> a(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        ExtReal v = value_of(gens[k]);
        if (v.is_plus_inf()) return;
        a[k] = -v.as_double();
      }
      lower.push_back(LpRow{std::move(a), ystar * at});
    };
    for (double x : xs) {
      try_row(x, [&](const PwlFunction& g) { return g.evaluate(x); });
      try_row(x, [&](const PwlFunction& g) { return ext_limit(g, x, true); });
      try_row(x, [&](const PwlFunction& g) { return ext_limit(g, x, false); });
    }
    bool left_open = true, right_open = true;
    for (const auto& g : gens) {
      left_open = left_open && g.left_tail().kind == PieceKind::affine;
      right_open = right_open && g.right_tail().kind == PieceKind::affine;
    }
    if (left_open) {  // sup over the left ray finite iff y* >= sum lambda_k s_k
      std::vector<double> a(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) a[k] = -gens[k].left_tail().slope;
      feas.push_back(LpRow{std::move(a), ystar});
    }
    if (right_open) {
      std::vector<double> a(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) a[k] = gens[k].right_tail().slope;
      feas.push_back(LpRow{std::move(a), -ystar});
    }
    if (lower.empty()) continue;
    LpResult res = minimize_over_simplex(n, lower, feas);
    if (res.status == LpResult::Status::optimal) probes.push_back(res.lambda);
  }
  rep.convex_ok = grid_convexity_check(build_marginal(probes), tol);
  return rep;
}

}  // namespace mmx
