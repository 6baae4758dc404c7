#include "mmx/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmx/mesh.hpp"
#include "mmx/conjugate.hpp"
#include "mmx/minimax.hpp"

namespace mmx {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

void widen(SubdiffInterval& acc, double lo, double hi) {
  if (lo > hi) return;
  if (acc.empty) {
    acc = SubdiffInterval::of(lo, hi);
  } else {
    acc.lo = std::min(acc.lo, lo);
    acc.hi = std::max(acc.hi, hi);
  }
}

}  // namespace

SubdiffInterval convex_level_set(const PwlFunction& t, double c) {
  // contributions per piece; their union is one interval since t is convex
  const double cp = c + 1e-12 * std::max(1.0, std::abs(c));
  const auto& xs = t.breakpoints();
  const auto& vs = t.values();
  const auto& segs = t.segments();
  SubdiffInterval acc = SubdiffInterval::none();

  for (std::size_t i = 0; i < xs.size(); ++i)
    if (vs[i] <= ExtReal(cp)) widen(acc, xs[i], xs[i]);

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Segment& s = segs[i];
    double a = xs[i], b = xs[i + 1];
    if (s.kind == PieceKind::minus_inf) {
      widen(acc, a, b);
    } else if (s.kind == PieceKind::affine) {
      double slope = (s.right_limit - s.left_limit) / (b - a);
      if (slope == 0.0) {
        if (s.left_limit <= cp) widen(acc, a, b);
      } else {
        double st = a + (cp - s.left_limit) / slope;  // level crossing on the line
        if (slope > 0)
          widen(acc, a, std::min(b, st));
        else
          widen(acc, std::max(a, st), b);
      }
    }
  }

  auto tail_piece = [&](bool left_side) {
    const Tail& tl = left_side ? t.left_tail() : t.right_tail();
    double anchor = left_side ? xs.front() : xs.back();
    double v0 = left_side ? vs.front().as_double() : vs.back().as_double();
    if (tl.kind == PieceKind::minus_inf) {
      if (left_side)
        widen(acc, -kInf, anchor);
      else
        widen(acc, anchor, kInf);
      return;
    }
    if (tl.kind != PieceKind::affine) return;
    double slope = tl.slope;
    if (slope == 0.0) {
      if (v0 <= cp) widen(acc, left_side ? -kInf : anchor, left_side ? anchor : kInf);
      return;
    }
    double st = anchor + (cp - v0) / slope;
    if (left_side) {
      // values v0 + slope*(s - anchor) on s < anchor
      if (slope > 0)
        widen(acc, -kInf, std::min(anchor, st));
      else if (st <= anchor)
        widen(acc, st, anchor);
    } else {
      if (slope < 0)
        widen(acc, std::max(anchor, st), kInf);
      else if (st >= anchor)
        widen(acc, anchor, st);
    }
  };
  tail_piece(true);
  tail_piece(false);
  return acc;
}

SubdiffInterval eps_subdifferential(const PwlFunction& f, double x, double eps) {
  if (!is_convex(f))
    throw std::invalid_argument("eps_subdifferential: function must be convex");
  if (eps < 0) return SubdiffInterval::none();
  ExtReal fx = f.evaluate(x);
  if (fx.is_plus_inf()) return SubdiffInterval::none();  // x outside dom f
  if (fx.is_minus_inf()) return SubdiffInterval::of(-kInf, kInf);
  // s qualifies iff f*(s) - s*x <= eps - f(x)
  PwlFunction t = add_affine(conjugate(f), -x, 0.0);
  return convex_level_set(t, eps - fx.as_double());
}

std::vector<double> eps_subdiff_oracle(const GridFunction& f, double x, double eps,
                                       std::span<const double> slope_probes) {
  if (f.dims() != 1) throw std::invalid_argument("eps_subdiff_oracle: 1-D grids only");
  std::vector<double> out;
  if (eps < 0) return out;
  const auto& ax = f.axes()[0];
  std::size_t node = ax.size();
  for (std::size_t i = 0; i < ax.size(); ++i)
    if (ax[i] == x) {
      node = i;
      break;
    }
  if (node == ax.size()) return out;  // x not a sampled point
  ExtReal fx = f.at(node);
  if (fx.is_plus_inf()) return out;  // outside sampled dom
  for (double s : slope_probes) {
    bool ok = true;
    for (std::size_t j = 0; j < ax.size() && ok; ++j) {
      // f(y) >= f(x) + s(y - x) - eps
      ExtReal rhs = add(fx, ExtReal(s * (ax[j] - x) - eps));
      ok = le_within(rhs, f.at(j), 1e-9);
    }
    if (ok) out.push_back(s);
  }
  return out;
}

MaxRuleReport max_rule(std::span<const PwlFunction> funcs, double x, double eps,
                       const MaxRuleOptions& opts) {
  if (funcs.empty()) throw std::invalid_argument("max_rule: empty family");
  MaxRuleReport rep;
  const std::size_t n = funcs.size();

  bool all_convex = true, all_proper = true, all_lsc = true;
  for (const auto& f : funcs) {
    all_convex = all_convex && is_convex(f);
    all_proper = all_proper && is_proper(f);
    all_lsc = all_lsc && is_lsc(f);
  }
  PwlFunction fmax = pointwise_max(funcs);
  bool dom_ok = !fmax.domain().empty();
  if (!all_convex || !(all_proper || all_lsc) || !dom_ok) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note = !all_convex   ? "generators must be convex"
                          : !dom_ok     ? "dom(max) is empty"
                                        : "neither all-proper nor all-lsc";
    return rep;
  }

  ExtReal fx = fmax.evaluate(x);
  if (!fx.is_finite()) {
    rep.vacuous = true;
    rep.hypothesis_note = "formula vacuous at x: f(x) is infinite";
    return rep;
  }
  rep.lhs = eps_subdifferential(fmax, x, eps);

  std::vector<ExtReal> member_values(n);
  for (std::size_t k = 0; k < n; ++k) member_values[k] = funcs[k].evaluate(x);

  auto member_interval = [&](std::span<const double> lam) -> SubdiffInterval {
    ExtReal flam(0.0);
    for (std::size_t k = 0; k < n; ++k) flam = add(flam, scale(lam[k], member_values[k]));
    if (flam.is_plus_inf()) return SubdiffInterval::none();  // cannot happen when f(x) finite
    ExtReal shift = add(ExtReal(eps - fx.as_double()), flam);
    if (shift.is_minus_inf() || shift.as_double() < 0) return SubdiffInterval::none();
    std::vector<double> w(lam.begin(), lam.end());
    PwlFunction flambda = weighted_sum(w, funcs);
    return eps_subdifferential(flambda, x, shift.as_double());
  };

  // dual-LP candidates: the attaining weights for an endpoint beta maximize
  // inf_y (f_lambda(y) - beta y) over the simplex
  std::vector<std::vector<double>> seeds;
  if (all_proper && !rep.lhs.empty) {
    for (double beta : {rep.lhs.lo, rep.lhs.hi}) {
      if (!std::isfinite(beta)) continue;
      BifunctionFamily tilted;
      for (const auto& f : funcs) tilted.generators.push_back(add_affine(f, -beta, 0.0));
      DualValue dv = rhs_value(tilted);
      if (!dv.maximizer.weights.empty()) seeds.push_back(dv.maximizer.weights);
    }
  }

  auto eval_round = [&](int density) {
    std::vector<SubdiffInterval> members;
    for (const auto& lam : seeds) {
      SubdiffInterval m = member_interval(lam);
      if (!m.empty) members.push_back(m);
    }
    for (const auto& lam : simplex_mesh(n, density)) {
      SubdiffInterval m = member_interval(lam);
      if (!m.empty) members.push_back(m);
    }
    return members;
  };

  auto merge_cover = [](std::vector<SubdiffInterval> members) {
    std::sort(members.begin(), members.end(),
              [](const SubdiffInterval& a, const SubdiffInterval& b) { return a.lo < b.lo; });
    std::vector<SubdiffInterval> cover;
    for (const auto& m : members) {
      if (!cover.empty() && m.lo <= cover.back().hi + 1e-12) {
        cover.back().hi = std::max(cover.back().hi, m.hi);
      } else {
        cover.push_back(m);
      }
    }
    return cover;
  };

  int density = opts.initial_density;
  while (true) {
    std::vector<SubdiffInterval> members = eval_round(density);
    rep.inclusion_ok = true;
    for (const auto& m : members)
      rep.inclusion_ok = rep.inclusion_ok && rep.lhs.contains_interval(m, opts.inclusion_tol);
    rep.rhs_cover = merge_cover(std::move(members));
    rep.density_used = density;

    if (rep.lhs.empty) {
      rep.endpoint_gap = rep.rhs_cover.empty() ? 0.0 : kInf;
    } else if (rep.rhs_cover.empty()) {
      rep.endpoint_gap = kInf;
    } else {
      double glo, ghi;
      if (std::isfinite(rep.lhs.lo))
        glo = std::max(0.0, rep.rhs_cover.front().lo - rep.lhs.lo);
      else
        glo = std::isfinite(rep.rhs_cover.front().lo) ? kInf : 0.0;
      if (std::isfinite(rep.lhs.hi))
        ghi = std::max(0.0, rep.lhs.hi - rep.rhs_cover.back().hi);
      else
        ghi = std::isfinite(rep.rhs_cover.back().hi) ? kInf : 0.0;
      rep.endpoint_gap = std::max(glo, ghi);
    }
    if (rep.endpoint_gap <= opts.tol || density >= opts.max_density) break;
    density *= 2;
  }
  return rep;
}

}  // namespace mmx
