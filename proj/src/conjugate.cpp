#include "mmx/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmx {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// line s -> a*s - w
PwlFunction support_line(double a, double w) { return PwlFunction::affine(a, -w); }

// sup over the open left ray below the anchor (x1, v1) with tail slope s0:
// +inf for s < s0, then the line s*x1 - v1
PwlFunction left_tail_conj(double x1, double v1, double s0) {
  return PwlFunction({s0}, {ExtReal(s0 * x1 - v1)}, {}, Tail::plus_inf(), Tail::affine(x1));
}

PwlFunction right_tail_conj(double xm, double vm, double s0) {
  return PwlFunction({s0}, {ExtReal(s0 * xm - vm)}, {}, Tail::affine(xm), Tail::plus_inf());
}

}  // namespace

PwlFunction conjugate(const PwlFunction& f) {
  if (f.takes_minus_inf()) return PwlFunction::constant(ExtReal::plus_inf());

  const auto& xs = f.breakpoints();
  const auto& vs = f.values();
  const auto& segs = f.segments();

  std::vector<PwlFunction> parts;
  // each breakpoint contributes via the lowest of its value and the adjacent
  // segment limits (the sup scans limits of open segments)
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double w = kInf;
    if (vs[i].is_finite()) w = vs[i].as_double();
    if (i > 0 && segs[i - 1].kind == PieceKind::affine) w = std::min(w, segs[i - 1].right_limit);
    if (i + 1 < xs.size() && segs[i].kind == PieceKind::affine) w = std::min(w, segs[i].left_limit);
    if (std::isfinite(w)) parts.push_back(support_line(xs[i], w));
  }
  if (f.left_tail().kind == PieceKind::affine)
    parts.push_back(left_tail_conj(xs.front(), vs.front().as_double(), f.left_tail().slope));
  if (f.right_tail().kind == PieceKind::affine)
    parts.push_back(right_tail_conj(xs.back(), vs.back().as_double(), f.right_tail().slope));

  if (parts.empty()) return PwlFunction::constant(ExtReal::minus_inf());  // f identically +inf
  return pointwise_max(parts).canonical();
}

GridFunction conjugate_grid(const GridFunction& f, std::vector<double> dual_axis) {
  if (f.dims() != 1) throw std::invalid_argument("conjugate_grid: 1-D grids only");
  const auto& ax = f.axes()[0];
  std::vector<ExtReal> out;
  out.reserve(dual_axis.size());
  for (double s : dual_axis) {
    ExtReal best = ExtReal::minus_inf();
    for (std::size_t i = 0; i < ax.size(); ++i) {
      ExtReal v = f.at(i);
      ExtReal term;
      if (v.is_plus_inf())
        term = ExtReal::minus_inf();
      else if (v.is_minus_inf())
        term = ExtReal::plus_inf();
      else
        term = ExtReal(s * ax[i] - v.as_double());
      best = ext_max(best, term);
    }
    out.push_back(best);
  }
  return GridFunction({std::move(dual_axis)}, std::move(out));
}

PwlFunction biconjugate(const PwlFunction& f) { return conjugate(conjugate(f)); }

IdentityReport check_moreau(const PwlFunction& f, double tol) {
  IdentityReport rep;
  rep.identity = "moreau";
  PwlFunction hull = closed_convex_hull(f);
  if (!is_proper(hull)) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note = "improper hull - Moreau hypothesis violated";
    rep.holds = true;  // nothing asserted
    return rep;
  }
  PwlFunction bi = biconjugate(f);
  bool ok = pwl_equal(bi, hull, tol);
  rep.max_discrepancy = max_discrepancy(bi, hull);
  if (is_gamma0(f)) {
    ok = ok && pwl_equal(bi, f, tol);
    rep.max_discrepancy = std::max(rep.max_discrepancy, max_discrepancy(bi, f));
  }
  rep.holds = ok;
  return rep;
}

IdentityReport conj_of_inf(std::span<const PwlFunction> family, double tol) {
  if (family.empty()) throw std::invalid_argument("conj_of_inf: empty family");
  IdentityReport rep;
  rep.identity = "conv3";
  PwlFunction lhs = conjugate(pointwise_min(family));
  std::vector<PwlFunction> conjs;
  conjs.reserve(family.size());
  for (const auto& f : family) conjs.push_back(conjugate(f));
  PwlFunction rhs = pointwise_max(conjs);
  rep.holds = pwl_equal(lhs, rhs, tol);
  rep.max_discrepancy = max_discrepancy(lhs, rhs);
  return rep;
}

IdentityReport conj_of_sup(std::span<const PwlFunction> family, double tol) {
  if (family.empty()) throw std::invalid_argument("conj_of_sup: empty family");
  IdentityReport rep;
  rep.identity = "infsupcon";
  PwlFunction sup = pointwise_max(family);
  for (const auto& f : family)
    if (!is_gamma0(f)) {
      rep.hypothesis_ok = false;
      rep.hypothesis_note = "hypothesis failed: family member not in Gamma0";
      rep.holds = true;
      return rep;
    }
  if (!is_gamma0(sup)) {
    rep.hypothesis_ok = false;
    rep.hypothesis_note = "hypothesis failed: supremum not in Gamma0";
    rep.holds = true;
    return rep;
  }
  PwlFunction lhs = conjugate(sup);
  std::vector<PwlFunction> conjs;
  conjs.reserve(family.size());
  for (const auto& f : family) conjs.push_back(conjugate(f));
  PwlFunction rhs = closed_convex_hull(pointwise_min(conjs));
  rep.holds = pwl_equal(lhs, rhs, tol);
  rep.max_discrepancy = max_discrepancy(lhs, rhs);
  return rep;
}

ExtReal lipschitz_envelope(const PwlFunction& f, double radius, double x0) {
  if (!(radius > 0)) throw std::invalid_argument("lipschitz_envelope: radius must be positive");
  const double w[] = {1.0, radius};
  const PwlFunction fs[] = {f, PwlFunction::abs_shifted(x0)};
  return infimum(weighted_sum(w, fs)).value;
}

ExtReal lipschitz_envelope(const GridFunction& f, double radius, double x0) {
  if (!(radius > 0)) throw std::invalid_argument("lipschitz_envelope: radius must be positive");
  if (f.dims() != 1) throw std::invalid_argument("lipschitz_envelope: 1-D grids only");
  const auto& ax = f.axes()[0];
  ExtReal best = ExtReal::plus_inf();
  for (std::size_t i = 0; i < ax.size(); ++i)
    best = ext_min(best, add(ExtReal(radius * std::abs(x0 - ax[i])), f.at(i)));
  return best;
}

}  // namespace mmx
