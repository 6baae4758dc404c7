#include "mmx/pwl.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmx {

namespace {

constexpr double kMergeEps = 1e-12;  // breakpoint dedup, absolute
constexpr double kCanonEps = 1e-10;  // redundancy detection
const double kInf = std::numeric_limits<double>::infinity();

bool near(double a, double b, double eps) { return std::abs(a - b) <= eps; }

double seg_slope(const Segment& s, double dx) { return (s.right_limit - s.left_limit) / dx; }

std::vector<double> merge_coords(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::vector<double> dedup;
  for (double x : out)
    if (dedup.empty() || x - dedup.back() > kMergeEps) dedup.push_back(x);
  return dedup;
}

// Inputs for assembling a function from per-cell data. Rays carry the limit
// approached at the adjacent breakpoint; when an affine ray's limit disagrees
// with the breakpoint value, a synthetic breakpoint is inserted one unit out
// so the tail can stay anchored at a value it is continuous with.
struct RaySpec {
  PieceKind kind = PieceKind::plus_inf;
  double slope = 0.0;
  double limit = 0.0;  // limit at the anchor breakpoint (affine only)
};

PwlFunction build_from_parts(std::vector<double> xs, std::vector<ExtReal> vals,
                             std::vector<Segment> cells, RaySpec lray, RaySpec rray) {
  assert(!xs.empty());
  Tail left, right;
  if (lray.kind == PieceKind::affine) {
    double scale = std::max({1.0, std::abs(lray.limit)});
    if (vals.front().is_finite() && near(vals.front().as_double(), lray.limit, 1e-12 * scale)) {
      left = Tail::affine(lray.slope);
    } else {
      double x_new = xs.front() - 1.0;
      double v_new = lray.limit - lray.slope;
      xs.insert(xs.begin(), x_new);
      vals.insert(vals.begin(), ExtReal(v_new));
      cells.insert(cells.begin(), Segment::affine(v_new, lray.limit));
      left = Tail::affine(lray.slope);
    }
  } else {
    left = Tail{lray.kind, 0.0};
  }
  if (rray.kind == PieceKind::affine) {
    double scale = std::max({1.0, std::abs(rray.limit)});
    if (vals.back().is_finite() && near(vals.back().as_double(), rray.limit, 1e-12 * scale)) {
      right = Tail::affine(rray.slope);
    } else {
      double x_new = xs.back() + 1.0;
      double v_new = rray.limit + rray.slope;
      xs.push_back(x_new);
      vals.push_back(ExtReal(v_new));
      cells.push_back(Segment::affine(rray.limit, v_new));
      right = Tail::affine(rray.slope);
    }
  } else {
    right = Tail{rray.kind, 0.0};
  }
  return PwlFunction(std::move(xs), std::move(vals), std::move(cells), left, right);
}

Segment cell_from_expr(const PieceExpr& e, double a, double b) {
  if (e.kind != PieceKind::affine) return Segment{e.kind, 0, 0};
  return Segment::affine(e.at(a), e.at(b));
}

}  // namespace

Interval closed_hull(const std::vector<Interval>& parts) {
  Interval h{kInf, -kInf, false, false};
  for (const Interval& p : parts) {
    if (p.empty()) continue;
    h.lo = std::min(h.lo, p.lo);
    h.hi = std::max(h.hi, p.hi);
  }
  h.lo_closed = std::isfinite(h.lo);
  h.hi_closed = std::isfinite(h.hi);
  return h;
}

PwlFunction::PwlFunction(std::vector<double> breakpoints, std::vector<ExtReal> values,
                         std::vector<Segment> segments, Tail left_tail, Tail right_tail)
    : xs_(std::move(breakpoints)),
      vs_(std::move(values)),
      segs_(std::move(segments)),
      left_(left_tail),
      right_(right_tail) {
  if (xs_.empty()) throw std::invalid_argument("PwlFunction: needs at least one breakpoint");
  if (vs_.size() != xs_.size()) throw std::invalid_argument("PwlFunction: values/breakpoints size mismatch");
  if (segs_.size() + 1 != xs_.size()) throw std::invalid_argument("PwlFunction: segments size mismatch");
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    if (!(xs_[i] < xs_[i + 1])) throw std::invalid_argument("PwlFunction: breakpoints must increase strictly");
    if (segs_[i].kind == PieceKind::affine &&
        !(std::isfinite(segs_[i].left_limit) && std::isfinite(segs_[i].right_limit)))
      throw std::invalid_argument("PwlFunction: affine segment limits must be finite");
  }
  for (double x : xs_)
    if (!std::isfinite(x)) throw std::invalid_argument("PwlFunction: breakpoints must be finite");
  if (left_.kind == PieceKind::affine && !vs_.front().is_finite())
    throw std::invalid_argument("PwlFunction: affine left tail needs a finite anchor value");
  if (right_.kind == PieceKind::affine && !vs_.back().is_finite())
    throw std::invalid_argument("PwlFunction: affine right tail needs a finite anchor value");
}

PwlFunction PwlFunction::constant(ExtReal c) {
  Tail t = c.is_plus_inf() ? Tail::plus_inf() : (c.is_minus_inf() ? Tail::minus_inf() : Tail::affine(0));
  return PwlFunction({0.0}, {c}, {}, t, t);
}

PwlFunction PwlFunction::affine(double slope, double intercept) {
  return PwlFunction({0.0}, {ExtReal(intercept)}, {}, Tail::affine(slope), Tail::affine(slope));
}

PwlFunction PwlFunction::abs_shifted(double center) {
  return PwlFunction({center}, {ExtReal(0.0)}, {}, Tail::affine(-1.0), Tail::affine(1.0));
}

PwlFunction PwlFunction::indicator(const Interval& a) {
  if (a.empty()) return constant(ExtReal::plus_inf());
  bool lo_unb = !std::isfinite(a.lo);
  bool hi_unb = !std::isfinite(a.hi);
  if (lo_unb && hi_unb) return constant(ExtReal(0.0));
  if (lo_unb) {  // (-inf, b] or (-inf, b)
    ExtReal vb = a.hi_closed ? ExtReal(0.0) : ExtReal::plus_inf();
    if (a.hi_closed)
      return PwlFunction({a.hi}, {vb}, {}, Tail::affine(0), Tail::plus_inf());
    return PwlFunction({a.hi - 1.0, a.hi}, {ExtReal(0.0), vb}, {Segment::affine(0, 0)},
                       Tail::affine(0), Tail::plus_inf());
  }
  if (hi_unb) {  // [a, +inf) or (a, +inf)
    ExtReal va = a.lo_closed ? ExtReal(0.0) : ExtReal::plus_inf();
    if (a.lo_closed)
      return PwlFunction({a.lo}, {va}, {}, Tail::plus_inf(), Tail::affine(0));
    return PwlFunction({a.lo, a.lo + 1.0}, {va, ExtReal(0.0)}, {Segment::affine(0, 0)},
                       Tail::plus_inf(), Tail::affine(0));
  }
  if (a.lo == a.hi) return PwlFunction({a.lo}, {ExtReal(0.0)}, {}, Tail::plus_inf(), Tail::plus_inf());
  ExtReal vl = a.lo_closed ? ExtReal(0.0) : ExtReal::plus_inf();
  ExtReal vr = a.hi_closed ? ExtReal(0.0) : ExtReal::plus_inf();
  return PwlFunction({a.lo, a.hi}, {vl, vr}, {Segment::affine(0, 0)}, Tail::plus_inf(),
                     Tail::plus_inf());
}

ExtReal PwlFunction::evaluate(double x) const {
  if (x < xs_.front()) {
    switch (left_.kind) {
      case PieceKind::plus_inf: return ExtReal::plus_inf();
      case PieceKind::minus_inf: return ExtReal::minus_inf();
      case PieceKind::affine:
        return ExtReal(vs_.front().as_double() + left_.slope * (x - xs_.front()));
    }
  }
  if (x > xs_.back()) {
    switch (right_.kind) {
      case PieceKind::plus_inf: return ExtReal::plus_inf();
      case PieceKind::minus_inf: return ExtReal::minus_inf();
      case PieceKind::affine:
        return ExtReal(vs_.back().as_double() + right_.slope * (x - xs_.back()));
    }
  }
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  if (it != xs_.end() && *it == x) return vs_[static_cast<std::size_t>(it - xs_.begin())];
  std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const Segment& s = segs_[i];
  switch (s.kind) {
    case PieceKind::plus_inf: return ExtReal::plus_inf();
    case PieceKind::minus_inf: return ExtReal::minus_inf();
    case PieceKind::affine: {
      double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
      return ExtReal(s.left_limit + t * (s.right_limit - s.left_limit));
    }
  }
  return ExtReal(0.0);  // unreachable
}

PieceExpr PwlFunction::piece_on(double a, double b) const {
  if (!(a < b)) throw std::logic_error("piece_on: empty interval");
  if (b <= xs_.front()) {
    if (left_.kind != PieceKind::affine) return PieceExpr{left_.kind, 0, 0, 0};
    return PieceExpr{PieceKind::affine, left_.slope, vs_.front().as_double(), xs_.front()};
  }
  if (a >= xs_.back()) {
    if (right_.kind != PieceKind::affine) return PieceExpr{right_.kind, 0, 0, 0};
    return PieceExpr{PieceKind::affine, right_.slope, vs_.back().as_double(), xs_.back()};
  }
  if (a < xs_.front()) throw std::logic_error("piece_on: interval spans the left tail boundary");
  auto it = std::upper_bound(xs_.begin(), xs_.end(), a);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  if (i + 1 >= xs_.size() || b > xs_[i + 1] + kMergeEps)
    throw std::logic_error("piece_on: interval contains a breakpoint");
  const Segment& s = segs_[i];
  if (s.kind != PieceKind::affine) return PieceExpr{s.kind, 0, 0, 0};
  return PieceExpr{PieceKind::affine, seg_slope(s, xs_[i + 1] - xs_[i]), s.left_limit, xs_[i]};
}

ExtReal PwlFunction::left_limit_at(std::size_t i) const {
  if (i == 0) {
    switch (left_.kind) {
      case PieceKind::plus_inf: return ExtReal::plus_inf();
      case PieceKind::minus_inf: return ExtReal::minus_inf();
      case PieceKind::affine: return vs_.front();  // anchored, continuous
    }
  }
  const Segment& s = segs_[i - 1];
  switch (s.kind) {
    case PieceKind::plus_inf: return ExtReal::plus_inf();
    case PieceKind::minus_inf: return ExtReal::minus_inf();
    case PieceKind::affine: return ExtReal(s.right_limit);
  }
  return ExtReal(0.0);  // unreachable
}

ExtReal PwlFunction::right_limit_at(std::size_t i) const {
  if (i + 1 == xs_.size()) {
    switch (right_.kind) {
      case PieceKind::plus_inf: return ExtReal::plus_inf();
      case PieceKind::minus_inf: return ExtReal::minus_inf();
      case PieceKind::affine: return vs_.back();
    }
  }
  const Segment& s = segs_[i];
  switch (s.kind) {
    case PieceKind::plus_inf: return ExtReal::plus_inf();
    case PieceKind::minus_inf: return ExtReal::minus_inf();
    case PieceKind::affine: return ExtReal(s.left_limit);
  }
  return ExtReal(0.0);  // unreachable
}

std::vector<Interval> PwlFunction::domain() const {
  // atoms in coordinate order: left ray, then alternating breakpoints/segments, right ray
  struct Atom {
    Interval iv;
    bool in_dom;
  };
  std::vector<Atom> atoms;
  atoms.push_back({Interval{-kInf, xs_.front(), false, false}, left_.kind != PieceKind::plus_inf});
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    atoms.push_back({Interval::point(xs_[i]), !vs_[i].is_plus_inf()});
    if (i + 1 < xs_.size())
      atoms.push_back({Interval::open(xs_[i], xs_[i + 1]), segs_[i].kind != PieceKind::plus_inf});
  }
  atoms.push_back({Interval{xs_.back(), kInf, false, false}, right_.kind != PieceKind::plus_inf});

  std::vector<Interval> out;
  bool open_run = false;
  Interval cur;
  for (const Atom& a : atoms) {
    if (a.in_dom) {
      if (!open_run) {
        cur = a.iv;
        open_run = true;
      } else {
        cur.hi = a.iv.hi;
        cur.hi_closed = a.iv.hi_closed;
      }
    } else if (open_run) {
      out.push_back(cur);
      open_run = false;
    }
  }
  if (open_run) out.push_back(cur);
  return out;
}

bool PwlFunction::takes_minus_inf() const {
  for (const ExtReal& v : vs_)
    if (v.is_minus_inf()) return true;
  for (const Segment& s : segs_)
    if (s.kind == PieceKind::minus_inf) return true;
  return left_.kind == PieceKind::minus_inf || right_.kind == PieceKind::minus_inf;
}

bool PwlFunction::identically_plus_inf() const {
  for (const ExtReal& v : vs_)
    if (!v.is_plus_inf()) return false;
  for (const Segment& s : segs_)
    if (s.kind != PieceKind::plus_inf) return false;
  return left_.kind == PieceKind::plus_inf && right_.kind == PieceKind::plus_inf;
}

PwlFunction PwlFunction::canonical() const {
  std::vector<double> xs = xs_;
  std::vector<ExtReal> vs = vs_;
  std::vector<Segment> segs = segs_;
  Tail left = left_, right = right_;

  auto slope_of = [&](std::size_t i) { return seg_slope(segs[i], xs[i + 1] - xs[i]); };

  bool changed = true;
  while (changed && xs.size() > 1) {
    changed = false;
    // interior removals
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
      const Segment& l = segs[i - 1];
      const Segment& r = segs[i];
      bool removable = false;
      if (l.kind == PieceKind::affine && r.kind == PieceKind::affine && vs[i].is_finite()) {
        double v = vs[i].as_double();
        double sl = slope_of(i - 1), sr = slope_of(i);
        double sc = std::max({1.0, std::abs(sl), std::abs(sr)});
        double vc = std::max(1.0, std::abs(v));
        removable = near(v, l.right_limit, kCanonEps * vc) && near(v, r.left_limit, kCanonEps * vc) &&
                    near(sl, sr, kCanonEps * sc);
      } else if (l.kind != PieceKind::affine && l.kind == r.kind) {
        removable = (l.kind == PieceKind::plus_inf && vs[i].is_plus_inf()) ||
                    (l.kind == PieceKind::minus_inf && vs[i].is_minus_inf());
      }
      if (removable) {
        Segment merged = l;
        if (l.kind == PieceKind::affine) merged = Segment::affine(l.left_limit, r.right_limit);
        segs[i - 1] = merged;
        segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(i));
        xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(i));
        vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
    if (changed) continue;
    // first-breakpoint removal
    if (xs.size() > 1) {
      const Segment& s0 = segs.front();
      bool removable = false;
      if (left.kind == PieceKind::affine && s0.kind == PieceKind::affine && vs[0].is_finite() &&
          vs[1].is_finite()) {
        double sl = slope_of(0);
        double sc = std::max({1.0, std::abs(sl), std::abs(left.slope)});
        removable = near(vs[0].as_double(), s0.left_limit, kCanonEps) &&
                    near(vs[1].as_double(), s0.right_limit, kCanonEps) &&
                    near(left.slope, sl, kCanonEps * sc);
      } else if (left.kind != PieceKind::affine && s0.kind == left.kind) {
        removable = (left.kind == PieceKind::plus_inf && vs[0].is_plus_inf()) ||
                    (left.kind == PieceKind::minus_inf && vs[0].is_minus_inf());
      }
      if (removable) {
        xs.erase(xs.begin());
        vs.erase(vs.begin());
        segs.erase(segs.begin());
        changed = true;
        continue;
      }
    }
    // last-breakpoint removal
    if (xs.size() > 1) {
      std::size_t last = xs.size() - 1;
      const Segment& sl = segs.back();
      bool removable = false;
      if (right.kind == PieceKind::affine && sl.kind == PieceKind::affine && vs[last].is_finite() &&
          vs[last - 1].is_finite()) {
        double s = slope_of(last - 1);
        double sc = std::max({1.0, std::abs(s), std::abs(right.slope)});
        removable = near(vs[last].as_double(), sl.right_limit, kCanonEps) &&
                    near(vs[last - 1].as_double(), sl.left_limit, kCanonEps) &&
                    near(right.slope, s, kCanonEps * sc);
      } else if (right.kind != PieceKind::affine && sl.kind == right.kind) {
        removable = (right.kind == PieceKind::plus_inf && vs[last].is_plus_inf()) ||
                    (right.kind == PieceKind::minus_inf && vs[last].is_minus_inf());
      }
      if (removable) {
        xs.pop_back();
        vs.pop_back();
        segs.pop_back();
        changed = true;
        continue;
      }
    }
  }

  // normalize anchor for breakpoint-free shapes (pure affine / constant +-inf)
  if (xs.size() == 1 && xs[0] != 0.0) {
    if (left.kind == PieceKind::affine && right.kind == PieceKind::affine &&
        near(left.slope, right.slope, kCanonEps * std::max(1.0, std::abs(left.slope)))) {
      double v0 = vs[0].as_double() - left.slope * xs[0];
      return PwlFunction({0.0}, {ExtReal(v0)}, {}, left, right);
    }
    if (left.kind != PieceKind::affine && left.kind == right.kind &&
        ((left.kind == PieceKind::plus_inf && vs[0].is_plus_inf()) ||
         (left.kind == PieceKind::minus_inf && vs[0].is_minus_inf()))) {
      return PwlFunction({0.0}, {vs[0]}, {}, left, right);
    }
  }
  return PwlFunction(std::move(xs), std::move(vs), std::move(segs), left, right);
}

// ---------------------------------------------------------------------------
// predicates
// ---------------------------------------------------------------------------

bool is_proper(const PwlFunction& f) { return !f.takes_minus_inf() && !f.domain().empty(); }

bool is_lsc(const PwlFunction& f) {
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    ExtReal lim = ext_min(f.left_limit_at(i), f.right_limit_at(i));
    if (!le_within(f.values()[i], lim, 1e-12)) return false;
  }
  return true;
}

bool is_convex(const PwlFunction& f) {
  std::vector<Interval> dom = f.domain();
  if (dom.empty()) return true;  // identically +inf
  if (dom.size() > 1) return false;
  const Interval& d = dom[0];
  const auto& xs = f.breakpoints();
  const auto& vs = f.values();
  const auto& segs = f.segments();

  if (f.takes_minus_inf()) {
    // convex iff the function is -inf everywhere strictly inside dom
    if (f.left_tail().kind == PieceKind::affine && !std::isfinite(d.lo)) return false;
    if (f.right_tail().kind == PieceKind::affine && !std::isfinite(d.hi)) return false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] > d.lo && xs[i] < d.hi && !vs[i].is_minus_inf()) return false;
      if (i + 1 < xs.size()) {
        if (segs[i].kind == PieceKind::plus_inf) continue;  // outside dom
        bool inside = xs[i] >= d.lo && xs[i + 1] <= d.hi;
        if (inside && segs[i].kind != PieceKind::minus_inf) return false;
      }
    }
    return true;
  }

  // proper case: slopes over dom must be non-decreasing, interior breakpoints
  // continuous, and closed domain endpoints may only jump upward.
  const double tol = 1e-11;
  std::vector<double> slopes;
  if (f.left_tail().kind == PieceKind::affine) slopes.push_back(f.left_tail().slope);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (segs[i].kind != PieceKind::affine) continue;
    slopes.push_back(seg_slope(segs[i], xs[i + 1] - xs[i]));
  }
  if (f.right_tail().kind == PieceKind::affine) slopes.push_back(f.right_tail().slope);
  for (std::size_t k = 0; k + 1 < slopes.size(); ++k) {
    double sc = std::max({1.0, std::abs(slopes[k]), std::abs(slopes[k + 1])});
    if (slopes[k] > slopes[k + 1] + tol * sc) return false;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool interior = xs[i] > d.lo && xs[i] < d.hi;
    ExtReal ll = f.left_limit_at(i), rl = f.right_limit_at(i);
    if (interior) {
      if (!vs[i].is_finite() || !ll.is_finite() || !rl.is_finite()) return false;
      double sc = std::max(1.0, std::abs(vs[i].as_double()));
      if (!near(vs[i].as_double(), ll.as_double(), tol * sc)) return false;
      if (!near(vs[i].as_double(), rl.as_double(), tol * sc)) return false;
    } else if (xs[i] == d.lo && d.lo_closed) {
      if (rl.is_finite() && vs[i].is_finite() &&
          vs[i].as_double() < rl.as_double() - tol * std::max(1.0, std::abs(rl.as_double())))
        return false;
      if (rl.is_plus_inf() && xs[i] != d.hi) return false;  // gap right of the endpoint
    } else if (xs[i] == d.hi && d.hi_closed) {
      if (ll.is_finite() && vs[i].is_finite() &&
          vs[i].as_double() < ll.as_double() - tol * std::max(1.0, std::abs(ll.as_double())))
        return false;
      if (ll.is_plus_inf() && xs[i] != d.lo) return false;
    }
  }
  return true;
}

bool is_gamma0(const PwlFunction& f) { return is_proper(f) && is_convex(f) && is_lsc(f); }

// ---------------------------------------------------------------------------
// hull operators
// ---------------------------------------------------------------------------

PwlFunction lsc_hull(const PwlFunction& f) {
  const auto& xs = f.breakpoints();
  std::vector<ExtReal> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    vals[i] = ext_min(f.values()[i], ext_min(f.left_limit_at(i), f.right_limit_at(i)));
  std::vector<Segment> cells = f.segments();
  auto ray_of = [](const Tail& t, ExtReal anchor) {
    RaySpec r;
    r.kind = t.kind;
    if (t.kind == PieceKind::affine) {
      r.slope = t.slope;
      r.limit = anchor.as_double();
    }
    return r;
  };
  // affine tail limits are the original anchor values; lowering a breakpoint
  // must not move the ray, so pass the old anchors through the builder.
  return build_from_parts(xs, std::move(vals), std::move(cells),
                          ray_of(f.left_tail(), f.values().front()),
                          ray_of(f.right_tail(), f.values().back()));
}

namespace {

PwlFunction minus_inf_on(const Interval& d) {
  bool lo_unb = !std::isfinite(d.lo), hi_unb = !std::isfinite(d.hi);
  if (lo_unb && hi_unb) return PwlFunction::constant(ExtReal::minus_inf());
  if (lo_unb)
    return PwlFunction({d.hi}, {ExtReal::minus_inf()}, {}, Tail::minus_inf(), Tail::plus_inf());
  if (hi_unb)
    return PwlFunction({d.lo}, {ExtReal::minus_inf()}, {}, Tail::plus_inf(), Tail::minus_inf());
  if (d.lo == d.hi)
    return PwlFunction({d.lo}, {ExtReal::minus_inf()}, {}, Tail::plus_inf(), Tail::plus_inf());
  return PwlFunction({d.lo, d.hi}, {ExtReal::minus_inf(), ExtReal::minus_inf()},
                     {Segment::minus_inf()}, Tail::plus_inf(), Tail::plus_inf());
}

}  // namespace

PwlFunction convex_hull(const PwlFunction& f) {
  if (f.identically_plus_inf()) return PwlFunction::constant(ExtReal::plus_inf());
  if (f.takes_minus_inf()) return minus_inf_on(closed_hull(f.domain()));

  const auto& xs = f.breakpoints();
  const auto& vs = f.values();
  const auto& segs = f.segments();

  // finite generators: at each breakpoint the lowest of {value, adjacent
  // affine segment limits}; these are the epigraph closure's extreme points.
  std::vector<double> px, pw;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double w = kInf;
    if (vs[i].is_finite()) w = vs[i].as_double();
    if (i > 0 && segs[i - 1].kind == PieceKind::affine) w = std::min(w, segs[i - 1].right_limit);
    if (i + 1 < xs.size() && segs[i].kind == PieceKind::affine) w = std::min(w, segs[i].left_limit);
    if (std::isfinite(w)) {
      px.push_back(xs[i]);
      pw.push_back(w);
    }
  }
  assert(!px.empty());

  bool la = f.left_tail().kind == PieceKind::affine;
  bool ra = f.right_tail().kind == PieceKind::affine;
  double sL = la ? f.left_tail().slope : 0.0;
  double sR = ra ? f.right_tail().slope : 0.0;
  if (la && ra && sL > sR) return PwlFunction::constant(ExtReal::minus_inf());

  // lower convex hull (monotone chain), collinear middles dropped
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < px.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      double cross = (px[b] - px[a]) * (pw[i] - pw[a]) - (px[i] - px[a]) * (pw[b] - pw[a]);
      double sc = std::max({1.0, std::abs(pw[i]), std::abs(pw[a]), std::abs(pw[b])});
      if (cross <= 1e-12 * sc)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  // clip against tail support slopes: the affine ray of slope s touches the
  // hull at the extreme minimizer of w - s*x; vertices beyond it are shadowed.
  std::size_t lo = 0, hi = hull.size() - 1;
  if (la) {
    double best = pw[hull[0]] - sL * px[hull[0]];
    std::size_t at = 0;
    for (std::size_t k = 1; k < hull.size(); ++k) {
      double c = pw[hull[k]] - sL * px[hull[k]];
      if (c < best - 1e-12 * std::max(1.0, std::abs(best))) {
        best = c;
        at = k;  // leftmost strict minimizer
      }
    }
    lo = at;
  }
  if (ra) {
    double best = pw[hull[0]] - sR * px[hull[0]];
    std::size_t at = 0;
    for (std::size_t k = 1; k < hull.size(); ++k) {
      double c = pw[hull[k]] - sR * px[hull[k]];
      if (c <= best + 1e-12 * std::max(1.0, std::abs(best))) {
        if (c < best) best = c;
        at = k;  // rightmost minimizer
      }
    }
    hi = at;
  }
  if (lo > hi) lo = hi;  // degenerate window; collapse to the right touch point

  std::vector<double> hx;
  std::vector<ExtReal> hv;
  std::vector<Segment> hs;
  for (std::size_t k = lo; k <= hi; ++k) {
    hx.push_back(px[hull[k]]);
    hv.push_back(ExtReal(pw[hull[k]]));
    if (k > lo) hs.push_back(Segment::affine(pw[hull[k - 1]], pw[hull[k]]));
  }

  // the unclosed hull keeps f's own values at finite extreme points of
  // co(dom f); a convex function may jump upward there
  if (!la) hv.front() = f.evaluate(hx.front());
  if (!ra) hv.back() = f.evaluate(hx.back());

  RaySpec lray = la ? RaySpec{PieceKind::affine, sL, pw[hull[lo]]} : RaySpec{PieceKind::plus_inf, 0, 0};
  RaySpec rray = ra ? RaySpec{PieceKind::affine, sR, pw[hull[hi]]} : RaySpec{PieceKind::plus_inf, 0, 0};
  return build_from_parts(std::move(hx), std::move(hv), std::move(hs), lray, rray).canonical();
}

PwlFunction closed_convex_hull(const PwlFunction& f) { return lsc_hull(convex_hull(f)).canonical(); }

// ---------------------------------------------------------------------------
// pointwise calculus
// ---------------------------------------------------------------------------

namespace {

// winner of max/min between two affine exprs on a crossing-free open cell
const PieceExpr& pick_affine(const PieceExpr& ef, const PieceExpr& eg, double probe, bool want_max) {
  double vf = ef.at(probe), vg = eg.at(probe);
  if (want_max) return vf >= vg ? ef : eg;
  return vf <= vg ? ef : eg;
}

PwlFunction binary_extremum(const PwlFunction& f, const PwlFunction& g, bool want_max) {
  std::vector<double> xs = merge_coords(f.breakpoints(), g.breakpoints());

  // insert crossings of affine pieces so each final cell has a single winner
  std::vector<double> crossings;
  auto scan_cell = [&](double a, double b) {
    PieceExpr ef = f.piece_on(a, b), eg = g.piece_on(a, b);
    if (ef.kind != PieceKind::affine || eg.kind != PieceKind::affine) return;
    if (std::abs(ef.slope - eg.slope) < 1e-14 * std::max({1.0, std::abs(ef.slope)})) return;
    double xc = (eg.v0 - eg.slope * eg.x0 - ef.v0 + ef.slope * ef.x0) / (ef.slope - eg.slope);
    if (!std::isfinite(xc)) return;
    double margin = 1e-11 * std::max({1.0, std::abs(xc), std::isfinite(a) ? std::abs(a) : 0.0,
                                      std::isfinite(b) ? std::abs(b) : 0.0});
    bool inside = !std::isfinite(a) || xc > a + margin;
    inside = inside && (!std::isfinite(b) || xc < b - margin);
    if (inside) crossings.push_back(xc);
  };
  scan_cell(-kInf, xs.front());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) scan_cell(xs[i], xs[i + 1]);
  scan_cell(xs.back(), kInf);
  if (!crossings.empty()) {
    std::sort(crossings.begin(), crossings.end());
    xs = merge_coords(xs, crossings);
  }

  std::vector<ExtReal> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ExtReal a = f.evaluate(xs[i]), b = g.evaluate(xs[i]);
    vals[i] = want_max ? ext_max(a, b) : ext_min(a, b);
  }

  std::vector<Segment> cells(xs.size() - 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double a = xs[i], b = xs[i + 1];
    PieceExpr ef = f.piece_on(a, b), eg = g.piece_on(a, b);
    PieceKind dominant = want_max ? PieceKind::plus_inf : PieceKind::minus_inf;
    PieceKind recessive = want_max ? PieceKind::minus_inf : PieceKind::plus_inf;
    if (ef.kind == dominant || eg.kind == dominant) {
      cells[i] = Segment{dominant, 0, 0};
    } else if (ef.kind == recessive) {
      cells[i] = cell_from_expr(eg, a, b);
    } else if (eg.kind == recessive) {
      cells[i] = cell_from_expr(ef, a, b);
    } else {
      cells[i] = cell_from_expr(pick_affine(ef, eg, 0.5 * (a + b), want_max), a, b);
    }
  }

  auto ray_spec = [&](bool left_side) {
    double anchor = left_side ? xs.front() : xs.back();
    PieceExpr ef = left_side ? f.piece_on(-kInf, anchor) : f.piece_on(anchor, kInf);
    PieceExpr eg = left_side ? g.piece_on(-kInf, anchor) : g.piece_on(anchor, kInf);
    PieceKind dominant = want_max ? PieceKind::plus_inf : PieceKind::minus_inf;
    PieceKind recessive = want_max ? PieceKind::minus_inf : PieceKind::plus_inf;
    if (ef.kind == dominant || eg.kind == dominant) return RaySpec{dominant, 0, 0};
    if (ef.kind == recessive && eg.kind == recessive) return RaySpec{recessive, 0, 0};
    const PieceExpr* w = nullptr;
    if (ef.kind == recessive) {
      w = &eg;
    } else if (eg.kind == recessive) {
      w = &ef;
    } else {
      // asymptotic winner; crossings strictly inside the ray were split off
      if (std::abs(ef.slope - eg.slope) < 1e-14 * std::max(1.0, std::abs(ef.slope))) {
        w = &pick_affine(ef, eg, anchor, want_max);
      } else if (left_side) {
        bool f_wins = want_max ? ef.slope < eg.slope : ef.slope > eg.slope;
        w = f_wins ? &ef : &eg;
      } else {
        bool f_wins = want_max ? ef.slope > eg.slope : ef.slope < eg.slope;
        w = f_wins ? &ef : &eg;
      }
    }
    return RaySpec{PieceKind::affine, w->slope, w->at(anchor)};
  };

  RaySpec lray = ray_spec(true);
  RaySpec rray = ray_spec(false);
  return build_from_parts(std::move(xs), std::move(vals), std::move(cells), lray, rray);
}

}  // namespace

PwlFunction pointwise_max(const PwlFunction& f, const PwlFunction& g) {
  return binary_extremum(f, g, true);
}
PwlFunction pointwise_min(const PwlFunction& f, const PwlFunction& g) {
  return binary_extremum(f, g, false);
}

PwlFunction pointwise_max(std::span<const PwlFunction> funcs) {
  if (funcs.empty()) throw std::invalid_argument("pointwise_max: empty family");
  PwlFunction acc = funcs[0];
  for (std::size_t i = 1; i < funcs.size(); ++i) acc = pointwise_max(acc, funcs[i]);
  return acc.canonical();
}

PwlFunction pointwise_min(std::span<const PwlFunction> funcs) {
  if (funcs.empty()) throw std::invalid_argument("pointwise_min: empty family");
  PwlFunction acc = funcs[0];
  for (std::size_t i = 1; i < funcs.size(); ++i) acc = pointwise_min(acc, funcs[i]);
  return acc.canonical();
}

PwlFunction weighted_sum(std::span<const double> weights, std::span<const PwlFunction> funcs) {
  if (weights.size() != funcs.size())
    throw std::invalid_argument("weighted_sum: weights/functions size mismatch");
  if (funcs.empty()) throw std::invalid_argument("weighted_sum: empty family");
  for (double w : weights)
    if (std::isnan(w) || w < 0) throw std::invalid_argument("weighted_sum: weights must be nonnegative");

  std::vector<double> xs(funcs[0].breakpoints().begin(), funcs[0].breakpoints().end());
  for (std::size_t k = 1; k < funcs.size(); ++k) xs = merge_coords(xs, funcs[k].breakpoints());

  std::vector<ExtReal> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ExtReal acc(0.0);
    for (std::size_t k = 0; k < funcs.size(); ++k)
      acc = add(acc, scale(weights[k], funcs[k].evaluate(xs[i])));
    vals[i] = acc;
  }

  // scaled piece kind: 0 * (+inf piece) stays +inf, 0 * (-inf piece) becomes 0
  auto scaled_kind = [](PieceKind k, double w) {
    if (k == PieceKind::minus_inf && w == 0.0) return PieceKind::affine;
    return k;
  };

  auto combine_cell = [&](double a, double b) -> Segment {
    bool any_minus = false;
    double la = 0, lb = 0;
    for (std::size_t k = 0; k < funcs.size(); ++k) {
      PieceExpr e = funcs[k].piece_on(a, b);
      PieceKind kk = scaled_kind(e.kind, weights[k]);
      if (kk == PieceKind::plus_inf) return Segment::plus_inf();
      if (kk == PieceKind::minus_inf) {
        any_minus = true;
      } else if (e.kind == PieceKind::affine) {
        la += weights[k] * e.at(a);
        lb += weights[k] * e.at(b);
      }
      // scaled minus_inf piece with zero weight contributes constant 0
    }
    if (any_minus) return Segment::minus_inf();
    return Segment::affine(la, lb);
  };

  std::vector<Segment> cells(xs.size() - 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) cells[i] = combine_cell(xs[i], xs[i + 1]);

  auto combine_ray = [&](bool left_side) -> RaySpec {
    double anchor = left_side ? xs.front() : xs.back();
    bool any_minus = false;
    double slope = 0, limit = 0;
    for (std::size_t k = 0; k < funcs.size(); ++k) {
      PieceExpr e = left_side ? funcs[k].piece_on(-kInf, anchor) : funcs[k].piece_on(anchor, kInf);
      PieceKind kk = scaled_kind(e.kind, weights[k]);
      if (kk == PieceKind::plus_inf) return RaySpec{PieceKind::plus_inf, 0, 0};
      if (kk == PieceKind::minus_inf) {
        any_minus = true;
      } else if (e.kind == PieceKind::affine) {
        slope += weights[k] * e.slope;
        limit += weights[k] * e.at(anchor);
      }
    }
    if (any_minus) return RaySpec{PieceKind::minus_inf, 0, 0};
    return RaySpec{PieceKind::affine, slope, limit};
  };

  RaySpec lray = combine_ray(true);
  RaySpec rray = combine_ray(false);
  return build_from_parts(std::move(xs), std::move(vals), std::move(cells), lray, rray);
}

PwlFunction add_affine(const PwlFunction& f, double slope, double intercept) {
  if (!std::isfinite(slope) || !std::isfinite(intercept))
    throw std::invalid_argument("add_affine: coefficients must be finite");
  const auto& xs = f.breakpoints();
  std::vector<ExtReal> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    vals[i] = add(f.values()[i], ExtReal(slope * xs[i] + intercept));
  std::vector<Segment> segs = f.segments();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (segs[i].kind != PieceKind::affine) continue;
    segs[i].left_limit += slope * xs[i] + intercept;
    segs[i].right_limit += slope * xs[i + 1] + intercept;
  }
  Tail l = f.left_tail(), r = f.right_tail();
  if (l.kind == PieceKind::affine) l.slope += slope;
  if (r.kind == PieceKind::affine) r.slope += slope;
  return PwlFunction(xs, std::move(vals), std::move(segs), l, r);
}

PwlFunction restrict_to(const PwlFunction& f, const Interval& a) {
  const PwlFunction ind = PwlFunction::indicator(a);
  const double w[] = {1.0, 1.0};
  const PwlFunction fs[] = {f, ind};
  return weighted_sum(w, fs);
}

InfimumResult infimum(const PwlFunction& f) {
  struct Cand {
    ExtReal value;
    bool attained;
    double x;
  };
  std::vector<Cand> cands;
  const auto& xs = f.breakpoints();
  const auto& vs = f.values();
  const auto& segs = f.segments();
  for (std::size_t i = 0; i < xs.size(); ++i) cands.push_back({vs[i], true, xs[i]});
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double mid = 0.5 * (xs[i] + xs[i + 1]);
    if (segs[i].kind == PieceKind::minus_inf) {
      cands.push_back({ExtReal::minus_inf(), true, mid});
    } else if (segs[i].kind == PieceKind::affine) {
      double m = std::min(segs[i].left_limit, segs[i].right_limit);
      bool flat = segs[i].left_limit == segs[i].right_limit;
      cands.push_back({ExtReal(m), flat, mid});
    }
  }
  auto tail_cand = [&](const Tail& t, bool left_side) {
    double beyond = left_side ? xs.front() - 1.0 : xs.back() + 1.0;
    if (t.kind == PieceKind::minus_inf) {
      cands.push_back({ExtReal::minus_inf(), true, beyond});
    } else if (t.kind == PieceKind::affine) {
      bool unbounded_below = left_side ? t.slope > 0 : t.slope < 0;
      if (unbounded_below)
        cands.push_back({ExtReal::minus_inf(), false, 0});
      else if (t.slope == 0)
        cands.push_back({left_side ? vs.front() : vs.back(), true, beyond});
      // otherwise the tail is bounded below by its anchor, already a candidate
    }
  };
  tail_cand(f.left_tail(), true);
  tail_cand(f.right_tail(), false);

  ExtReal best = ExtReal::plus_inf();
  for (const Cand& c : cands) best = ext_min(best, c.value);
  for (const Cand& c : cands)
    if (c.attained && c.value == best) return {best, c.x};
  return {best, std::nullopt};
}

bool pwl_equal(const PwlFunction& f, const PwlFunction& g, double tol) {
  PwlFunction a = f.canonical(), b = g.canonical();
  const auto& ax = a.breakpoints();
  const auto& bx = b.breakpoints();
  if (ax.size() != bx.size()) return false;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    if (!near(ax[i], bx[i], tol)) return false;
    if (!eq_within(a.values()[i], b.values()[i], tol)) return false;
  }
  for (std::size_t i = 0; i + 1 < ax.size(); ++i) {
    const Segment& s = a.segments()[i];
    const Segment& t = b.segments()[i];
    if (s.kind != t.kind) return false;
    if (s.kind == PieceKind::affine &&
        (!near(s.left_limit, t.left_limit, tol) || !near(s.right_limit, t.right_limit, tol)))
      return false;
  }
  auto tails_eq = [&](const Tail& s, const Tail& t) {
    if (s.kind != t.kind) return false;
    return s.kind != PieceKind::affine || near(s.slope, t.slope, tol);
  };
  return tails_eq(a.left_tail(), b.left_tail()) && tails_eq(a.right_tail(), b.right_tail());
}

double max_discrepancy(const PwlFunction& f, const PwlFunction& g) {
  std::vector<double> probes = merge_coords(f.breakpoints(), g.breakpoints());
  std::vector<double> extra;
  for (std::size_t i = 0; i + 1 < probes.size(); ++i) extra.push_back(0.5 * (probes[i] + probes[i + 1]));
  extra.push_back(probes.front() - 1.0);
  extra.push_back(probes.front() - 7.5);
  extra.push_back(probes.back() + 1.0);
  extra.push_back(probes.back() + 7.5);
  probes.insert(probes.end(), extra.begin(), extra.end());
  double worst = 0;
  for (double x : probes) {
    ExtReal a = f.evaluate(x), b = g.evaluate(x);
    if (a == b) continue;
    if (a.is_finite() && b.is_finite())
      worst = std::max(worst, std::abs(a.as_double() - b.as_double()));
    else
      return kInf;
  }
  return worst;
}

}  // namespace mmx
