#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mmx/extreal.hpp"
#include "mmx/interval.hpp"

namespace mmx {

enum class PieceKind { affine, plus_inf, minus_inf };

/// Behavior on the open segment between two adjacent breakpoints. Affine
/// segments carry their own (finite) one-sided limits, which may disagree
/// with the breakpoint values on either side; that is how non-lsc data such
/// as indicators of half-open intervals is represented.
struct Segment {
  PieceKind kind = PieceKind::affine;
  double left_limit = 0.0;   // limit approaching the left breakpoint from inside
  double right_limit = 0.0;  // limit approaching the right breakpoint from inside

  static Segment affine(double l, double r) { return {PieceKind::affine, l, r}; }
  static Segment plus_inf() { return {PieceKind::plus_inf, 0, 0}; }
  static Segment minus_inf() { return {PieceKind::minus_inf, 0, 0}; }
};

/// Behavior on the open ray beyond an extreme breakpoint. Affine tails are
/// anchored at the adjacent breakpoint value (which must be finite): the tail
/// is continuous at its anchor.
struct Tail {
  PieceKind kind = PieceKind::plus_inf;
  double slope = 0.0;  // affine only

  static Tail affine(double s) { return {PieceKind::affine, s}; }
  static Tail plus_inf() { return {PieceKind::plus_inf, 0}; }
  static Tail minus_inf() { return {PieceKind::minus_inf, 0}; }
};

/// View of a PWL function on an open interval containing no breakpoint:
/// constant +-inf, or the affine map x -> v0 + slope * (x - x0).
struct PieceExpr {
  PieceKind kind = PieceKind::affine;
  double slope = 0.0;
  double v0 = 0.0;
  double x0 = 0.0;

  double at(double x) const { return v0 + slope * (x - x0); }
};

/// Exact 1-D piecewise-linear extended-real function. Total on R: evaluation
/// is defined everywhere, including improper (-inf) and non-lsc data.
class PwlFunction {
 public:
  /// Validating constructor; throws std::invalid_argument on malformed parts.
  PwlFunction(std::vector<double> breakpoints, std::vector<ExtReal> values,
              std::vector<Segment> segments, Tail left_tail, Tail right_tail);

  // -- factories ------------------------------------------------------------
  static PwlFunction constant(ExtReal c);
  static PwlFunction affine(double slope, double intercept);  // slope*x + intercept
  static PwlFunction abs_shifted(double center);              // |x - center|
  static PwlFunction indicator(const Interval& a);            // I_A
  static PwlFunction point_indicator(double a) { return indicator(Interval::point(a)); }

  // -- structure access -----------------------------------------------------
  const std::vector<double>& breakpoints() const { return xs_; }
  const std::vector<ExtReal>& values() const { return vs_; }
  const std::vector<Segment>& segments() const { return segs_; }
  const Tail& left_tail() const { return left_; }
  const Tail& right_tail() const { return right_; }

  ExtReal evaluate(double x) const;

  /// View on the open interval (a, b), which must contain no breakpoint
  /// strictly inside. a may be -inf and b may be +inf.
  PieceExpr piece_on(double a, double b) const;

  /// One-sided limits at a breakpoint index.
  ExtReal left_limit_at(std::size_t i) const;
  ExtReal right_limit_at(std::size_t i) const;

  /// Effective domain {f < +inf} as a disjoint union of intervals.
  std::vector<Interval> domain() const;

  bool takes_minus_inf() const;
  bool identically_plus_inf() const;

  /// Redundant-breakpoint removal; result evaluates identically.
  PwlFunction canonical() const;

 private:
  std::vector<double> xs_;
  std::vector<ExtReal> vs_;
  std::vector<Segment> segs_;
  Tail left_, right_;
};

// -- predicates --------------------------------------------------------------
bool is_proper(const PwlFunction& f);
bool is_convex(const PwlFunction& f);
bool is_lsc(const PwlFunction& f);
bool is_gamma0(const PwlFunction& f);

// -- hull operators ----------------------------------------------------------
PwlFunction lsc_hull(const PwlFunction& f);
PwlFunction convex_hull(const PwlFunction& f);
PwlFunction closed_convex_hull(const PwlFunction& f);

// -- pointwise calculus ------------------------------------------------------
PwlFunction pointwise_max(std::span<const PwlFunction> funcs);
PwlFunction pointwise_min(std::span<const PwlFunction> funcs);
PwlFunction pointwise_max(const PwlFunction& f, const PwlFunction& g);
PwlFunction pointwise_min(const PwlFunction& f, const PwlFunction& g);

/// Pointwise sum of scale(w_k, f_k) under the extended-real conventions;
/// weights must be nonnegative. With w_k = 0 the term degenerates to the
/// indicator of dom f_k.
PwlFunction weighted_sum(std::span<const double> weights, std::span<const PwlFunction> funcs);

/// f + slope*x + intercept, exact.
PwlFunction add_affine(const PwlFunction& f, double slope, double intercept);

/// f + I_A.
PwlFunction restrict_to(const PwlFunction& f, const Interval& a);

struct InfimumResult {
  ExtReal value;
  std::optional<double> argmin;  // present only when the infimum is attained
};
InfimumResult infimum(const PwlFunction& f);

/// Structural equality after canonicalization: breakpoints, values, segment
/// limits, and tail slopes all within tol, kinds exact.
bool pwl_equal(const PwlFunction& f, const PwlFunction& g, double tol = 1e-9);

/// Sup of |f - g| over a probe set (breakpoints, midpoints, tail probes);
/// +inf when infinities mismatch anywhere on the probes.
double max_discrepancy(const PwlFunction& f, const PwlFunction& g);

}  // namespace mmx
