#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmx/grid.hpp"
#include "mmx/pwl.hpp"

namespace mmx {

/// Closed interval of slopes representing a 1-D (eps-)subdifferential;
/// ends may be infinite.
struct SubdiffInterval {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;

  static SubdiffInterval none() { return {}; }
  static SubdiffInterval of(double lo, double hi) { return {false, lo, hi}; }

  bool contains(double s, double tol) const {
    return !empty && s >= lo - tol && s <= hi + tol;
  }
  bool contains_interval(const SubdiffInterval& o, double tol) const {
    if (o.empty) return true;
    if (empty) return false;
    return o.lo >= lo - tol && o.hi <= hi + tol;
  }
};

/// Exact eps-subdifferential of a convex PWL function at x, via the
/// conjugate characterization s in d_eps f(x) iff f(x) + f*(s) <= s x + eps.
/// Empty when eps < 0 or x lies outside dom f; the whole line when
/// f(x) = -inf. Non-convex inputs are rejected.
SubdiffInterval eps_subdifferential(const PwlFunction& f, double x, double eps);

/// Level set {s : t(s) <= c} of a convex lsc PWL function, as an interval.
SubdiffInterval convex_level_set(const PwlFunction& t, double c);

/// Brute-force oracle: checks the defining inequality over every grid node.
/// x must coincide with a grid node; otherwise the result is empty.
std::vector<double> eps_subdiff_oracle(const GridFunction& f, double x, double eps,
                                       std::span<const double> slope_probes);

struct MaxRuleOptions {
  int initial_density = 8;
  int max_density = 256;
  double tol = 1e-6;            // endpoint attainment tolerance
  double inclusion_tol = 1e-9;  // rhs containment slack
};

struct MaxRuleReport {
  bool hypothesis_ok = true;
  std::string hypothesis_note;
  bool vacuous = false;  // f(x) infinite: the shift is undefined
  SubdiffInterval lhs;
  std::vector<SubdiffInterval> rhs_cover;  // merged member intervals
  bool inclusion_ok = false;
  double endpoint_gap = 0.0;
  int density_used = 0;
};

/// Union formula for the eps-subdifferential of a finite max: lhs is
/// d_eps(max f_k)(x), rhs is the union over sampled simplex weights of
/// d_{eps + f_lambda(x) - f(x)} f_lambda(x), with negative shifts clamped
/// to the empty set. Sampling refines until the lhs endpoints are attained
/// within tol; dual-LP candidates for the endpoints seed the sample set.
MaxRuleReport max_rule(std::span<const PwlFunction> funcs, double x, double eps,
                       const MaxRuleOptions& opts = {});

}  // namespace mmx
