#pragma once

#include <limits>
#include <vector>

namespace mmx {

/// Interval of the real line with per-endpoint open/closed flags.
/// Unbounded ends use +-inf; an unbounded end is never closed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval all() { return {}; }
  static Interval closed(double a, double b) { return {a, b, true, true}; }
  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval left_open(double a, double b) { return {a, b, false, true}; }   // (a, b]
  static Interval right_open(double a, double b) { return {a, b, true, false}; }  // [a, b)
  static Interval point(double a) { return {a, a, true, true}; }

  bool empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
  }

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
  }

  bool operator==(const Interval&) const = default;
};

/// Closed convex hull of a union of intervals: [min lo, max hi] closing finite ends.
Interval closed_hull(const std::vector<Interval>& parts);

}  // namespace mmx
