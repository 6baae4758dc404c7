#include "mmx/extreal.hpp"

#include <algorithm>
#include <cstdio>

namespace mmx {

ExtReal add(ExtReal a, ExtReal b) {
  // +inf absorbs first: (+inf) + (-inf) = +inf
  if (a.is_plus_inf() || b.is_plus_inf()) return ExtReal::plus_inf();
  if (a.is_minus_inf() || b.is_minus_inf()) return ExtReal::minus_inf();
  return ExtReal(a.as_double() + b.as_double());
}

ExtReal scale(double t, ExtReal a) {
  if (std::isnan(t) || t < 0)
    throw std::invalid_argument("scale: multiplier must be a nonnegative real");
  if (t == 0.0) return a.is_plus_inf() ? ExtReal::plus_inf() : ExtReal(0.0);
  if (a.is_plus_inf()) return ExtReal::plus_inf();
  if (a.is_minus_inf()) return ExtReal::minus_inf();
  return ExtReal(t * a.as_double());
}

ExtReal ext_min(ExtReal a, ExtReal b) { return a <= b ? a : b; }
ExtReal ext_max(ExtReal a, ExtReal b) { return a >= b ? a : b; }

ExtReal fold_inf(std::span<const ExtReal> values) {
  ExtReal acc = ExtReal::plus_inf();
  for (ExtReal v : values) acc = ext_min(acc, v);
  return acc;
}

ExtReal fold_sup(std::span<const ExtReal> values) {
  ExtReal acc = ExtReal::minus_inf();
  for (ExtReal v : values) acc = ext_max(acc, v);
  return acc;
}

bool le_within(ExtReal a, ExtReal b, double tol) {
  if (a <= b) return true;
  if (a.is_finite() && b.is_finite()) return a.as_double() <= b.as_double() + tol;
  return false;
}

bool eq_within(ExtReal a, ExtReal b, double tol) {
  if (a == b) return true;
  if (a.is_finite() && b.is_finite()) return std::abs(a.as_double() - b.as_double()) <= tol;
  return false;
}

std::string to_string(ExtReal a) {
  if (a.is_plus_inf()) return "inf";
  if (a.is_minus_inf()) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", a.as_double());
  return buf;
}

}  // namespace mmx
