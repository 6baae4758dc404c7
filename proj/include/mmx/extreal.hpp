#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmx {

/// Extended real scalar: R u {-inf, +inf} with the conventions
///   (+inf) + (-inf) = (-inf) + (+inf) = +inf,
///   0 * (+inf) = +inf,  0 * (-inf) = 0.
/// NaN is unrepresentable; all operations are total.
class ExtReal {
 public:
  ExtReal() : v_(0.0) {}
  ExtReal(double v) : v_(v) {
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN is not representable");
  }

  static ExtReal plus_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
  static ExtReal minus_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

  bool is_plus_inf() const { return std::isinf(v_) && v_ > 0; }
  bool is_minus_inf() const { return std::isinf(v_) && v_ < 0; }
  bool is_finite() const { return std::isfinite(v_); }

  /// Finite payload; throws on infinities.
  double finite_value() const {
    if (!is_finite()) throw std::logic_error("ExtReal: finite_value() on infinite value");
    return v_;
  }
  /// Raw double, with IEEE +-inf standing in for the infinities.
  double as_double() const { return v_; }

  friend std::strong_ordering operator<=>(ExtReal a, ExtReal b) {
    // total order: -inf < finite < +inf; no NaN by construction
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }

 private:
  double v_;
};

/// Total addition under the convention (+inf) + (-inf) = +inf.
ExtReal add(ExtReal a, ExtReal b);

/// Nonnegative scaling: t > 0 scales with sign preservation; t = 0 maps
/// +inf -> +inf, everything else -> 0. Negative t is rejected.
ExtReal scale(double t, ExtReal a);

ExtReal ext_min(ExtReal a, ExtReal b);
ExtReal ext_max(ExtReal a, ExtReal b);

/// Lattice folds; inf of the empty collection is +inf, sup is -inf.
ExtReal fold_inf(std::span<const ExtReal> values);
ExtReal fold_sup(std::span<const ExtReal> values);

/// a <= b + tol, where tol widens only finite comparisons.
bool le_within(ExtReal a, ExtReal b, double tol);

/// Equality within tol on finite values; infinities must match exactly.
bool eq_within(ExtReal a, ExtReal b, double tol);

std::string to_string(ExtReal a);

}  // namespace mmx
