#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace dowker {

/// Rejected input: malformed data, violated preconditions, bad parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an enumeration would produce more simplices than allowed.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A filtration scale in [0, inf]. Infinity is the IEEE infinity, so
/// addition and positive scaling saturate without special cases.
/// Comparisons are exact.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  explicit ExtReal(double v) : value_(v == 0.0 ? 0.0 : v) {
    if (std::isnan(v) || v < 0.0) {
      throw InputError("extended real must be a non-negative number or inf, got " +
                       std::to_string(v));
    }
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr double value() const { return value_; }
  constexpr bool is_finite() const {
    return value_ != std::numeric_limits<double>::infinity();
  }
  constexpr bool is_infinite() const { return !is_finite(); }

  friend constexpr bool operator==(ExtReal, ExtReal) = default;
  friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) {
    return a.value_ <=> b.value_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.value_ + b.value_); }

  /// c * t for c >= 0, with the convention 0 * inf = 0.
  ExtReal scaled(double c) const {
    if (c == 0.0) return ExtReal();
    return ExtReal(c * value_);
  }

 private:
  double value_ = 0.0;
};

inline constexpr ExtReal kInfinity = ExtReal::infinity();

inline ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }
inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

/// Next representable scale above t (inf stays inf).
inline ExtReal next_above(ExtReal t) {
  if (t.is_infinite()) return t;
  return ExtReal(std::nextafter(t.value(), std::numeric_limits<double>::infinity()));
}

}  // namespace dowker
