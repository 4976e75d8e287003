#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pbl {

/// A real number stored as sign and natural log of its magnitude, for
/// quantities like cosh^k(d/2) or (k/2pi)^k that overflow doubles.
class LogReal {
 public:
  constexpr LogReal() = default;  // zero

  /// From an ordinary double. Non-finite values throw std::domain_error.
  explicit LogReal(double value);

  static LogReal from_log(double log_abs, int sign = 1);
  static LogReal zero() { return LogReal(); }
  static LogReal one() { return from_log(0.0); }

  int sign() const { return sign_; }
  /// log |x|; -infinity for zero.
  double log_abs() const {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_abs_;
  }
  /// exp(log_abs) with sign; may overflow to +-inf or underflow to 0.
  double value() const;
  bool is_zero() const { return sign_ == 0; }

  LogReal operator-() const;
  LogReal& operator+=(const LogReal& o);
  LogReal& operator-=(const LogReal& o) { return *this += -o; }
  LogReal& operator*=(const LogReal& o);
  LogReal& operator/=(const LogReal& o);

  /// x^p for x > 0, or x = 0 with p > 0. Negative bases throw std::domain_error.
  LogReal pow(double p) const;

  friend LogReal operator+(LogReal a, const LogReal& b) { return a += b; }
  friend LogReal operator-(LogReal a, const LogReal& b) { return a -= b; }
  friend LogReal operator*(LogReal a, const LogReal& b) { return a *= b; }
  friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }

  friend bool operator==(const LogReal& a, const LogReal& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_abs_ == b.log_abs_);
  }
  friend bool operator<(const LogReal& a, const LogReal& b);
  friend bool operator>(const LogReal& a, const LogReal& b) { return b < a; }
  friend bool operator<=(const LogReal& a, const LogReal& b) { return !(b < a); }
  friend bool operator>=(const LogReal& a, const LogReal& b) { return !(a < b); }

  std::string to_string() const;

 private:
  int sign_ = 0;
  double log_abs_ = 0.0;
};

/// Sum with terms sorted by magnitude first, so the result does not depend on
/// the order of `terms`.
LogReal log_sum(std::span<const LogReal> terms);

inline LogReal log_sum(const std::vector<LogReal>& terms) {
  return log_sum(std::span<const LogReal>(terms.data(), terms.size()));
}

}  // namespace pbl
