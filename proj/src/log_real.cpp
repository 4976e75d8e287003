#include "pbl/log_real.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace pbl {

LogReal::LogReal(double value) {
  if (!std::isfinite(value)) throw std::domain_error("LogReal: non-finite value");
  if (value == 0.0) return;
  sign_ = value > 0 ? 1 : -1;
  log_abs_ = std::log(std::abs(value));
}

LogReal LogReal::from_log(double log_abs, int sign) {
  LogReal r;
  if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
  if (std::isnan(log_abs) || log_abs == std::numeric_limits<double>::infinity()) {
    throw std::domain_error("LogReal: log magnitude must be finite");
  }
  r.sign_ = sign > 0 ? 1 : -1;
  r.log_abs_ = log_abs;
  return r;
}

double LogReal::value() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

LogReal LogReal::operator-() const {
  LogReal r = *this;
  r.sign_ = -r.sign_;
  return r;
}

LogReal& LogReal::operator+=(const LogReal& o) {
  if (o.sign_ == 0) return *this;
  if (sign_ == 0) return *this = o;
  const LogReal& big = log_abs_ >= o.log_abs_ ? *this : o;
  const LogReal& small = log_abs_ >= o.log_abs_ ? o : *this;
  const double ratio = std::exp(small.log_abs_ - big.log_abs_);
  const int s = big.sign_;
  double l;
  if (big.sign_ == small.sign_) {
    l = big.log_abs_ + std::log1p(ratio);
  } else {
    if (ratio >= 1.0) return *this = LogReal();
    l = big.log_abs_ + std::log1p(-ratio);
  }
  sign_ = s;
  log_abs_ = l;
  return *this;
}

LogReal& LogReal::operator*=(const LogReal& o) {
  if (sign_ == 0 || o.sign_ == 0) return *this = LogReal();
  sign_ *= o.sign_;
  log_abs_ += o.log_abs_;
  return *this;
}

LogReal& LogReal::operator/=(const LogReal& o) {
  if (o.sign_ == 0) throw std::domain_error("LogReal: division by zero");
  if (sign_ == 0) return *this;
  sign_ *= o.sign_;
  log_abs_ -= o.log_abs_;
  return *this;
}

LogReal LogReal::pow(double p) const {
  if (sign_ < 0) throw std::domain_error("LogReal::pow: negative base");
  if (sign_ == 0) {
    if (p > 0) return LogReal();
    throw std::domain_error("LogReal::pow: zero to a non-positive power");
  }
  return from_log(log_abs_ * p);
}

bool operator<(const LogReal& a, const LogReal& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
  if (a.sign_ == 0) return false;
  return a.sign_ > 0 ? a.log_abs_ < b.log_abs_ : a.log_abs_ > b.log_abs_;
}

std::string LogReal::to_string() const {
  char buf[64];
  if (sign_ == 0) return "0";
  std::snprintf(buf, sizeof buf, "%sexp(%.17g)", sign_ < 0 ? "-" : "", log_abs_);
  return buf;
}

LogReal log_sum(std::span<const LogReal> terms) {
  std::vector<LogReal> sorted;
  sorted.reserve(terms.size());
  for (const LogReal& t : terms) {
    if (!t.is_zero()) sorted.push_back(t);
  }
  if (sorted.empty()) return LogReal();
  std::sort(sorted.begin(), sorted.end(), [](const LogReal& a, const LogReal& b) {
    if (a.log_abs() != b.log_abs()) return a.log_abs() < b.log_abs();
    return a.sign() < b.sign();
  });
  const double top = sorted.back().log_abs();
  double acc = 0.0;  // smallest magnitudes first
  for (const LogReal& t : sorted) acc += t.sign() * std::exp(t.log_abs() - top);
  if (acc == 0.0) return LogReal();
  return LogReal::from_log(top + std::log(std::abs(acc)), acc > 0 ? 1 : -1);
}

}  // namespace pbl
