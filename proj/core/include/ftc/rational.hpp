#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ftc {

/// Exact rational constant. Form constants are kept rational so that
/// algebraic simplification (e.g. merging 4 x 1/4 terms into 2 x 1/2)
/// is exact rather than a floating-point coincidence.
class Rational {
public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }

  Rational operator+(const Rational& o) const { return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
  Rational operator-(const Rational& o) const { return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
  Rational operator*(const Rational& o) const { return Rational(num_ * o.num_, den_ * o.den_); }
  Rational operator-() const { return Rational(-num_, den_); }
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }

  /// "3", "-1/2", ...
  std::string str() const;

  /// Parse a decimal literal such as "0.25" or "10" exactly.
  static Rational from_decimal(const std::string& text);

private:
  void normalize() {
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

} // namespace ftc
