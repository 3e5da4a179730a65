#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace adq {

// Exact rational arithmetic on 64-bit numerator/denominator.
// Invariants: den > 0 and gcd(|num|, den) == 1 at all times.
// Intermediates run through __int128; a result that does not reduce back
// into 64 bits throws std::overflow_error. Every quantity handled by this
// workbench is tiny, so an overflow signals a logic error upstream rather
// than a storage problem worth solving with bignums.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // implicit: integers are rationals
  Rational(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& r) { return *this = *this + r; }
  Rational& operator-=(const Rational& r) { return *this = *this - r; }
  Rational& operator*=(const Rational& r) { return *this = *this * r; }
  Rational& operator/=(const Rational& r) { return *this = *this / r; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const i128 l = i128(a.num_) * b.den_;
    const i128 r = i128(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Rational pow(std::uint32_t e) const {
    Rational acc(1);
    for (std::uint32_t i = 0; i < e; ++i) acc *= *this;
    return acc;
  }

  // Canonical form "num/den", e.g. "2/1", "-3/4", "0/1".
  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Accepts "n" or "n/d" with optional leading '-'.
  static Rational parse(const std::string& s) {
    const auto slash = s.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const std::int64_t n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument("bad rational: " + s);
      return Rational(n);
    }
    const std::int64_t n = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("bad rational: " + s);
    const std::string dpart = s.substr(slash + 1);
    const std::int64_t d = std::stoll(dpart, &used);
    if (used != dpart.size()) throw std::invalid_argument("bad rational: " + s);
    return Rational(n, d);
  }

private:
  using i128 = __int128;

  static i128 abs128(i128 v) { return v < 0 ? -v : v; }

  static i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational make(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) return Rational();
    const i128 g = gcd128(n, d);
    n /= g;
    d /= g;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace adq
