#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace berktree {

// Exact rational with 64-bit parts. Intermediate products use 128-bit
// integers and any result that does not fit throws std::overflow_error,
// so a value is either exact or the computation stops.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  std::int64_t floor() const;
  std::int64_t ceil() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  // "a/b", or "a" for integers.
  std::string str() const;
  // Accepts "a", "-a", "a/b".
  static Rational parse(std::string_view s);

 private:
  static Rational from_wide(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// A valuation: a rational or +infinity (the valuation of exact zero).
class ValQ {
 public:
  ValQ() : inf_(true) {}
  ValQ(Rational q) : inf_(false), q_(q) {}  // NOLINT(google-explicit-constructor)
  ValQ(std::int64_t n) : inf_(false), q_(n) {}  // NOLINT(google-explicit-constructor)

  static ValQ infinity() { return ValQ(); }

  bool is_inf() const { return inf_; }
  // Throws std::logic_error on +infinity.
  const Rational& value() const;

  friend ValQ operator+(const ValQ& a, const ValQ& b);
  friend bool operator==(const ValQ& a, const ValQ& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.q_ == b.q_);
  }
  friend std::strong_ordering operator<=>(const ValQ& a, const ValQ& b);

  std::string str() const { return inf_ ? std::string("inf") : q_.str(); }

 private:
  bool inf_;
  Rational q_;
};

ValQ min(const ValQ& a, const ValQ& b);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace berktree
