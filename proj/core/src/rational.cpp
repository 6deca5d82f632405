#include "berktree/rational.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace berktree {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(gcd128(a, b));
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  i128 l = static_cast<i128>(a / gcd64(a, b)) * b;
  if (l < 0) l = -l;
  if (!fits64(l)) throw std::overflow_error("lcm overflow");
  return static_cast<std::int64_t>(l);
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (!fits64(n) || !fits64(d)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if ((num_ % den_ != 0) && (num_ < 0)) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if ((num_ % den_ != 0) && (num_ > 0)) ++q;
  return q;
}

Rational Rational::operator-() const { return from_wide(-static_cast<i128>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == o.den_) {
    *this = from_wide(static_cast<i128>(num_) + o.num_, den_);
  } else {
    *this = from_wide(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                      static_cast<i128>(den_) * o.den_);
  }
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  *this = from_wide(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  *this = from_wide(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 l = static_cast<i128>(a.num_) * b.den_;
  i128 r = static_cast<i128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view s) {
  auto parse_int = [](std::string_view t) {
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw std::invalid_argument("bad rational literal: " + std::string(t));
    }
    return v;
  };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

const Rational& ValQ::value() const {
  if (inf_) throw std::logic_error("valuation is +infinity");
  return q_;
}

ValQ operator+(const ValQ& a, const ValQ& b) {
  if (a.inf_ || b.inf_) return ValQ::infinity();
  return ValQ(a.q_ + b.q_);
}

std::strong_ordering operator<=>(const ValQ& a, const ValQ& b) {
  if (a.inf_ && b.inf_) return std::strong_ordering::equal;
  if (a.inf_) return std::strong_ordering::greater;
  if (b.inf_) return std::strong_ordering::less;
  return a.q_ <=> b.q_;
}

ValQ min(const ValQ& a, const ValQ& b) { return b < a ? b : a; }

}  // namespace berktree
