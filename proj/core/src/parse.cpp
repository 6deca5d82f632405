#include "berktree/parse.hpp"

#include <cctype>
#include <sstream>

#include "berktree/errors.hpp"

namespace berktree {

namespace {

class Parser {
 public:
  Parser(FieldTower& tower, std::string_view text, bool allow_variable)
      : tower_(tower), text_(text), allow_var_(allow_variable) {}

  SPoly parse_all() {
    SPoly r = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InputError(why + " at position " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  SPoly constant(const Scalar& s) { return SPoly{s}; }

  SPoly expr() {
    SPoly acc;
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    acc = term();
    if (negate) acc = spoly::sub(SPoly{Scalar::zero(tower_.base())}, acc);
    for (;;) {
      if (accept('+')) {
        acc = spoly::add(acc, term());
      } else if (accept('-')) {
        acc = spoly::sub(acc, term());
      } else {
        return acc;
      }
    }
  }

  SPoly term() {
    SPoly acc = power();
    for (;;) {
      if (accept('*')) {
        acc = spoly::mul(acc, power());
      } else if (accept('/')) {
        SPoly d = spoly::trimmed(power());
        if (d.size() != 1) fail("division by a non-constant or zero");
        if (d[0].is_zero()) fail("division by zero");
        Scalar inv = d[0].inv();
        for (auto& c : acc) c = c * inv;
      } else if (starts_factor()) {
        // Juxtaposition such as "3z^2" or "2(z+1)".
        acc = spoly::mul(acc, power());
      } else {
        return acc;
      }
    }
  }

  bool starts_factor() {
    char c = peek();
    return c == '(' || c == 'z' || c == 'x' || c == 'p';
  }

  SPoly power() {
    skip_ws();
    if (peek() == 'p') {
      ++pos_;
      Rational e(1);
      if (accept('^')) e = exponent();
      return constant(p_power(e));
    }
    SPoly base = factor();
    if (accept('^')) {
      Rational e = exponent();
      if (!e.is_integer() || e.sign() < 0) fail("polynomial exponents must be non-negative integers");
      SPoly r{Scalar::from_int(tower_.base(), 1)};
      for (std::int64_t i = 0; i < e.num(); ++i) r = spoly::mul(r, base);
      return r;
    }
    return base;
  }

  Rational exponent() {
    bool paren = accept('(');
    bool neg = accept('-');
    std::int64_t a = integer();
    std::int64_t b = 1;
    if (paren && accept('/')) b = integer();
    if (paren && !accept(')')) fail("expected ')'");
    if (b == 0) fail("zero denominator in exponent");
    return Rational(neg ? -a : a, b);
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 17) fail("exponent too large");
    return std::stoll(digits);
  }

  Scalar p_power(const Rational& e) {
    const Stage* s = tower_.ensure(tower_.base(), static_cast<int>(e.den()), 1);
    return Scalar::pi_power(s, (e * Rational(s->E)).num());
  }

  SPoly factor() {
    skip_ws();
    if (accept('(')) {
      SPoly r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    char c = peek();
    if (c == 'z' || c == 'x') {
      if (!allow_var_) fail("variable not allowed in a scalar literal");
      ++pos_;
      return SPoly{Scalar::zero(tower_.base()), Scalar::from_int(tower_.base(), 1)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      mpz_class v(std::string(text_.substr(start, pos_ - start)));
      return constant(Scalar::from_mpz(tower_.base(), v));
    }
    fail("expected a number, 'p', 'z' or '('");
  }

  FieldTower& tower_;
  std::string_view text_;
  bool allow_var_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(FieldTower& tower, std::string_view text) {
  SPoly r = spoly::trimmed(Parser(tower, text, false).parse_all());
  if (r.empty()) return Scalar::zero(tower.base());
  return r[0];
}

SPoly parse_poly(FieldTower& tower, std::string_view text) {
  SPoly r = spoly::trimmed(Parser(tower, text, true).parse_all());
  return spoly::coerced(r);
}

SPoly parse_coefficients(FieldTower& tower, const std::vector<std::string>& literals) {
  SPoly r;
  for (const auto& l : literals) r.push_back(parse_scalar(tower, l));
  return spoly::coerced(spoly::trimmed(r));
}

std::string poly_to_string(const SPoly& f) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = f.size(); k-- > 0;) {
    if (f[k].is_exact_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << f[k].str() << ")";
    if (k >= 1) os << "*z";
    if (k >= 2) os << "^" << k;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace berktree
