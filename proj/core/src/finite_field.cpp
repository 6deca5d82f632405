#include "berktree/finite_field.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "berktree/errors.hpp"

namespace berktree {

namespace {

long modp(long v, long p) {
  v %= p;
  return v < 0 ? v + p : v;
}

long inv_mod(long a, long p) {
  // p is prime and small, extended Euclid in 64-bit.
  long t = 0, nt = 1, r = p, nr = modp(a, p);
  if (nr == 0) throw DivisionByZero("inverse of zero in F_p");
  while (nr != 0) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return modp(t, p);
}

constexpr std::uint64_t kEnumerationLimit = 100000;

}  // namespace

ResidueField::ResidueField(long p, std::vector<long> modulus) : p_(p), mod_(std::move(modulus)) {
  if (p < 2) throw std::invalid_argument("residue characteristic must be >= 2");
  if (mod_.size() < 2 || mod_.back() != 1) throw std::invalid_argument("residue modulus must be monic of degree >= 1");
  f_ = static_cast<int>(mod_.size()) - 1;
  for (auto& c : mod_) c = modp(c, p_);
  size_ = 1;
  for (int i = 0; i < f_; ++i) {
    if (size_ > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(p_)) {
      size_ = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    size_ *= static_cast<std::uint64_t>(p_);
  }
}

ResidueField::Elem ResidueField::one() const {
  Elem e(f_, 0);
  e[0] = 1;
  return e;
}

ResidueField::Elem ResidueField::from_int(long v) const {
  Elem e(f_, 0);
  e[0] = modp(v, p_);
  return e;
}

bool ResidueField::is_zero(const Elem& a) const {
  return std::all_of(a.begin(), a.end(), [](long c) { return c == 0; });
}

ResidueField::Elem ResidueField::add(const Elem& a, const Elem& b) const {
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = modp(a[i] + b[i], p_);
  return r;
}

ResidueField::Elem ResidueField::sub(const Elem& a, const Elem& b) const {
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = modp(a[i] - b[i], p_);
  return r;
}

ResidueField::Elem ResidueField::neg(const Elem& a) const {
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = modp(-a[i], p_);
  return r;
}

ResidueField::Elem ResidueField::mul(const Elem& a, const Elem& b) const {
  std::vector<long long> t(2 * f_ - 1, 0);
  for (int i = 0; i < f_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f_; ++j) t[i + j] = (t[i + j] + static_cast<long long>(a[i]) * b[j]) % p_;
  }
  for (int k = 2 * f_ - 2; k >= f_; --k) {
    long long c = t[k] % p_;
    if (c == 0) continue;
    for (int j = 0; j < f_; ++j) t[k - f_ + j] = (t[k - f_ + j] - c * mod_[j]) % p_;
    t[k] = 0;
  }
  Elem r(f_);
  for (int i = 0; i < f_; ++i) r[i] = modp(static_cast<long>(t[i] % p_), p_);
  return r;
}

ResidueField::Elem ResidueField::pow(const Elem& a, const mpz_class& e) const {
  Elem result = one();
  Elem base = a;
  mpz_class k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

ResidueField::Elem ResidueField::inv(const Elem& a) const {
  if (is_zero(a)) throw DivisionByZero("inverse of zero in residue field");
  if (f_ == 1) return Elem{inv_mod(a[0], p_)};
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(f_));
  return pow(a, q - 2);
}

ResidueField::Elem ResidueField::from_index(std::uint64_t idx) const {
  Elem e(f_, 0);
  for (int i = 0; i < f_; ++i) {
    e[i] = static_cast<long>(idx % static_cast<std::uint64_t>(p_));
    idx /= static_cast<std::uint64_t>(p_);
  }
  return e;
}

std::uint64_t ResidueField::to_index(const Elem& a) const {
  std::uint64_t idx = 0;
  for (int i = f_ - 1; i >= 0; --i) idx = idx * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(a[i]);
  return idx;
}

namespace rpoly {

void trim(const ResidueField& F, RPoly& a) {
  while (!a.empty() && F.is_zero(a.back())) a.pop_back();
}

int degree(const ResidueField& F, const RPoly& a) {
  RPoly t = a;
  trim(F, t);
  return static_cast<int>(t.size()) - 1;
}

RPoly add(const ResidueField& F, const RPoly& a, const RPoly& b) {
  RPoly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(r[i], a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(F, r);
  return r;
}

RPoly sub(const ResidueField& F, const RPoly& a, const RPoly& b) {
  RPoly r(std::max(a.size(), b.size()), F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.add(r[i], a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(F, r);
  return r;
}

RPoly mul(const ResidueField& F, const RPoly& a, const RPoly& b) {
  if (a.empty() || b.empty()) return {};
  RPoly r(a.size() + b.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (F.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(F, r);
  return r;
}

std::pair<RPoly, RPoly> divmod(const ResidueField& F, const RPoly& a, const RPoly& b) {
  RPoly bb = b;
  trim(F, bb);
  if (bb.empty()) throw DivisionByZero("polynomial division by zero");
  RPoly r = a;
  trim(F, r);
  if (r.size() < bb.size()) return {RPoly{}, r};
  RPoly q(r.size() - bb.size() + 1, F.zero());
  auto lead_inv = F.inv(bb.back());
  for (std::size_t k = r.size(); k-- >= bb.size();) {
    auto c = F.mul(r[k], lead_inv);
    if (F.is_zero(c)) continue;
    std::size_t shift = k - (bb.size() - 1);
    q[shift] = c;
    for (std::size_t j = 0; j < bb.size(); ++j) r[shift + j] = F.sub(r[shift + j], F.mul(c, bb[j]));
  }
  trim(F, q);
  trim(F, r);
  return {q, r};
}

RPoly monic(const ResidueField& F, const RPoly& a) {
  RPoly r = a;
  trim(F, r);
  if (r.empty()) return r;
  auto li = F.inv(r.back());
  for (auto& c : r) c = F.mul(c, li);
  return r;
}

RPoly gcd(const ResidueField& F, RPoly a, RPoly b) {
  trim(F, a);
  trim(F, b);
  while (!b.empty()) {
    auto r = divmod(F, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

RPoly powmod(const ResidueField& F, RPoly base, mpz_class e, const RPoly& m) {
  RPoly result{F.one()};
  result = divmod(F, result, m).second;
  base = divmod(F, base, m).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = divmod(F, mul(F, result, base), m).second;
    base = divmod(F, mul(F, base, base), m).second;
    e >>= 1;
  }
  return result;
}

RPoly derivative(const ResidueField& F, const RPoly& a) {
  RPoly r;
  for (std::size_t k = 1; k < a.size(); ++k) {
    auto c = F.zero();
    auto kk = F.from_int(static_cast<long>(k % static_cast<std::size_t>(F.p())));
    r.push_back(F.mul(a[k], kk));
    (void)c;
  }
  trim(F, r);
  return r;
}

ResidueField::Elem eval(const ResidueField& F, const RPoly& a, const ResidueField::Elem& x) {
  auto acc = F.zero();
  for (std::size_t k = a.size(); k-- > 0;) acc = F.add(F.mul(acc, x), a[k]);
  return acc;
}

namespace {

mpz_class field_size(const ResidueField& F) {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(F.p()), static_cast<unsigned long>(F.degree()));
  return q;
}

RPoly linear_x(const ResidueField& F) { return RPoly{F.zero(), F.one()}; }

// h is a product of distinct monic linear factors over F (odd p).
void split_linear(const ResidueField& F, const RPoly& h, std::mt19937_64& rng,
                  std::vector<ResidueField::Elem>& out) {
  int d = degree(F, h);
  if (d <= 0) return;
  if (d == 1) {
    RPoly m = monic(F, h);
    out.push_back(F.neg(m[0]));
    return;
  }
  mpz_class half = (field_size(F) - 1) / 2;
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::uint64_t idx = F.size() == 0 ? 0 : rng() % F.size();
    RPoly lin{F.from_index(idx), F.one()};
    RPoly w = powmod(F, lin, half, h);
    w = sub(F, w, RPoly{F.one()});
    RPoly g = gcd(F, h, w);
    int dg = degree(F, g);
    if (dg > 0 && dg < d) {
      split_linear(F, g, rng, out);
      split_linear(F, divmod(F, h, g).first, rng, out);
      return;
    }
  }
  throw InvariantViolation("equal-degree splitting failed to separate roots");
}

}  // namespace

std::vector<std::pair<ResidueField::Elem, int>> roots(const ResidueField& F, const RPoly& a0) {
  RPoly a = a0;
  trim(F, a);
  if (a.empty()) throw std::invalid_argument("roots of the zero polynomial");
  std::vector<std::pair<ResidueField::Elem, int>> out;
  int zero_mult = 0;
  while (!a.empty() && F.is_zero(a.front())) {
    a.erase(a.begin());
    ++zero_mult;
  }
  if (zero_mult > 0) out.emplace_back(F.zero(), zero_mult);
  if (degree(F, a) <= 0) return out;

  std::vector<ResidueField::Elem> distinct;
  if (F.size() <= kEnumerationLimit) {
    for (std::uint64_t idx = 1; idx < F.size(); ++idx) {
      auto x = F.from_index(idx);
      if (F.is_zero(eval(F, a, x))) distinct.push_back(x);
    }
  } else {
    if (F.p() == 2) throw WildCase("root search over a large field of characteristic 2 is not supported");
    RPoly xq = powmod(F, linear_x(F), field_size(F), a);
    RPoly h = gcd(F, a, sub(F, xq, linear_x(F)));
    std::mt19937_64 rng(0x5eed5eedULL);
    split_linear(F, h, rng, distinct);
    std::sort(distinct.begin(), distinct.end(),
              [&](const auto& x, const auto& y) { return F.to_index(x) < F.to_index(y); });
  }
  for (const auto& r : distinct) {
    RPoly lin{F.neg(r), F.one()};
    int m = 0;
    for (;;) {
      auto [q, rem] = divmod(F, a, lin);
      if (!rem.empty()) break;
      a = q;
      ++m;
    }
    out.emplace_back(r, m);
  }
  return out;
}

std::vector<int> factor_degrees(const ResidueField& F, const RPoly& a0) {
  RPoly a = monic(F, a0);
  if (degree(F, a) <= 0) return {};
  RPoly da = derivative(F, a);
  if (da.empty()) throw WildCase("inseparable residue polynomial");
  RPoly h = divmod(F, a, gcd(F, a, da)).first;
  h = monic(F, h);
  std::vector<int> degs;
  mpz_class q = field_size(F);
  RPoly xq = linear_x(F);
  for (int i = 1; degree(F, h) > 0; ++i) {
    if (2 * i > degree(F, h)) {
      degs.push_back(degree(F, h));
      break;
    }
    xq = powmod(F, xq, q, h);
    RPoly g = gcd(F, h, sub(F, xq, linear_x(F)));
    if (degree(F, g) > 0) {
      degs.push_back(i);
      h = divmod(F, h, g).first;
      xq = divmod(F, xq, h).second;
    }
  }
  return degs;
}

}  // namespace rpoly

std::vector<long> find_irreducible(long p, int degree) {
  if (degree < 1) throw std::invalid_argument("irreducible polynomial degree must be >= 1");
  if (degree == 1) return {0, 1};
  ResidueField Fp(p, {0, 1});
  std::vector<int> prime_divisors;
  for (int r = 2, n = degree; r <= n; ++r) {
    if (n % r == 0) {
      prime_divisors.push_back(r);
      while (n % r == 0) n /= r;
    }
  }
  auto to_rpoly = [&](const std::vector<long>& c) {
    RPoly r;
    for (long v : c) r.push_back(Fp.from_int(v));
    return r;
  };
  const RPoly x{Fp.zero(), Fp.one()};
  std::vector<long> coeffs(degree + 1, 0);
  coeffs[degree] = 1;
  for (std::uint64_t idx = 1;; ++idx) {
    std::uint64_t t = idx;
    for (int i = 0; i < degree; ++i) {
      coeffs[i] = static_cast<long>(t % static_cast<std::uint64_t>(p));
      t /= static_cast<std::uint64_t>(p);
    }
    if (t != 0) break;
    if (coeffs[0] == 0) continue;
    RPoly g = to_rpoly(coeffs);
    auto frob = [&](int k) {
      mpz_class e;
      mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
      return rpoly::powmod(Fp, x, e, g);
    };
    if (rpoly::sub(Fp, frob(degree), x).size() != 0) continue;
    bool ok = true;
    for (int r : prime_divisors) {
      RPoly g2 = rpoly::gcd(Fp, g, rpoly::sub(Fp, frob(degree / r), x));
      if (rpoly::degree(Fp, g2) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) return coeffs;
  }
  throw InvariantViolation("no irreducible polynomial found");
}

}  // namespace berktree
