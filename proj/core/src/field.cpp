#include "berktree/field.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "berktree/errors.hpp"

namespace berktree {

namespace {

constexpr int kMaxExtensionDegree = 256;

// Arithmetic in (Z/p^M)[X]/(g)[pi]/(pi^E - p), unreduced modulo p^M.
struct Ring {
  int E;
  int f;
  const std::vector<mpz_class>* g;
  long p;
};

std::vector<mpz_class> ring_mul(const Ring& R, const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b) {
  const int E = R.E, f = R.f, W = 2 * f - 1;
  std::vector<mpz_class> t(static_cast<std::size_t>(2 * E - 1) * W);
  for (int r1 = 0; r1 < E; ++r1) {
    for (int i1 = 0; i1 < f; ++i1) {
      const mpz_class& x = a[r1 * f + i1];
      if (x == 0) continue;
      for (int r2 = 0; r2 < E; ++r2) {
        for (int i2 = 0; i2 < f; ++i2) {
          const mpz_class& y = b[r2 * f + i2];
          if (y == 0) continue;
          mpz_addmul(t[(r1 + r2) * W + i1 + i2].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        }
      }
    }
  }
  const auto& g = *R.g;
  for (int r = 0; r < 2 * E - 1; ++r) {
    for (int i = 2 * f - 2; i >= f; --i) {
      mpz_class coef = t[r * W + i];
      if (coef == 0) continue;
      for (int j = 0; j < f; ++j) {
        if (g[j] != 0) mpz_submul(t[r * W + i - f + j].get_mpz_t(), coef.get_mpz_t(), g[j].get_mpz_t());
      }
      t[r * W + i] = 0;
    }
  }
  std::vector<mpz_class> out(static_cast<std::size_t>(E) * f);
  for (int r = 0; r < 2 * E - 1; ++r) {
    for (int i = 0; i < f; ++i) {
      mpz_class& v = t[r * W + i];
      if (v == 0) continue;
      if (r < E) {
        out[r * f + i] += v;
      } else {
        mpz_addmul_ui(out[(r - E) * f + i].get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(R.p));
      }
    }
  }
  return out;
}

void reduce_all(std::vector<mpz_class>& v, const mpz_class& mod) {
  for (auto& c : v) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
}

bool all_zero(const std::vector<mpz_class>& v) {
  return std::all_of(v.begin(), v.end(), [](const mpz_class& c) { return c == 0; });
}

// Inverse of a unit w modulo mod = p^digits by Newton iteration.
std::vector<mpz_class> unit_inverse(const Ring& R, const ResidueField& F, const std::vector<mpz_class>& w,
                                    const mpz_class& mod) {
  ResidueField::Elem res(R.f);
  for (int i = 0; i < R.f; ++i) {
    mpz_class t;
    mpz_fdiv_r_ui(t.get_mpz_t(), w[i].get_mpz_t(), static_cast<unsigned long>(R.p));
    res[i] = t.get_si();
  }
  auto ri = F.inv(res);
  std::vector<mpz_class> z(w.size());
  for (int i = 0; i < R.f; ++i) z[i] = ri[i];
  for (int iter = 0; iter < 128; ++iter) {
    auto e = ring_mul(R, w, z);
    e[0] -= 1;
    reduce_all(e, mod);
    if (all_zero(e)) return z;
    auto ze = ring_mul(R, z, e);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= ze[i];
    reduce_all(z, mod);
  }
  throw InvariantViolation("unit inverse iteration did not converge");
}

long mpz_valuation(const mpz_class& c, long p, mpz_class& scratch) {
  if (!mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p))) return 0;
  mpz_class pp = p;
  return static_cast<long>(mpz_remove(scratch.get_mpz_t(), c.get_mpz_t(), pp.get_mpz_t()));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

long Stage::p() const { return tower->p(); }

FieldTower::FieldTower(long p, int precision, int max_depth)
    : p_(p), N_(precision), max_depth_(max_depth) {
  if (p < 2) throw InputError("prime must be at least 2");
  if (precision < 4) throw InputError("precision must be at least 4 digits");
  const int L = 4 * precision + 256;
  ppow_.resize(L + 1);
  ppow_[0] = 1;
  for (int i = 1; i <= L; ++i) ppow_[i] = ppow_[i - 1] * p;
  auto base = std::make_unique<Stage>();
  base->tower = this;
  base->index = 0;
  base->kind = Stage::Kind::Base;
  base->g = {0, 1};
  base->residue = ResidueField(p, {0, 1});
  stages_[0] = std::move(base);
  count_.store(1, std::memory_order_release);
}

const Stage* FieldTower::stage(std::size_t i) const {
  if (i >= size()) throw InvariantViolation("stage index out of range");
  return stages_[i].get();
}

const mpz_class& FieldTower::ppow(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= ppow_.size()) throw PrecisionExhausted("p-power table exceeded");
  return ppow_[k];
}

const Stage* FieldTower::common(const Stage* a, const Stage* b) {
  if (!a) return b;
  if (!b) return a;
  if (a->tower != b->tower) throw InvariantViolation("scalars from different towers");
  return a->index >= b->index ? a : b;
}

const Stage* FieldTower::ensure(const Stage* from, int E_needed, int f_needed) {
  auto scan = [&]() -> const Stage* {
    std::size_t n = size();
    for (std::size_t j = from ? from->index : 0; j < n; ++j) {
      const Stage* s = stages_[j].get();
      if (s->E % E_needed == 0 && s->f % f_needed == 0) return s;
    }
    return nullptr;
  };
  if (auto s = scan()) return s;
  std::lock_guard<std::mutex> lock(append_mutex_);
  if (auto s = scan()) return s;
  const Stage* top_stage = top();
  int E_new = static_cast<int>(lcm64(top_stage->E, E_needed));
  int f_new = static_cast<int>(lcm64(top_stage->f, f_needed));
  if (E_new % p_ == 0) throw WildCase("ramification index " + std::to_string(E_new) + " divisible by p");
  if (static_cast<long>(E_new) * f_new > kMaxExtensionDegree) {
    throw WildCase("extension degree " + std::to_string(E_new * f_new) + " exceeds the supported bound");
  }
  if (f_new != top_stage->f) append_unramified(f_new);
  if (E_new != top()->E) append_ramified(E_new);
  return top();
}

void FieldTower::append_ramified(int E) {
  std::size_t n = size();
  if (n >= kMaxStages) throw WildCase("field tower depth limit reached");
  const Stage* prev = stages_[n - 1].get();
  auto s = std::make_unique<Stage>();
  s->tower = this;
  s->prev = prev;
  s->index = static_cast<int>(n);
  s->kind = Stage::Kind::Ramified;
  s->E = E;
  s->f = prev->f;
  s->step = E / prev->E;
  s->g = prev->g;
  s->residue = prev->residue;
  stages_[n] = std::move(s);
  count_.store(n + 1, std::memory_order_release);
}

void FieldTower::append_unramified(int F) {
  std::size_t n = size();
  if (n >= kMaxStages) throw WildCase("field tower depth limit reached");
  const Stage* prev = stages_[n - 1].get();
  auto s = std::make_unique<Stage>();
  s->tower = this;
  s->prev = prev;
  s->index = static_cast<int>(n);
  s->kind = Stage::Kind::Unramified;
  s->E = prev->E;
  s->f = F;
  s->step = F / prev->f;
  auto gbar = find_irreducible(p_, F);
  s->g.assign(gbar.begin(), gbar.end());
  s->residue = ResidueField(p_, gbar);

  const int fp = prev->f;
  const int M = N_ + 8;
  const mpz_class& mod = ppow_[M];
  std::vector<mpz_class> theta(F);
  if (fp == 1) {
    theta[0] = 0;  // unused: only X_prev^0 is needed
  } else {
    // Residue root of gbar_prev in the new residue field, then Hensel.
    const ResidueField& RF = s->residue;
    RPoly gp;
    for (const auto& c : prev->g) gp.push_back(RF.from_int(mpz_class(c % p_).get_si()));
    auto rts = rpoly::roots(RF, gp);
    if (rts.empty()) throw InvariantViolation("previous residue field does not embed");
    for (int i = 0; i < F; ++i) theta[i] = rts.front().first[i];
    Ring R{1, F, &s->g, p_};
    auto eval_g = [&](const std::vector<mpz_class>& x, bool derivative) {
      std::vector<mpz_class> acc(F);
      const auto& gc = prev->g;
      int top_deg = static_cast<int>(gc.size()) - 1;
      for (int k = top_deg; k >= (derivative ? 1 : 0); --k) {
        acc = ring_mul(R, acc, x);
        mpz_class coef = derivative ? gc[k] * k : gc[k];
        acc[0] += coef;
        reduce_all(acc, mod);
      }
      return acc;
    };
    bool converged = false;
    for (int iter = 0; iter < 128; ++iter) {
      auto val = eval_g(theta, false);
      if (all_zero(val)) {
        converged = true;
        break;
      }
      auto der = eval_g(theta, true);
      auto dinv = unit_inverse(R, s->residue, der, mod);
      auto corr = ring_mul(R, val, dinv);
      for (int i = 0; i < F; ++i) theta[i] -= corr[i];
      reduce_all(theta, mod);
    }
    if (!converged) throw InvariantViolation("embedding root did not converge");
  }
  Ring R{1, F, &s->g, p_};
  std::vector<mpz_class> power(F);
  power[0] = 1;
  for (int i = 0; i < fp; ++i) {
    s->theta_pow.push_back(power);
    power = ring_mul(R, power, theta);
    reduce_all(power, mod);
  }
  stages_[n] = std::move(s);
  count_.store(n + 1, std::memory_order_release);
}

// ---------------------------------------------------------------------------

Scalar Scalar::zero(const Stage* s) {
  Scalar x;
  x.stage_ = s;
  return x;
}

Scalar Scalar::inexact_zero(const Stage* s, std::int64_t abs) {
  Scalar x;
  x.stage_ = s;
  x.state_ = State::InexactZero;
  x.k_ = abs;
  return x;
}

Scalar Scalar::from_raw(const Stage* s, std::int64_t k, int rel, std::vector<mpz_class> c) {
  if (c.size() != s->width()) throw InvariantViolation("coefficient vector has the wrong width");
  if (all_zero(c)) return inexact_zero(s, k + rel);
  Scalar x;
  x.stage_ = s;
  x.state_ = State::Value;
  x.k_ = k;
  x.rel_ = rel;
  x.c_ = std::move(c);
  x.normalize();
  return x;
}

Scalar Scalar::from_mpz(const Stage* s, const mpz_class& v) {
  return from_rational(s, mpq_class(v));
}

Scalar Scalar::from_int(const Stage* s, long v) { return from_mpz(s, mpz_class(v)); }

Scalar Scalar::from_rational(const Stage* s, const Rational& q) {
  return from_rational(s, mpq_class(mpz_class(q.num()), mpz_class(q.den())));
}

Scalar Scalar::from_rational(const Stage* s, const mpq_class& q0) {
  mpq_class q = q0;
  q.canonicalize();
  if (q == 0) return zero(s);
  const long p = s->p();
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class pp = p;
  std::int64_t k = static_cast<std::int64_t>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t())) -
                   static_cast<std::int64_t>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
  const int N = s->tower->precision();
  const mpz_class& mod = s->tower->ppow(N);
  mpz_class dinv;
  mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  std::vector<mpz_class> c(s->width());
  c[0] = num * dinv;
  return from_raw(s, k, N, std::move(c));
}

Scalar Scalar::pi_power(const Stage* s, std::int64_t e) {
  std::int64_t q = floor_div(e, s->E);
  std::int64_t r = e - q * s->E;
  std::vector<mpz_class> c(s->width());
  c[r * s->f] = 1;
  return from_raw(s, q, s->tower->precision(), std::move(c));
}

Scalar Scalar::lift(const Stage* s, const ResidueField::Elem& e) {
  std::vector<mpz_class> c(s->width());
  bool any = false;
  for (int i = 0; i < s->f; ++i) {
    c[i] = e[i];
    any = any || e[i] != 0;
  }
  if (!any) return zero(s);
  return from_raw(s, 0, s->tower->precision(), std::move(c));
}

void Scalar::normalize() {
  if (state_ != State::Value) return;
  const Stage& S = *stage_;
  if (rel_ <= 0) {
    *this = inexact_zero(stage_, k_ + rel_);
    return;
  }
  const mpz_class& mod = S.tower->ppow(rel_);
  const long p = S.p();
  std::int64_t min_key = std::numeric_limits<std::int64_t>::max();
  mpz_class scratch;
  for (std::size_t idx = 0; idx < c_.size(); ++idx) {
    mpz_class& c = c_[idx];
    if (c < 0 || c >= mod) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
    if (c == 0) continue;
    std::int64_t r = static_cast<std::int64_t>(idx) / S.f;
    std::int64_t key = static_cast<std::int64_t>(S.E) * mpz_valuation(c, p, scratch) + r;
    min_key = std::min(min_key, key);
  }
  if (min_key == std::numeric_limits<std::int64_t>::max()) {
    *this = inexact_zero(stage_, k_ + rel_);
    return;
  }
  std::int64_t t = min_key / S.E;
  if (t > 0) {
    const mpz_class& pt = S.tower->ppow(static_cast<int>(t));
    for (auto& c : c_) {
      if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pt.get_mpz_t());
    }
    k_ += t;
    rel_ -= static_cast<int>(t);
  }
  vE_ = static_cast<std::int64_t>(S.E) * k_ + (min_key - static_cast<std::int64_t>(S.E) * t);
}

ValQ Scalar::valuation() const {
  switch (state_) {
    case State::ExactZero:
      return ValQ::infinity();
    case State::InexactZero:
      throw PrecisionExhausted("valuation of a value indistinguishable from zero at p^" + std::to_string(k_));
    case State::Value:
      break;
  }
  return ValQ(Rational(vE_, stage_->E));
}

ValQ Scalar::valuation_lower_bound() const {
  if (state_ == State::InexactZero) return ValQ(Rational(k_));
  return valuation();
}

Rational Scalar::val_capped(const Rational& cap) const {
  switch (state_) {
    case State::ExactZero:
      return cap;
    case State::InexactZero:
      if (Rational(k_) >= cap) return cap;
      throw PrecisionExhausted("cannot decide valuation against " + cap.str());
    case State::Value:
      break;
  }
  return min(Rational(vE_, stage_->E), cap);
}

ValQ Scalar::abs_precision() const {
  switch (state_) {
    case State::ExactZero:
      return ValQ::infinity();
    case State::InexactZero:
      return ValQ(Rational(k_));
    case State::Value:
      break;
  }
  return ValQ(Rational(k_ + rel_));
}

ResidueField::Elem Scalar::residue() const {
  if (!stage_) return ResidueField::Elem(1, 0);
  const Stage& S = *stage_;
  switch (state_) {
    case State::ExactZero:
      return S.residue.zero();
    case State::InexactZero:
      if (k_ >= 1) return S.residue.zero();
      throw PrecisionExhausted("residue of a value with too little precision");
    case State::Value:
      break;
  }
  if (vE_ < 0) throw NegativeValuation("residue of an element of negative valuation");
  if (vE_ > 0) return S.residue.zero();
  ResidueField::Elem e(S.f);
  for (int i = 0; i < S.f; ++i) {
    mpz_class t;
    mpz_fdiv_r_ui(t.get_mpz_t(), c_[i].get_mpz_t(), static_cast<unsigned long>(S.p()));
    e[i] = t.get_si();
  }
  return e;
}

void coerce(Scalar& a, Scalar& b) {
  const Stage* s = FieldTower::common(a.stage(), b.stage());
  if (a.stage() != s) a = a.embed(s);
  if (b.stage() != s) b = b.embed(s);
}

Scalar Scalar::embed(const Stage* target) const {
  if (target == stage_ || target == nullptr) return *this;
  if (stage_ == nullptr) {
    Scalar x = *this;
    x.stage_ = target;
    return x;
  }
  if (target->tower != stage_->tower || target->index < stage_->index) {
    throw InvariantViolation("embedding into a smaller or foreign stage");
  }
  if (state_ != State::Value) {
    Scalar x = *this;
    x.stage_ = target;
    return x;
  }
  std::vector<mpz_class> c = c_;
  const Stage* cur = stage_;
  while (cur != target) {
    const Stage* next = cur->tower->stage(cur->index + 1);
    std::vector<mpz_class> nc(next->width());
    if (next->kind == Stage::Kind::Ramified) {
      const int m = next->step;
      for (int r = 0; r < cur->E; ++r) {
        for (int i = 0; i < cur->f; ++i) nc[(r * m) * next->f + i] = std::move(c[r * cur->f + i]);
      }
    } else {
      for (int r = 0; r < cur->E; ++r) {
        for (int i = 0; i < cur->f; ++i) {
          const mpz_class& x = c[r * cur->f + i];
          if (x == 0) continue;
          const auto& th = next->theta_pow[i];
          for (int j = 0; j < next->f; ++j) {
            if (th[j] != 0) mpz_addmul(nc[r * next->f + j].get_mpz_t(), x.get_mpz_t(), th[j].get_mpz_t());
          }
        }
      }
    }
    c = std::move(nc);
    cur = next;
  }
  return from_raw(target, k_, rel_, std::move(c));
}

Scalar Scalar::add_impl(const Scalar& a0, const Scalar& b0, bool negate_b) {
  if (b0.is_exact_zero()) return a0.stage() ? a0.embed(FieldTower::common(a0.stage(), b0.stage())) : a0;
  if (a0.is_exact_zero()) {
    Scalar r = negate_b ? -b0 : b0;
    return r.embed(FieldTower::common(a0.stage(), b0.stage()));
  }
  Scalar a = a0, b = b0;
  coerce(a, b);
  const Stage* S = a.stage_;
  auto krel = [](const Scalar& x) {
    if (x.state_ == State::InexactZero) return std::pair<std::int64_t, std::int64_t>(x.k_, 0);
    return std::pair<std::int64_t, std::int64_t>(x.k_, x.rel_);
  };
  auto [ka, ra] = krel(a);
  auto [kb, rb] = krel(b);
  std::int64_t kmin = std::min(ka, kb);
  std::int64_t abs = std::min(ka + ra, kb + rb);
  std::int64_t rel = abs - kmin;
  if (rel <= 0) return inexact_zero(S, abs);
  std::vector<mpz_class> c(S->width());
  auto accumulate = [&](const Scalar& x, std::int64_t kx, bool neg) {
    if (x.state_ != State::Value) return;
    std::int64_t shift = kx - kmin;
    if (shift >= rel) return;
    const mpz_class& ps = S->tower->ppow(static_cast<int>(shift));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (x.c_[i] == 0) continue;
      if (neg) {
        mpz_submul(c[i].get_mpz_t(), x.c_[i].get_mpz_t(), ps.get_mpz_t());
      } else {
        mpz_addmul(c[i].get_mpz_t(), x.c_[i].get_mpz_t(), ps.get_mpz_t());
      }
    }
  };
  accumulate(a, ka, false);
  accumulate(b, kb, negate_b);
  return from_raw(S, kmin, static_cast<int>(rel), std::move(c));
}

Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar::add_impl(a, b, false); }
Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar::add_impl(a, b, true); }

Scalar Scalar::operator-() const {
  if (state_ != State::Value) return *this;
  Scalar x = *this;
  for (auto& c : x.c_) c = -c;
  x.normalize();
  return x;
}

Scalar operator*(const Scalar& a0, const Scalar& b0) {
  const Stage* S = FieldTower::common(a0.stage(), b0.stage());
  if (a0.is_exact_zero() || b0.is_exact_zero()) return Scalar::zero(S);
  if (a0.state() == Scalar::State::InexactZero || b0.state() == Scalar::State::InexactZero) {
    Rational bound = a0.valuation_lower_bound().value() + b0.valuation_lower_bound().value();
    return Scalar::inexact_zero(S, bound.floor());
  }
  Scalar a = a0, b = b0;
  coerce(a, b);
  Ring R{S->E, S->f, &S->g, S->p()};
  auto c = ring_mul(R, a.c_, b.c_);
  return Scalar::from_raw(S, a.k_ + b.k_, std::min(a.rel_, b.rel_), std::move(c));
}

Scalar Scalar::inv() const {
  if (state_ == State::ExactZero) throw DivisionByZero("inverse of exact zero");
  if (state_ == State::InexactZero) throw PrecisionExhausted("inverse of a value indistinguishable from zero");
  const Stage& S = *stage_;
  const std::int64_t r0 = vE_ - static_cast<std::int64_t>(S.E) * k_;
  Ring R{S.E, S.f, &S.g, S.p()};
  if (r0 == 0) {
    auto z = unit_inverse(R, S.residue, c_, S.tower->ppow(rel_));
    return from_raw(stage_, -k_, rel_, std::move(z));
  }
  // W = u * pi^(E - r0) / p is a unit carrying rel - 1 digits.
  Scalar shifted = from_raw(stage_, 0, rel_ + 1, c_).mul_pi_power(S.E - r0);
  if (shifted.state_ != State::Value || shifted.vE_ != static_cast<std::int64_t>(S.E)) {
    throw InvariantViolation("unit normalization failed in inverse");
  }
  const int digits = rel_ - 1;
  if (digits <= 0) throw PrecisionExhausted("inverse of a value with one digit of precision");
  std::vector<mpz_class> w = shifted.c_;
  auto z = unit_inverse(R, S.residue, w, S.tower->ppow(digits));
  return from_raw(stage_, -k_ - 1, digits, std::move(z)).mul_pi_power(S.E - r0);
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

Scalar Scalar::pow(unsigned n) const {
  if (!stage_) throw InvariantViolation("power of a stageless scalar");
  Scalar result = from_int(stage_, 1);
  Scalar base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Scalar Scalar::mul_pi_power(std::int64_t e) const {
  if (state_ == State::ExactZero || e == 0) return *this;
  const Stage& S = *stage_;
  if (state_ == State::InexactZero) {
    return inexact_zero(stage_, (Rational(k_) + Rational(e, S.E)).floor());
  }
  std::int64_t q = floor_div(e, S.E);
  std::int64_t r = e - q * S.E;
  std::vector<mpz_class> c(S.width());
  for (int ro = 0; ro < S.E; ++ro) {
    std::int64_t rn = ro + r;
    bool wrap = rn >= S.E;
    if (wrap) rn -= S.E;
    for (int i = 0; i < S.f; ++i) {
      const mpz_class& x = c_[ro * S.f + i];
      if (x == 0) continue;
      c[rn * S.f + i] = wrap ? mpz_class(x * S.p()) : x;
    }
  }
  return from_raw(stage_, k_ + q, rel_, std::move(c));
}

Scalar Scalar::truncated(const Rational& t) const {
  if (state_ == State::ExactZero) return *this;
  if (abs_precision() < ValQ(t)) throw PrecisionExhausted("truncation beyond carried precision");
  if (state_ == State::InexactZero) return zero(stage_);
  const Stage& S = *stage_;
  std::vector<mpz_class> c = c_;
  bool any = false;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    if (c[idx] == 0) continue;
    int r = static_cast<int>(idx) / S.f;
    std::int64_t digits = (t - Rational(k_) - Rational(r, S.E)).ceil();
    if (digits <= 0) {
      c[idx] = 0;
      continue;
    }
    mpz_fdiv_r(c[idx].get_mpz_t(), c[idx].get_mpz_t(), S.tower->ppow(static_cast<int>(digits)).get_mpz_t());
    any = any || c[idx] != 0;
  }
  if (!any) return zero(stage_);
  return from_raw(stage_, k_, rel_, std::move(c));
}

bool Scalar::to_rational(mpq_class& q) const {
  if (state_ == State::ExactZero) {
    q = 0;
    return true;
  }
  if (state_ == State::InexactZero) return false;
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (c_[i] != 0) return false;
  }
  const Stage& S = *stage_;
  if (vE_ % S.E != 0) return false;
  const mpz_class& M = S.tower->ppow(rel_);
  // Height bound M^(1/3) rather than sqrt(M/2): spurious reconstructions of
  // genuinely irrational p-adic numbers become vanishingly rare.
  mpz_class bound;
  mpz_root(bound.get_mpz_t(), M.get_mpz_t(), 3);
  // Extended Euclid on (M, c) stopped at the first remainder below bound.
  mpz_class r0 = M, r1 = c_[0], t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class qq = r0 / r1;
    mpz_class r2 = r0 - qq * r1;
    mpz_class t2 = t0 - qq * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  mpz_class a = r1, b = t1;
  if (b < 0) {
    a = -a;
    b = -b;
  }
  if (b == 0 || b > bound) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1) return false;
  if (mpz_divisible_ui_p(b.get_mpz_t(), static_cast<unsigned long>(S.p()))) return false;
  mpq_class val(a, b);
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(S.p()),
                static_cast<unsigned long>(k_ < 0 ? -k_ : k_));
  if (k_ >= 0) {
    val *= mpq_class(pk);
  } else {
    val /= mpq_class(pk);
  }
  val.canonicalize();
  q = val;
  return true;
}

std::string Scalar::str() const {
  if (state_ == State::ExactZero) return "0";
  if (state_ == State::InexactZero) return "O(p^" + std::to_string(k_) + ")";
  mpq_class q;
  if (to_rational(q)) return q.get_str();
  const Stage& S = *stage_;
  std::ostringstream os;
  os << "p^(" << Rational(vE_, S.E).str() << ")*s" << S.index << "[";
  const int shown = std::min(rel_, 6);
  const mpz_class& m = S.tower->ppow(shown);
  // Show the unit after removing the pi-power offset, low digits only.
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ",";
    mpz_class t;
    mpz_fdiv_r(t.get_mpz_t(), c_[i].get_mpz_t(), m.get_mpz_t());
    os << t.get_str();
  }
  os << "]";
  return os.str();
}

}  // namespace berktree
