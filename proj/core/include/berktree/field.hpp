#pragma once

#include <gmpxx.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "berktree/finite_field.hpp"
#include "berktree/rational.hpp"

namespace berktree {

class FieldTower;

// One field in the tower: K = Q_{p^f}(pi) with pi^E = p exactly.
// Elements are sums c_{r,i} pi^r X^i (r < E, i < f) where X is a root of
// the monic integer lift g of an irreducible gbar over F_p.
struct Stage {
  enum class Kind { Base, Ramified, Unramified };

  const FieldTower* tower = nullptr;
  const Stage* prev = nullptr;
  int index = 0;
  Kind kind = Kind::Base;
  int E = 1;
  int f = 1;
  int step = 1;  // E/E_prev or f/f_prev
  std::vector<mpz_class> g;  // f+1 coefficients, monic
  ResidueField residue;
  // Unramified steps only: image of X_prev^i, i < f_prev, as length-f vectors.
  std::vector<std::vector<mpz_class>> theta_pow;

  long p() const;
  std::size_t width() const { return static_cast<std::size_t>(E) * static_cast<std::size_t>(f); }
};

// Append-only chain of stages, each containing the previous one. Reads are
// lock-free; appends are serialized.
class FieldTower {
 public:
  static constexpr int kMaxStages = 48;

  FieldTower(long p, int precision, int max_depth = 24);
  FieldTower(const FieldTower&) = delete;
  FieldTower& operator=(const FieldTower&) = delete;

  long p() const { return p_; }
  // Relative p-adic digits attached to freshly created scalars.
  int precision() const { return N_; }
  int max_depth() const { return max_depth_; }

  const Stage* base() const { return stage(0); }
  const Stage* top() const { return stage(size() - 1); }
  std::size_t size() const { return count_.load(std::memory_order_acquire); }
  const Stage* stage(std::size_t i) const;

  // First stage at or above `from` whose E and f are multiples of the
  // requested ones, appending new stages when none exists. Throws WildCase
  // if the ramification would be divisible by p.
  const Stage* ensure(const Stage* from, int E_needed, int f_needed);
  // Smallest stage containing both.
  static const Stage* common(const Stage* a, const Stage* b);

  const mpz_class& ppow(int k) const;

 private:
  void append_unramified(int F);
  void append_ramified(int E);

  long p_;
  int N_;
  int max_depth_;
  std::vector<mpz_class> ppow_;
  std::array<std::unique_ptr<Stage>, kMaxStages> stages_;
  std::atomic<std::size_t> count_{0};
  std::mutex append_mutex_;
};

// An immutable element of some stage, carried to finite relative precision.
// Value state: x = p^k * u, u = sum c_{r,i} pi^r X^i with every c known
// modulo p^rel, normalized so that v(u) lies in [0, 1).
class Scalar {
 public:
  enum class State : std::uint8_t { ExactZero, InexactZero, Value };

  Scalar() = default;  // exact zero, no stage

  static Scalar zero(const Stage* s);
  static Scalar from_int(const Stage* s, long v);
  static Scalar from_mpz(const Stage* s, const mpz_class& v);
  static Scalar from_rational(const Stage* s, const mpq_class& q);
  static Scalar from_rational(const Stage* s, const Rational& q);
  // pi^e exactly, valuation e/E.
  static Scalar pi_power(const Stage* s, std::int64_t e);
  // Teichmuller-free lift: the residue digits placed at pi^0.
  static Scalar lift(const Stage* s, const ResidueField::Elem& e);
  // Zero known only up to p^abs.
  static Scalar inexact_zero(const Stage* s, std::int64_t abs);

  State state() const { return state_; }
  const Stage* stage() const { return stage_; }
  bool is_exact_zero() const { return state_ == State::ExactZero; }
  // Exact zero or zero to the carried precision.
  bool is_zero() const { return state_ != State::Value; }

  // Throws PrecisionExhausted for an inexact zero.
  ValQ valuation() const;
  // Largest value known to be a lower bound for v(x).
  ValQ valuation_lower_bound() const;
  // min(v(x), cap), throwing PrecisionExhausted when undecidable.
  Rational val_capped(const Rational& cap) const;
  // Absolute precision in p-digits; +inf for exact zero.
  ValQ abs_precision() const;

  ResidueField::Elem residue() const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar inv() const;
  Scalar pow(unsigned n) const;
  Scalar mul_pi_power(std::int64_t e) const;
  // Drop every term of valuation >= t. Throws PrecisionExhausted when t
  // exceeds the absolute precision.
  Scalar truncated(const Rational& t) const;

  Scalar embed(const Stage* target) const;

  // "n/d" when the element is a recognisable rational, otherwise a
  // descriptive form "p^(v)*<stage s unit>".
  std::string str() const;
  // Returns true and fills q when the element reconstructs to a small
  // rational.
  bool to_rational(mpq_class& q) const;

  // Raw access for serialization.
  std::int64_t raw_k() const { return k_; }
  int raw_rel() const { return rel_; }
  const std::vector<mpz_class>& raw_coeffs() const { return c_; }
  static Scalar from_raw(const Stage* s, std::int64_t k, int rel, std::vector<mpz_class> c);

 private:
  void normalize();
  static Scalar add_impl(const Scalar& a, const Scalar& b, bool negate_b);

  State state_ = State::ExactZero;
  const Stage* stage_ = nullptr;
  std::int64_t k_ = 0;    // for InexactZero: absolute precision
  int rel_ = 0;
  std::int64_t vE_ = 0;   // E * v(x) for values
  std::vector<mpz_class> c_;
};

// Brings both operands to their common stage.
void coerce(Scalar& a, Scalar& b);

}  // namespace berktree
