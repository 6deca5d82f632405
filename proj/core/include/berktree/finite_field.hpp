#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace berktree {

// F_{p^f} realised as F_p[X]/(gbar) with gbar monic irreducible of degree f.
// Elements are coefficient vectors of length f in the basis 1, X, ..., X^{f-1}.
class ResidueField {
 public:
  using Elem = std::vector<long>;

  ResidueField() = default;
  ResidueField(long p, std::vector<long> modulus);

  long p() const { return p_; }
  int degree() const { return f_; }
  const std::vector<long>& modulus() const { return mod_; }
  // Field size p^f; saturates at UINT64_MAX.
  std::uint64_t size() const { return size_; }

  Elem zero() const { return Elem(f_, 0); }
  Elem one() const;
  Elem from_int(long v) const;
  bool is_zero(const Elem& a) const;
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem pow(const Elem& a, const mpz_class& e) const;

  // Enumeration order: index = sum c_i p^i.
  Elem from_index(std::uint64_t idx) const;
  std::uint64_t to_index(const Elem& a) const;

 private:
  long p_ = 0;
  int f_ = 0;
  std::vector<long> mod_;
  std::uint64_t size_ = 0;
};

// Polynomials over a ResidueField, lowest degree first, trimmed.
using RPoly = std::vector<ResidueField::Elem>;

namespace rpoly {

void trim(const ResidueField& F, RPoly& a);
int degree(const ResidueField& F, const RPoly& a);  // -1 for zero
RPoly add(const ResidueField& F, const RPoly& a, const RPoly& b);
RPoly sub(const ResidueField& F, const RPoly& a, const RPoly& b);
RPoly mul(const ResidueField& F, const RPoly& a, const RPoly& b);
// Quotient and remainder; b must be non-zero.
std::pair<RPoly, RPoly> divmod(const ResidueField& F, const RPoly& a, const RPoly& b);
RPoly monic(const ResidueField& F, const RPoly& a);
RPoly gcd(const ResidueField& F, RPoly a, RPoly b);
RPoly powmod(const ResidueField& F, RPoly base, mpz_class e, const RPoly& m);
RPoly derivative(const ResidueField& F, const RPoly& a);
ResidueField::Elem eval(const ResidueField& F, const RPoly& a, const ResidueField::Elem& x);

// Roots in F with multiplicities. Exhaustive search when |F| <= 1e5,
// otherwise equal-degree splitting (odd p only).
std::vector<std::pair<ResidueField::Elem, int>> roots(const ResidueField& F, const RPoly& a);

// Degrees of the irreducible factors of a (with repetition collapsed),
// found by distinct-degree factorisation of the squarefree part.
std::vector<int> factor_degrees(const ResidueField& F, const RPoly& a);

}  // namespace rpoly

// First monic irreducible polynomial of the given degree over F_p in
// enumeration order (coefficients low to high). Degree 1 gives X.
std::vector<long> find_irreducible(long p, int degree);

}  // namespace berktree
