#pragma once

#include <string>

#include "berktree/parse.hpp"
#include "berktree/resloc.hpp"

namespace bt {

using namespace berktree;

inline Scalar num(const Poly& P, std::int64_t n, std::int64_t d = 1) {
  return Scalar::from_rational(P.tower().base(), Rational(n, d));
}

inline BerkPoint ball(const Poly& P, Rational c, Rational rv) {
  return BerkPoint::ball(Scalar::from_rational(P.tower().base(), c), rv);
}

inline BerkPoint gauss(const Poly& P) { return ball(P, 0, 0); }

// The quartic with three preimage leaves, as usually quoted. Its critical
// points sit near -1 and -1/p, so the degree table holds at mirrored centers.
inline Poly quartic(long p) {
  return Poly::parse(p, "1/(4*p^2)*z^4 - (p-1)/(3*p^3)*z^3 + 1/(2*p^3)*z^2");
}

// Sign-corrected quartic: critical points exactly 0, 1 and 1/p.
inline Poly quartic_corrected(long p) {
  return Poly::parse(p, "1/(4*p^2)*z^4 - (p+1)/(3*p^3)*z^3 + 1/(2*p^3)*z^2");
}

// (d-1) p z^d - d z^(d-1): critical points 0 and 1/p, base point Ball(0,-1).
inline Poly family(int d, long p) {
  const std::string D = std::to_string(d), D1 = std::to_string(d - 1);
  return Poly::parse(p, D1 + "*p*z^" + D + " - " + D + "*z^" + D1);
}

inline Poly monomial(int d, long p) { return Poly::parse(p, "z^" + std::to_string(d)); }

}  // namespace bt
