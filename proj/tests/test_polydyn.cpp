#include <doctest.h>

#include <random>

#include "berktree/errors.hpp"
#include "support.hpp"

using namespace bt;

namespace {

long total_degree(const std::vector<FiberEntry>& fib) {
  long s = 0;
  for (const auto& e : fib) s += e.local_degree;
  return s;
}

bool close_to(const Scalar& x, const Scalar& y) {
  const Scalar d = x - y;
  return d.is_zero() || d.valuation() >= ValQ(20);
}

}  // namespace

TEST_CASE("image points") {
  const Poly Z = monomial(3, 5);
  CHECK(same_point(image_point(Z, ball(Z, 0, Rational(2, 3))), ball(Z, 0, 2)));
  CHECK(same_point(image_point(Z, ball(Z, 0, -1)), ball(Z, 0, -3)));

  const Poly P = family(3, 5);
  CHECK(same_point(image_point(P, ball(P, 0, Rational(-1, 2))), ball(P, 0, -1)));
  CHECK(same_point(image_point(P, gauss(P)), gauss(P)));
  CHECK(same_point(image_point_iter(P, 2, ball(P, 0, Rational(-1, 2))), image_point(P, ball(P, 0, -1))));
  CHECK(image_point(P, BerkPoint::infinity()).is_infinity());
}

TEST_CASE("local degrees of the quartic") {
  for (long p : {5L, 7L}) {
    for (int sign : {1, -1}) {
      const Poly P = sign > 0 ? quartic_corrected(p) : quartic(p);
      CHECK(local_degree(P, ball(P, 0, -1)) == 4);
      CHECK(local_degree(P, ball(P, 0, -3)) == 4);
      CHECK(local_degree(P, ball(P, 0, 0)) == 3);
      CHECK(local_degree(P, ball(P, 0, Rational(-1, 2))) == 3);
      CHECK(local_degree(P, ball(P, 0, 2)) == 2);
      CHECK(local_degree(P, ball(P, sign, 1)) == 2);
      CHECK(local_degree(P, ball(P, Rational(sign, p), Rational(-1, 2))) == 2);
      CHECK(local_degree(P, ball(P, 2 * sign, 1)) == 1);
    }
    // The printed signs move the critical points, so the literal centers lose a degree.
    const Poly Q = quartic(p);
    CHECK(local_degree(Q, ball(Q, 1, 1)) == 1);
  }
  const Poly Z4 = monomial(4, 5);
  CHECK(local_degree(Z4, gauss(Z4)) == 4);
  const Poly F = family(3, 5);
  CHECK(local_degree(F, ball(F, 0, Rational(-1, 2))) == 2);
  CHECK(local_degree_iter(F, 2, ball(F, 0, Rational(-1, 2))) == 6);
}

TEST_CASE("directional and surplus multiplicities") {
  const Poly Z = monomial(3, 5);
  const BerkPoint g = gauss(Z);
  CHECK(directional_multiplicity(Z, g, direction_to_infinity(g)) == 3);
  CHECK(surplus_multiplicity(Z, g, direction_to_infinity(g)) == 0);

  const Poly P = family(3, 5);
  const BerkPoint xp = ball(P, 0, Rational(-1, 2)), xb = ball(P, 0, -1);
  CHECK(directional_multiplicity(P, xp, direction_at(xp, ball(P, 0, 3))) == 2);
  CHECK(directional_multiplicity(P, xb, direction_to_infinity(xb)) == 3);
  CHECK(surplus_multiplicity(P, xb, direction_to_infinity(xb)) == 0);
  // Below the base point the missing degree shows up as surplus at infinity.
  CHECK(surplus_multiplicity(P, xp, direction_to_infinity(xp)) == 1);
  CHECK(surplus_multiplicity(P, xp, direction_at(xp, ball(P, 0, 3))) == 0);
}

TEST_CASE("preimages") {
  const Poly Z = monomial(3, 5);
  const auto fz = preimages(Z, gauss(Z));
  REQUIRE(fz.size() == 1);
  CHECK(same_point(fz[0].point, gauss(Z)));
  CHECK(fz[0].local_degree == 3);

  const Poly P = family(3, 5);
  const BerkPoint xb = ball(P, 0, -1);
  const auto fb = preimages(P, xb);
  REQUIRE(fb.size() == 2);
  int found = 0;
  for (const auto& e : fb) {
    CHECK(strictly_below(e.point, xb));
    if (same_point(e.point, ball(P, 0, Rational(-1, 2)))) {
      CHECK(e.local_degree == 2);
      ++found;
    } else {
      CHECK(e.local_degree == 1);
      CHECK(in_direction(direction_at(xb, e.point), BerkPoint::finite(num(P, 3, 10))));
      ++found;
    }
  }
  CHECK(found == 2);
}

TEST_CASE("preimages of images contain the point") {
  std::mt19937 rng(11);
  for (long p : {5L, 7L}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_int_distribution<int> deg(2, 4), coef(1, static_cast<int>(p) - 1), ex(-2, 2), sgn(0, 1);
      const int d = deg(rng);
      std::string expr;
      for (int k = d; k >= 1; --k) {
        const int c = coef(rng) * (sgn(rng) ? 1 : -1);
        const int e = (k == d) ? ex(rng) : ex(rng) + 1;
        expr += (expr.empty() ? "" : " + ") + std::string("(") + std::to_string(c) + ")*p^(" + std::to_string(e) + ")*z^" +
                std::to_string(k);
      }
      const Poly P = Poly::parse(p, expr);
      std::uniform_int_distribution<int> cen(-30, 30), rv(-8, 8);
      const BerkPoint xi = ball(P, Rational(cen(rng), 1 + (trial % 2) * (p - 1)), Rational(rv(rng), 2));
      std::vector<FiberEntry> fib;
      try {
        fib = preimages(P, image_point(P, xi));
      } catch (const WildCase&) {
        continue;
      }
      CHECK(total_degree(fib) == d);
      bool hit = false;
      for (const auto& e : fib) {
        hit = hit || same_point(e.point, xi);
        CHECK(same_point(image_point(P, e.point), image_point(P, xi)));
      }
      CHECK(hit);
      for (const auto& e : fib) {
        if (same_point(e.point, xi)) CHECK(e.local_degree == local_degree(P, xi));
      }
    }
  }
}

TEST_CASE("iterated fibers and explicit iterates") {
  const Poly Z = monomial(2, 5);
  const auto f2 = iterate_fiber(Z, 2, gauss(Z));
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].local_degree == 4);
  CHECK(poly_to_string(iterate_poly(Z, 2).coeffs()) == poly_to_string(Poly::parse(5, "z^4").coeffs()));

  const Poly P = family(3, 5);
  CHECK(total_degree(iterate_fiber(P, 2, ball(P, 0, -1))) == 9);
  const Poly P2 = iterate_poly(P, 2);
  CHECK(P2.degree() == 9);
  CHECK(P2.eval(num(P, 1)).str() == "3283");  // P(1) = 7, P(7) = 3283
  CHECK(poly_to_string(iterate_poly(P, 1).coeffs()) == poly_to_string(P.coeffs()));
  CHECK_THROWS_AS(iterate_poly(P, 6), DegreeBoundExceeded);

  // The expanded iterate moves balls exactly like the composed images.
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> cen(-20, 20), rv(-6, 6);
  for (int i = 0; i < 20; ++i) {
    const BerkPoint xi = ball(P, cen(rng), Rational(rv(rng), 2));
    CHECK(same_point(image_point(P2, xi), image_point_iter(P, 2, xi)));
  }
}

TEST_CASE("base points") {
  for (int d : {2, 3}) {
    const Poly Z = monomial(d, 5);
    const BasePoint b = base_point(Z);
    CHECK(b.simple);
    CHECK(same_point(b.point, gauss(Z)));
    CHECK(is_simple(Z));
  }
  const Poly Q = quartic(5);
  CHECK(same_point(base_point(Q).point, ball(Q, 0, -1)));
  CHECK_FALSE(base_point(Q).simple);
  for (int d : {3, 4, 5, 6}) {
    const Poly P = family(d, 7);
    const BasePoint b = base_point(P);
    CHECK(same_point(b.point, ball(P, 0, -1)));
    CHECK_FALSE(b.simple);
    CHECK(strictly_below(b.point, image_point(P, b.point)));
    for (const auto& e : preimages(P, b.point)) CHECK(strictly_below(e.point, b.point));
  }
}

TEST_CASE("local degree is d above the base point") {
  for (const Poly& P : {quartic(5), family(3, 5), family(4, 5)}) {
    const BerkPoint xb = base_point(P).point;
    for (int t = 0; t <= 4; ++t) CHECK(local_degree(P, point_on_path(xb, Rational(t, 2))) == P.degree());
  }
}

TEST_CASE("critical points") {
  const Poly Q = quartic_corrected(5);
  const auto cq = critical_points(Q);
  int mult = 0;
  bool zero = false, one = false, inv_p = false;
  for (const auto& c : cq) {
    mult += c.multiplicity;
    if (c.value.is_zero()) CHECK(c.multiplicity == 1);
    zero = zero || c.value.is_zero();
    one = one || close_to(c.value, num(Q, 1));
    inv_p = inv_p || close_to(c.value, num(Q, 1, 5));
  }
  CHECK(mult == 3);
  CHECK(zero);
  CHECK(one);
  CHECK(inv_p);

  // Printed signs: a unit critical point near -1 and one near -1/p.
  const Poly R = quartic(5);
  bool unit = false, small = false;
  for (const auto& c : critical_points(R)) {
    if (c.value.is_zero()) continue;
    unit = unit || (c.value + num(R, 1)).valuation() >= ValQ(1);
    small = small || (c.value * num(R, 5) + num(R, 1)).valuation() >= ValQ(1);
  }
  CHECK(unit);
  CHECK(small);

  const Poly P = family(4, 5);
  const auto cp = critical_points(P);
  REQUIRE(cp.size() == 2);
  for (const auto& c : cp) {
    if (c.value.is_zero()) {
      CHECK(c.multiplicity == 2);
    } else {
      CHECK(close_to(c.value, num(P, 1, 5)));
    }
  }
  const auto cz = critical_points(monomial(3, 5));
  REQUIRE(cz.size() == 1);
  CHECK(cz[0].multiplicity == 2);

  CHECK(is_tame(Q));
  CHECK_FALSE(is_tame(family(5, 5)));
  CHECK(is_tame(family(5, 7)));
}

TEST_CASE("image order is preserved up the path to infinity") {
  const Poly P = quartic(7);
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> cen(-40, 40), rv(-4, 8);
  for (int i = 0; i < 30; ++i) {
    const BerkPoint xi = ball(P, Rational(cen(rng), 7), rv(rng));
    const BerkPoint up = point_on_path(xi, Rational(1, 2));
    CHECK(leq(image_point(P, xi), image_point(P, up)));
  }
}
