#include <doctest.h>

#include "berktree/errors.hpp"
#include "support.hpp"

using namespace bt;

namespace {

const Hole* find_hole(const DepthReport& r, bool to_inf, long depth) {
  for (const auto& h : r.holes) {
    if (h.to_infinity == to_inf && h.depth == depth) return &h;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("ordRes of z^2") {
  const Poly Z = monomial(2, 5);
  CHECK(ord_res_at(Z, 1, gauss(Z)) == Rational(0));
  for (Rational v : {Rational(-2), Rational(-1, 2), Rational(1, 3), Rational(3)}) {
    CHECK(ord_res_at(Z, 1, ball(Z, 0, v)) == 2 * abs(v));
    CHECK(ord_res_explicit(Z, 1, ball(Z, 0, v)) == 2 * abs(v));
  }
}

TEST_CASE("ordRes of the cubic family is 3 exactly on [xi_g, xi_B]") {
  const Poly P = family(3, 5);
  for (Rational v : {Rational(-1), Rational(-1, 2), Rational(0)}) {
    CHECK(ord_res_at(P, 1, ball(P, 0, v)) == Rational(3));
    CHECK(ord_res_explicit(P, 1, ball(P, 0, v)) == Rational(3));
  }
  for (Rational v : {Rational(1, 2), Rational(-3, 2)}) CHECK(ord_res_at(P, 1, ball(P, 0, v)) > Rational(3));
}

TEST_CASE("identity between ordRes and Crucial") {
  const Poly Z = monomial(2, 5);
  IdentityCheck a = identity_check(Z, 1, gauss(Z));
  CHECK(a.equal);
  CHECK(a.lhs == Rational(0));
  IdentityCheck b = identity_check(Z, 1, ball(Z, 0, Rational(1, 2)));
  CHECK(b.equal);
  CHECK(b.lhs == Rational(1));
  CHECK(b.rhs == Rational(1));

  const Poly P = family(3, 5);
  IdentityCheck c = identity_check(P, 1, ball(P, 0, -1));
  CHECK(c.equal);
  CHECK(c.lhs == Rational(3));
  REQUIRE(c.explicit_lhs);
  CHECK(*c.explicit_lhs == Rational(3));
}

TEST_CASE("ordRes is convex along segments") {
  const Poly P = quartic(5);
  for (int j : {1, 2}) {
    for (const auto& [c, top] : {std::pair{Rational(0), Rational(-2)}, std::pair{Rational(1), Rational(-1)},
                                 std::pair{Rational(1, 5), Rational(-3, 2)}}) {
      std::vector<Rational> vals;
      for (int k = 0; k <= 4; ++k) vals.push_back(ord_res_at(P, j, ball(P, c, top + Rational(k, 2))));
      for (int k = 1; k + 1 < 5; ++k) CHECK(2 * vals[k] <= vals[k - 1] + vals[k + 1]);
    }
  }
}

TEST_CASE("depth reports") {
  SUBCASE("z^d at the Gauss point") {
    const Poly Z = monomial(3, 5);
    const DepthReport r = depth_report(Z, 1, gauss(Z));
    for (const auto& h : r.holes) CHECK(h.depth == 0);
    CHECK(is_semistable(r));
    CHECK(is_stable(r));
  }
  SUBCASE("second iterate of the cubic family at Ball(0, -1/2)") {
    const Poly P = family(3, 5);
    const DepthReport r = depth_report(P, 2, ball(P, 0, Rational(-1, 2)));
    CHECK(r.D == 9);
    CHECK(r.local_degree == 6);
    const Hole* inf = find_hole(r, true, 3);
    REQUIRE(inf);
    // Directions that P^2 sends back toward the point carry depth s + m with
    // m summing to the local degree: here 4 + 1 + 1.
    const Hole* four = find_hole(r, false, 4);
    REQUIRE(four);
    CHECK(four->count == 1);
    const Hole* one = find_hole(r, false, 1);
    REQUIRE(one);
    CHECK(one->count == 2);
    CHECK(r.semistable);
    CHECK(r.stable);
    CHECK(depth_at(P, 2, ball(P, 0, Rational(-1, 2)), direction_at(ball(P, 0, Rational(-1, 2)), ball(P, 0, 4))) == 4);
  }
  SUBCASE("an attracting fixed point makes the balls around it unstable") {
    const Poly P = Poly::parse(5, "z^2 + 5*z");
    const DepthReport r = depth_report(P, 1, ball(P, 0, 1));
    const Hole* h = find_hole(r, true, 2);
    REQUIRE(h);
    CHECK_FALSE(r.semistable);
  }
  SUBCASE("thresholds") {
    DepthReport r;
    r.D = 4;
    r.holes = {Hole{true, 3, 1, false}};
    CHECK_FALSE(is_semistable(r));
    r.holes = {Hole{true, 0, 1, true}};
    CHECK(is_semistable(r));
    CHECK(is_stable(r));
    r.D = 9;
    r.holes = {Hole{true, 3, 1, true}, Hole{false, 4, 1, false}};
    CHECK(is_semistable(r));
    CHECK(is_stable(r));
    r.holes = {Hole{true, 4, 1, true}};
    CHECK(is_semistable(r));   // 8 < 9
    CHECK_FALSE(is_stable(r));  // 8 >= 8
    r.holes = {Hole{false, 5, 1, false}};
    CHECK(is_semistable(r));   // 10 <= 10
    CHECK_FALSE(is_stable(r));  // 10 > 9
  }
}

TEST_CASE("minimal resultant loci") {
  SUBCASE("simple case") {
    for (int d : {2, 3}) {
      const Poly Z = monomial(d, 5);
      for (int j : {1, 2, 3}) {
        const MinResLocResult r = min_res_loc(Z, j);
        CHECK_FALSE(r.segment);
        CHECK(same_point(r.a, gauss(Z)));
        CHECK(r.ord_res == Rational(0));
      }
    }
  }
  SUBCASE("cubic family") {
    const Poly P = family(3, 5);
    TreeFamily fam(P);
    const MinResLocResult r1 = min_res_loc(fam, 1, 4);
    REQUIRE(r1.segment);
    CHECK(same_point(r1.a, gauss(P)));
    CHECK(same_point(r1.b, ball(P, 0, -1)));
    CHECK(r1.ord_res == Rational(3));
    for (int j : {2, 3}) {
      const MinResLocResult r = min_res_loc(fam, j, 4);
      CHECK_FALSE(r.segment);
      CHECK(same_point(r.a, ball(P, 0, Rational(-1, 2))));
      CHECK(r.method == "stabilized");
    }
    CHECK(independence_check(fam, 3, 4));
  }
  SUBCASE("quartic family") {
    const Poly P = family(4, 5);
    TreeFamily fam(P);
    for (int j : {1, 2}) {
      const MinResLocResult r = min_res_loc(fam, j, 4);
      CHECK_FALSE(r.segment);
      CHECK(same_point(r.a, gauss(P)));
    }
    const MinResLocResult r3 = min_res_loc(fam, 3, 4);
    CHECK_FALSE(r3.segment);
    CHECK(same_point(r3.a, ball(P, 0, Rational(-1, 9))));
    CHECK(r3.ord_res == Rational(11392, 9));
  }
}

TEST_CASE("Ball(0, -1/9) beats Ball(0, -1/3) for the cube of 15 z^4 - 4 z^3") {
  // Both values come from the expanded degree-64 iterate and a Sylvester determinant.
  const Poly P = Poly::parse(5, "3*p*z^4 - 4*z^3", 600);
  const Rational at_ninth = ord_res_explicit(P, 3, ball(P, 0, Rational(-1, 9)));
  const Rational at_third = ord_res_explicit(P, 3, ball(P, 0, Rational(-1, 3)));
  CHECK(at_ninth == Rational(11392, 9));
  CHECK(at_third == Rational(4096, 3));
  CHECK(at_ninth < at_third);
  CHECK(at_ninth == ord_res_at(P, 3, ball(P, 0, Rational(-1, 9))));
}

TEST_CASE("loci satisfy the degree bounds of the (d-1)-st iterate") {
  const Poly P = family(3, 5);
  const int j = 2;
  const long D = iterate_degree(P, j);
  const MinResLocResult r = min_res_loc(P, j, 4);
  REQUIRE_FALSE(r.segment);
  CHECK(2 * local_degree_iter(P, j, r.a) >= D + 1);
  CHECK(leq(ball(P, 0, -1), image_point_iter(P, j - 1, r.a)));
  TreeFamily fam(P);
  const DynTree& t = fam.tree(3);
  const int id = t.find(r.a);
  REQUIRE(id >= 0);
  for (const auto& d : t.directions(id)) {
    if (d.to_infinity) continue;
    const BerkPoint step = step_into(d, Rational(1, 64));
    CHECK(2 * local_degree_iter(P, j, step) <= D + 1);
  }
}

TEST_CASE("segment loci contain every barycenter seen") {
  const Poly P = family(3, 5);
  const MinResLocResult r = min_res_loc(P, 1, 4);
  REQUIRE(r.segment);
  for (const auto& h : r.history) {
    CHECK(distance_to_segment(h.a, r.a, r.b) == Rational(0));
    CHECK(distance_to_segment(h.b, r.a, r.b) == Rational(0));
  }
}

TEST_CASE("equidistribution tables") {
  for (int d : {2, 3}) {
    const Poly Z = monomial(d, 5);
    TreeFamily fam(Z);
    const EquidistReport r = equidist_report(fam, 1, 4, 1);
    for (const auto& m : r.max_discrepancy) CHECK(m == Rational(0));
  }
  const Poly P = family(3, 5);
  TreeFamily fam(P);
  const EquidistReport r = equidist_report(fam, 1, 5, 1);
  CHECK(r.tame);
  for (const auto& row : r.rows) {
    if (same_point(row.leaf, ball(P, 0, Rational(-1, 2)))) {
      CHECK(row.target == Rational(2, 3));
    } else {
      CHECK(row.target == Rational(1, 3));
    }
  }
  for (std::size_t i = 1; i + 1 < r.max_discrepancy.size(); ++i) CHECK(r.max_discrepancy[i + 1] < r.max_discrepancy[i]);
}

TEST_CASE("refusals") {
  const Poly P = family(3, 5);
  CHECK_THROWS_AS(iterate_degree(P, 30), DegreeBoundExceeded);
  CHECK_THROWS_AS(ord_res_explicit(P, 5, gauss(P)), DegreeBoundExceeded);
}
