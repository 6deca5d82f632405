#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "berktree/errors.hpp"
#include "berktree/newton.hpp"
#include "berktree/parse.hpp"

using namespace berktree;

namespace {

struct Fixture {
  explicit Fixture(long p, int prec = 64) : T(std::make_shared<FieldTower>(p, prec)) {}
  Scalar q(std::int64_t n, std::int64_t d = 1) const { return Scalar::from_rational(T->base(), Rational(n, d)); }
  SPoly poly(const char* s) const { return parse_poly(*T, s); }
  std::shared_ptr<FieldTower> T;
};

std::map<Rational, int> root_valuations(const NewtonPolygon& np) {
  std::map<Rational, int> out;
  for (const auto& s : np.segments) out[s.slope] += s.length;
  return out;
}

}  // namespace

TEST_CASE("valuations shift by one under multiplication by p") {
  Fixture F(5);
  for (int x : {1, 2, 3, 4, 7, 13}) {
    CHECK(F.q(5 * x).valuation() == F.q(x).valuation() + ValQ(1));
  }
  CHECK((F.q(2) + F.q(3)).valuation() == ValQ(1));
  const Scalar i = F.q(5).inv();
  CHECK(i.valuation() == ValQ(-1));
  CHECK((i * F.q(5)).residue() == ResidueField::Elem{1});
  CHECK(Scalar::zero(F.T->base()).valuation().is_inf());
}

TEST_CASE("residue images") {
  Fixture F(5);
  CHECK(F.q(5).residue() == ResidueField::Elem{0});
  CHECK(F.q(7).residue() == ResidueField::Elem{2});
  CHECK(F.q(-1, 3).residue() == ResidueField::Elem{3});  // 3 * 3 = -1 mod 5
  CHECK_THROWS_AS(F.q(1, 5).residue(), NegativeValuation);
  CHECK_THROWS_AS(F.q(1) / Scalar::zero(F.T->base()), DivisionByZero);
}

TEST_CASE("ultrametric inequality on random rationals") {
  Fixture F(7);
  std::mt19937 rng(17);
  std::uniform_int_distribution<std::int64_t> n(-2401, 2401), d(1, 343);
  for (int i = 0; i < 1000; ++i) {
    const Scalar a = F.q(n(rng), d(rng)), b = F.q(n(rng), d(rng));
    const Scalar s = a + b;
    if (a.is_zero() || b.is_zero() || s.is_exact_zero()) continue;
    CHECK(s.valuation() >= min(a.valuation(), b.valuation()));
    if (a.valuation() != b.valuation()) CHECK(s.valuation() == min(a.valuation(), b.valuation()));
  }
}

TEST_CASE("ramified stage holds a square root of p") {
  Fixture F(5);
  const Stage* s = F.T->ensure(F.T->base(), 2, 1);
  CHECK(s->E == 2);
  const Scalar pi = Scalar::pi_power(s, 1);
  CHECK(pi.valuation() == ValQ(Rational(1, 2)));
  CHECK((pi * pi - F.q(5)).is_zero());
  CHECK_THROWS_AS(F.T->ensure(F.T->base(), 5, 1), WildCase);
}

TEST_CASE("residue field arithmetic") {
  const ResidueField K(3, find_irreducible(3, 2));
  CHECK(K.size() == 9);
  for (std::uint64_t i = 1; i < K.size(); ++i) {
    const auto a = K.from_index(i);
    CHECK(K.mul(a, K.inv(a)) == K.one());
    CHECK(K.pow(a, 8) == K.one());
  }
  // X^2 + 1 has no root over F_3 and two over F_9.
  const ResidueField F3(3, find_irreducible(3, 1));
  CHECK(rpoly::roots(F3, {F3.one(), F3.zero(), F3.one()}).empty());
  CHECK(rpoly::roots(K, {K.one(), K.zero(), K.one()}).size() == 2);
}

TEST_CASE("Newton polygons") {
  Fixture F(5);
  const NewtonPolygon mono = newton_polygon(F.poly("z^3"));
  CHECK(mono.zero_order == 3);
  CHECK(mono.segments.empty());

  // 10 z^3 - 3 z^2 - 1/5: points (0,-1), (2,0), (3,1).
  const NewtonPolygon np = newton_polygon(F.poly("10*z^3 - 3*z^2 - 1/5"));
  REQUIRE(np.segments.size() == 2);
  CHECK(np.segments[0].slope == Rational(-1));
  CHECK(np.segments[0].length == 1);
  CHECK(np.segments[1].slope == Rational(-1, 2));
  CHECK(np.segments[1].length == 2);

  const NewtonPolygon sq = newton_polygon(F.poly("z^2 - 5"));
  REQUIRE(sq.segments.size() == 1);
  CHECK(sq.segments[0].slope == Rational(1, 2));
  CHECK(sq.segments[0].length == 2);
}

TEST_CASE("split_roots") {
  Fixture F(5);
  SUBCASE("z^2 - 1") {
    const auto r = split_roots(F.poly("z^2 - 1"));
    REQUIRE(r.size() == 2);
    std::vector<std::string> v{r[0].value.str(), r[1].value.str()};
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<std::string>{"-1", "1"});
    CHECK(r[0].multiplicity == 1);
  }
  SUBCASE("10 z^3 - 3 z^2") {
    auto r = split_roots(F.poly("10*z^3 - 3*z^2"));
    REQUIRE(r.size() == 2);
    std::sort(r.begin(), r.end(), [](const Root& a, const Root& b) { return a.multiplicity > b.multiplicity; });
    CHECK(r[0].value.is_zero());
    CHECK(r[0].multiplicity == 2);
    CHECK(r[1].value.str() == "3/10");
    CHECK(r[1].multiplicity == 1);
  }
  SUBCASE("z^2 - 5 needs a ramified stage") {
    const auto r = split_roots(F.poly("z^2 - 5"));
    REQUIRE(r.size() == 2);
    for (const auto& x : r) {
      CHECK(x.value.valuation() == ValQ(Rational(1, 2)));
      CHECK(x.value.stage()->E % 2 == 0);
    }
    CHECK(!(r[0].value - r[1].value).is_zero());
  }
}

TEST_CASE("root valuations agree with the Newton polygon") {
  std::mt19937 rng(2024);
  int checked = 0;
  for (long p : {5L, 7L, 11L}) {
    for (int trial = 0; trial < 30; ++trial) {
      Fixture F(p);
      std::uniform_int_distribution<int> deg(1, 6), coef(-60, 60);
      const int d = deg(rng);
      SPoly f;
      for (int k = 0; k <= d; ++k) f.push_back(F.q(coef(rng)));
      if (f.back().is_zero()) f.back() = F.q(1);
      if (f.front().is_zero()) f.front() = F.q(p);
      std::vector<Root> roots;
      try {
        roots = split_roots(f);
      } catch (const WildCase&) {
        continue;  // ramification divisible by p
      }
      int total = 0;
      std::map<Rational, int> seen;
      for (const auto& r : roots) {
        total += r.multiplicity;
        seen[r.value.valuation().value()] += r.multiplicity;
        const NewtonPolygon local = newton_polygon(spoly::taylor_shift(spoly::embed(f, r.value.stage()), r.value));
        CHECK(local.zero_order >= r.multiplicity);
      }
      CHECK(total == d);
      CHECK(seen == root_valuations(newton_polygon(f)));
      ++checked;
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("Hensel lifting") {
  Fixture F(5);
  CHECK(hensel_lift(F.poly("z^2 - 4"), F.q(2)).str() == "2");
  const Scalar i = hensel_lift(F.poly("z^2 + 1"), F.q(2));
  CHECK(i.residue() == ResidueField::Elem{2});
  CHECK((i * i + F.q(1)).valuation_lower_bound() >= ValQ(60));
  CHECK_THROWS_AS(hensel_lift(F.poly("z^2 - 5"), F.q(1)), HenselPreconditionFailed);
}

TEST_CASE("literal parsing") {
  Fixture F(5);
  CHECK(parse_scalar(*F.T, "-3/10").str() == "-3/10");
  CHECK(parse_scalar(*F.T, "p^(1/2)*3").valuation() == ValQ(Rational(1, 2)));
  CHECK(parse_scalar(*F.T, "p^-2*(1/3)").valuation() == ValQ(-2));
  CHECK_THROWS_AS(parse_scalar(*F.T, "3.5"), InputError);
  CHECK_THROWS_AS(parse_poly(*F.T, "z^2 +"), InputError);
  CHECK_THROWS_AS(parse_poly(*F.T, "1/z"), InputError);
  CHECK(poly_to_string(F.poly("(z+1)^2")) == poly_to_string(F.poly("z^2 + 2*z + 1")));
}
