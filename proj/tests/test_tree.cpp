#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace bt;

namespace {

int node_of(const DynTree& t, const BerkPoint& x) {
  const int id = t.find(x);
  REQUIRE(id >= 0);
  return id;
}

}  // namespace

TEST_CASE("simple case is the segment from the Gauss point to infinity") {
  for (int d : {2, 3}) {
    const Poly Z = monomial(d, 5);
    for (int n : {1, 3}) {
      const DynTree t = build_tree(Z, n);
      CHECK(t.simple);
      CHECK(t.size() == 2);
      CHECK(t.vertex_set().size() == 2);
      CHECK(same_point(t.point(t.top()), gauss(Z)));
    }
  }
}

TEST_CASE("first tree of the cubic family") {
  const Poly P = family(3, 5);
  const DynTree t = build_tree(P, 1);
  CHECK_FALSE(t.simple);
  CHECK(t.vertex_set().size() == 4);
  REQUIRE(t.leaves().size() == 2);
  const int xp = node_of(t, ball(P, 0, Rational(-1, 2)));
  const int xb = node_of(t, ball(P, 0, -1));
  CHECK(t.node(xp).fiber_degree == 2);
  CHECK(t.valency(xb) == 3);
  for (int leaf : t.leaves()) {
    if (leaf != xp) CHECK(t.node(leaf).fiber_degree == 1);
  }

  const TreeMeasure nu = valency_measure(t);
  CHECK(total_mass(nu) == Rational(1));
  CHECK(nu.at(xb) == Rational(-1, 2));
  CHECK(nu.at(DynTree::kRoot) == Rational(1, 2));
  for (int leaf : t.leaves()) CHECK(nu.at(leaf) == Rational(1, 2));
}

TEST_CASE("first tree of the quartic") {
  for (long p : {5L, 7L}) {
    const Poly P = quartic(p);
    const DynTree t = build_tree(P, 1);
    CHECK(t.leaves().size() == 3);
    const auto V = t.vertex_set();
    CHECK(V.size() == 6);
    const std::set<int> vs(V.begin(), V.end());
    CHECK(vs.count(node_of(t, gauss(P))) == 1);
    CHECK(vs.count(node_of(t, ball(P, 0, -1))) == 1);
    CHECK(vs.count(DynTree::kRoot) == 1);
    long mass = 0;
    for (int leaf : t.leaves()) mass += t.node(leaf).fiber_degree;
    CHECK(mass == 4);
  }
}

TEST_CASE("retraction") {
  const Poly P = family(3, 5);
  TreeFamily fam(P);
  const DynTree& t1 = fam.tree(1);
  const DynTree& t2 = fam.tree(2);
  for (int id = 0; id < static_cast<int>(t1.size()); ++id) CHECK(same_point(retraction(t1, t1.point(id)), t1.point(id)));

  const BerkPoint xp = ball(P, 0, Rational(-1, 2));
  int below = 0;
  for (int leaf : t2.leaves()) {
    const BerkPoint r = retraction(t1, t2.point(leaf));
    CHECK(same_point(retraction(t1, r), r));
    if (strictly_below(t2.point(leaf), xp)) {
      CHECK(same_point(r, xp));
      ++below;
    }
  }
  CHECK(below > 0);

  DynTree top;
  top.insert(ball(P, 0, -1));
  for (int leaf : t2.leaves()) CHECK(same_point(retraction(top, t2.point(leaf)), ball(P, 0, -1)));
  CHECK(same_point(retraction(top, ball(P, 0, -4)), ball(P, 0, -4)));
}

TEST_CASE("valency measure of a star") {
  const Poly P = family(3, 5);
  DynTree t;
  for (int r = 0; r < 4; ++r) t.insert(ball(P, r, 1));
  const int g = node_of(t, gauss(P));
  const TreeMeasure nu = valency_measure(t);
  CHECK(t.valency(g) == 5);
  CHECK(nu.at(g) == Rational(-3, 2));
  CHECK(total_mass(nu) == Rational(1));
}

TEST_CASE("laplacians") {
  const Poly P = family(3, 5);
  DynTree t;
  const int lo = t.insert(ball(P, 0, 1));
  const int hi = t.insert(ball(P, 0, -1));
  const int g = t.insert(gauss(P));

  PAFunction c{{{lo, 7}, {hi, 7}, {g, 7}, {DynTree::kRoot, 7}}, 0};
  CHECK(pruned(laplacian(t, c)).empty());

  // rho(., xi_g), held constant above Ball(0, -1).
  PAFunction f{{{lo, 1}, {hi, 1}, {g, 0}, {DynTree::kRoot, 1}}, 0};
  const TreeMeasure m = pruned(laplacian(t, f));
  CHECK(m.at(g) == Rational(2));
  CHECK(m.at(lo) == Rational(-1));
  CHECK(m.at(hi) == Rational(-1));
  CHECK(total_mass(m) == Rational(0));

  // Distance to one leaf of a Y-shaped tree, growing toward infinity.
  DynTree y;
  const int a = y.insert(ball(P, 0, 1));
  const int b = y.insert(ball(P, 1, 1));
  const int j = node_of(y, gauss(P));
  PAFunction dist{{{a, 0}, {b, 2}, {j, 1}, {DynTree::kRoot, 0}}, 1};
  const TreeMeasure my = laplacian(y, dist);
  CHECK(my.at(a) == Rational(1));
  CHECK(my.at(b) == Rational(-1));
  CHECK(my.at(j) == Rational(1));
  CHECK(my.at(DynTree::kRoot) == Rational(-1));
  CHECK(total_mass(my) == Rational(0));
}

TEST_CASE("trees grow and map edges onto edges") {
  for (const Poly& P : {quartic(5), family(3, 5)}) {
    TreeFamily fam(P);
    for (int n = 1; n <= 3; ++n) {
      const DynTree& lo = fam.tree(n - 1);
      const DynTree& hi = fam.tree(n);
      CHECK(hi.size() > lo.size());
      for (int id = 0; id < static_cast<int>(lo.size()); ++id) CHECK(hi.find(lo.point(id)) >= 0);
      for (int leaf : hi.leaves()) CHECK_FALSE(lo.contains(hi.point(leaf)));

      for (int id = 1; id < static_cast<int>(hi.size()); ++id) {
        const TreeNode& node = hi.node(id);
        if (node.parent == DynTree::kRoot) continue;
        const BerkPoint a = image_point(P, node.point), b = image_point(P, hi.point(node.parent));
        REQUIRE(leq(a, b));
        CHECK(lo.contains(a));
        CHECK(lo.contains(b));
        for (int v : lo.vertex_set()) CHECK_FALSE((strictly_below(a, lo.point(v)) && strictly_below(lo.point(v), b)));
        const BerkPoint mid = image_point(P, point_on_segment(node.point, hi.point(node.parent), *node.edge_length / 2));
        CHECK(leq(a, mid));
        CHECK(leq(mid, b));
      }
    }
  }
}

TEST_CASE("pullbacks of the base point weigh the balls below each leaf") {
  const Poly P = quartic(5);
  TreeFamily fam(P);
  for (int n = 0; n <= 2; ++n) {
    const auto fib = iterate_fiber(P, n + 1, fam.base().point);
    for (const auto& e : fam.fiber(n)) {
      long mass = 0;
      for (const auto& f : fib) {
        if (leq(f.point, e.point)) mass += f.local_degree;
      }
      CHECK(mass == local_degree_iter(P, n + 1, e.point));
    }
  }
}

TEST_CASE("DOT export lists every node") {
  const Poly P = quartic(5);
  const std::string dot = to_dot(build_tree(P, 1));
  CHECK(dot.rfind("graph gamma {", 0) == 0);
  std::size_t edges = 0;
  for (std::size_t pos = dot.find(" -- "); pos != std::string::npos; pos = dot.find(" -- ", pos + 1)) ++edges;
  CHECK(edges == 5);
}
