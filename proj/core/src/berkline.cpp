#include "berktree/berkline.hpp"

#include "berktree/errors.hpp"

namespace berktree {

namespace {

// v(a - b), capped at cap; an undecidable comparison throws.
ValQ vdiff(const Scalar& a, const Scalar& b, const ValQ& cap) {
  Scalar d = a - b;
  if (cap.is_inf()) {
    if (d.is_zero()) return ValQ::infinity();
    return d.valuation();
  }
  return ValQ(d.val_capped(cap.value()));
}

// Depth along the path to infinity: rv for balls, +inf for classical points.
ValQ depth(const BerkPoint& x) {
  if (x.is_finite()) return ValQ::infinity();
  return ValQ(x.rv());
}

}  // namespace

BerkPoint BerkPoint::finite(Scalar a) {
  BerkPoint x;
  x.kind_ = Kind::Finite;
  x.center_ = std::move(a);
  return x;
}

BerkPoint BerkPoint::ball(Scalar a, ValQ rv) {
  if (rv.is_inf()) return finite(std::move(a));
  BerkPoint x;
  x.kind_ = Kind::Ball;
  x.center_ = std::move(a);
  x.rv_ = rv.value();
  return x;
}

const Rational& BerkPoint::rv() const {
  if (kind_ != Kind::Ball) throw TypeIPoint("radius of a type I point");
  return rv_;
}

std::string BerkPoint::str() const {
  switch (kind_) {
    case Kind::Infinity:
      return "inf";
    case Kind::Finite:
      return "Finite(" + center_.str() + ")";
    case Kind::Ball:
      break;
  }
  // Any center represents the ball. Keep a small rational center as is,
  // otherwise print the truncated one.
  Scalar shown = center_;
  mpq_class q;
  if (!center_.to_rational(q)) {
    try {
      shown = center_.truncated(rv_);
    } catch (const PrecisionExhausted&) {
    }
  }
  return "Ball(" + shown.str() + ", " + rv_.str() + ")";
}

bool leq(const BerkPoint& x, const BerkPoint& y) {
  if (y.is_infinity()) return true;
  if (x.is_infinity()) return false;
  if (y.is_finite()) return x.is_finite() && (x.center() - y.center()).is_zero();
  if (x.is_ball() && x.rv() < y.rv()) return false;
  return vdiff(x.center(), y.center(), ValQ(y.rv())) >= ValQ(y.rv());
}

bool same_point(const BerkPoint& x, const BerkPoint& y) {
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case BerkPoint::Kind::Infinity:
      return true;
    case BerkPoint::Kind::Finite:
      return (x.center() - y.center()).is_zero();
    case BerkPoint::Kind::Ball:
      break;
  }
  return x.rv() == y.rv() && leq(x, y);
}

int compare_height(const BerkPoint& x, const BerkPoint& y) {
  if (x.is_infinity() || y.is_infinity()) {
    if (x.is_infinity() && y.is_infinity()) return 0;
    return x.is_infinity() ? 1 : -1;
  }
  ValQ dx = depth(x), dy = depth(y);
  if (dx == dy) return 0;
  return dx > dy ? -1 : 1;
}

BerkPoint join_inf(const BerkPoint& x, const BerkPoint& y) {
  if (x.is_infinity() || y.is_infinity()) return BerkPoint::infinity();
  ValQ cap = min(depth(x), depth(y));
  ValQ m = min(cap, vdiff(x.center(), y.center(), cap));
  if (m == depth(x)) return x;
  if (m == depth(y)) return y;
  return BerkPoint::ball(x.center(), m);
}

BerkPoint meet(const BerkPoint& x, const BerkPoint& y, const BerkPoint& base) {
  // The three pairwise joins lie on one chain; the median is the deepest.
  BerkPoint a = join_inf(x, y), b = join_inf(x, base), c = join_inf(y, base);
  BerkPoint best = a;
  if (compare_height(b, best) < 0) best = b;
  if (compare_height(c, best) < 0) best = c;
  return best;
}

Rational rho(const BerkPoint& x, const BerkPoint& y) {
  if (!x.is_ball() || !y.is_ball()) throw TypeIPoint("hyperbolic distance needs two type II points");
  BerkPoint j = join_inf(x, y);
  return x.rv() + y.rv() - Rational(2) * j.rv();
}

std::string Direction::str() const {
  if (to_infinity) return "dir(" + base.str() + " -> inf)";
  return "dir(" + base.str() + " -> " + witness.str() + ")";
}

Direction direction_to_infinity(const BerkPoint& xi) { return Direction{xi, true, BerkPoint::infinity()}; }

Direction direction_at(const BerkPoint& xi, const BerkPoint& target) {
  if (same_point(xi, target)) throw InputError("direction toward the base point itself");
  if (!leq(target, xi)) return direction_to_infinity(xi);
  return Direction{xi, false, target};
}

bool same_direction(const Direction& a, const Direction& b) {
  if (a.to_infinity != b.to_infinity) return false;
  if (a.to_infinity) return true;
  return compare_height(join_inf(a.witness, b.witness), a.base) < 0;
}

bool in_direction(const Direction& d, const BerkPoint& eta) {
  if (d.to_infinity) return !leq(eta, d.base);
  return compare_height(join_inf(eta, d.witness), d.base) < 0;
}

BerkPoint point_on_path(const BerkPoint& xi, const Rational& t) {
  if (!xi.is_ball()) throw TypeIPoint("path parameterization from a type I point");
  return BerkPoint::ball(xi.center(), xi.rv() - t);
}

BerkPoint step_into(const Direction& d, const Rational& t) {
  if (d.to_infinity) return point_on_path(d.base, t);
  const Rational& r = d.base.rv();
  return BerkPoint::ball(d.witness.center(), r + t);
}

BerkPoint point_on_segment(const BerkPoint& a, const BerkPoint& b, const Rational& t) {
  BerkPoint J = join_inf(a, b);
  Rational up = rho(a, J);
  if (t <= up) return point_on_path(a, t);
  return point_on_path(b, rho(a, b) - t);
}

Rational distance_to_segment(const BerkPoint& x, const BerkPoint& a, const BerkPoint& b) {
  return rho(x, meet(a, b, x));
}

BerkPoint with_simple_center(const BerkPoint& x) {
  if (!x.is_ball()) return x;
  mpq_class q;
  if (x.center().to_rational(q) && x.center().stage() == x.center().stage()->tower->base()) return x;
  try {
    if (!x.center().truncated(x.rv()).to_rational(q)) return x;
  } catch (const PrecisionExhausted&) {
    return x;
  }
  return BerkPoint::ball(Scalar::from_rational(x.center().stage()->tower->base(), q), x.rv());
}

}  // namespace berktree
