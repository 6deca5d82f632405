#pragma once

#include <string>

#include "berktree/field.hpp"

namespace berktree {

// A point of the Berkovich line: a classical point, infinity, or the disk
// B(a, p^-rv). Distances and radius-valuations are in log-p units.
class BerkPoint {
 public:
  enum class Kind { Finite, Infinity, Ball };

  BerkPoint() : kind_(Kind::Infinity) {}
  static BerkPoint infinity() { return BerkPoint(); }
  static BerkPoint finite(Scalar a);
  // rv = +inf gives the classical point a.
  static BerkPoint ball(Scalar a, ValQ rv);
  static BerkPoint ball(Scalar a, Rational rv) { return ball(std::move(a), ValQ(rv)); }

  Kind kind() const { return kind_; }
  bool is_ball() const { return kind_ == Kind::Ball; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  const Scalar& center() const { return center_; }
  // Radius-valuation of a Ball; throws TypeIPoint otherwise.
  const Rational& rv() const;

  std::string str() const;

 private:
  Kind kind_;
  Scalar center_;
  Rational rv_;
};

// Partial order with infinity on top.
bool leq(const BerkPoint& x, const BerkPoint& y);
bool same_point(const BerkPoint& x, const BerkPoint& y);
inline bool strictly_below(const BerkPoint& x, const BerkPoint& y) { return leq(x, y) && !same_point(x, y); }

// Compares positions along the path to infinity of two comparable points:
// negative when x is deeper (further from infinity) than y.
int compare_height(const BerkPoint& x, const BerkPoint& y);

BerkPoint join_inf(const BerkPoint& x, const BerkPoint& y);
// Median of x, y and base: the point where the paths from base to x and
// from base to y part.
BerkPoint meet(const BerkPoint& x, const BerkPoint& y, const BerkPoint& base);
// Hyperbolic distance; both points must be Balls.
Rational rho(const BerkPoint& x, const BerkPoint& y);

struct Direction {
  BerkPoint base;
  bool to_infinity = true;
  BerkPoint witness;  // a point of the direction when !to_infinity

  std::string str() const;
};

Direction direction_at(const BerkPoint& xi, const BerkPoint& target);
Direction direction_to_infinity(const BerkPoint& xi);
bool same_direction(const Direction& a, const Direction& b);
// Membership of eta in the component U(d) of P^1 minus {d.base}.
bool in_direction(const Direction& d, const BerkPoint& eta);

// Ball(a, rv - t): the point at distance t from xi toward infinity.
BerkPoint point_on_path(const BerkPoint& xi, const Rational& t);
// The point at distance t from xi into direction d.
BerkPoint step_into(const Direction& d, const Rational& t);

// The point of the segment [a, b] at distance t from a (Balls only).
BerkPoint point_on_segment(const BerkPoint& a, const BerkPoint& b, const Rational& t);
// rho from x to the segment [a, b].
Rational distance_to_segment(const BerkPoint& x, const BerkPoint& a, const BerkPoint& b);

// The same point with a rational center in the base stage when the ball
// holds one; otherwise x itself.
BerkPoint with_simple_center(const BerkPoint& x);

}  // namespace berktree
