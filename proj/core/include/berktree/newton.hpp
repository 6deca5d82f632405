#pragma once

#include <vector>

#include "berktree/field.hpp"

namespace berktree {

// Polynomial with Scalar coefficients, lowest degree first.
using SPoly = std::vector<Scalar>;

namespace spoly {

// Index of the last coefficient that is not an exact zero, -1 if none.
int degree(const SPoly& f);
SPoly trimmed(SPoly f);
// All coefficients moved to their common stage.
SPoly coerced(const SPoly& f);
SPoly embed(const SPoly& f, const Stage* s);
Scalar eval(const SPoly& f, const Scalar& x);
SPoly add(const SPoly& a, const SPoly& b);
SPoly sub(const SPoly& a, const SPoly& b);
SPoly mul(const SPoly& a, const SPoly& b);
SPoly derivative(const SPoly& f);
// f(g(z)) by Horner's rule.
SPoly compose(const SPoly& f, const SPoly& g);
// Coefficients of f(a + z), by repeated synthetic division.
SPoly taylor_shift(const SPoly& f, const Scalar& a);
// Coefficients of f(c z).
SPoly scale_variable(const SPoly& f, const Scalar& c);

}  // namespace spoly

// A segment of the lower convex hull of {(k, v(a_k))}. `slope` is the common
// valuation of the `length` roots it accounts for; `start` is the smaller
// abscissa of the segment.
struct NPSegment {
  Rational slope;
  int length = 0;
  int start = 0;
};

struct NewtonPolygon {
  int zero_order = 0;
  // Ordered by increasing root valuation.
  std::vector<NPSegment> segments;
};

// Coefficients that are zero only to working precision are treated as
// absent; PrecisionExhausted is raised if one could alter the hull.
NewtonPolygon newton_polygon(const SPoly& f);

struct Root {
  Scalar value;
  int multiplicity = 1;
  // The cluster of `multiplicity` true roots lies in the closed disk of
  // radius-valuation `precision` about value.
  ValQ precision;
};

// All roots with multiplicities, extending the tower as needed.
std::vector<Root> split_roots(const SPoly& f);

// Newton refinement of an approximate simple root.
Scalar hensel_lift(const SPoly& f, const Scalar& r0);

}  // namespace berktree
