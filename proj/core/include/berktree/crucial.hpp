#pragma once

#include <vector>

#include "berktree/tree.hpp"

namespace berktree {

// Differences Crucial(xi) - Crucial(xi0) for the iterate P^j, with the
// fiber of xi0 under P^j computed once.
class CrucialEvaluator {
 public:
  CrucialEvaluator(Poly P, int j, BerkPoint xi0);

  Rational diff(const BerkPoint& xi) const;
  const BerkPoint& base() const { return xi0_; }
  const std::vector<FiberEntry>& fiber() const { return fiber_; }
  long D() const { return D_; }

 private:
  Poly P_;
  int j_;
  BerkPoint xi0_;
  long D_;
  std::vector<FiberEntry> fiber_;
};

Rational crucial_diff(const Poly& P, int j, const BerkPoint& xi, const BerkPoint& xi0);
// Normalized so that the Gauss point has value 0.
Rational crucial(const Poly& P, int j, const BerkPoint& xi);

// One-sided derivative of Crucial at xi into d, from probes at distance h
// and h/2. The step is quartered on disagreement, at most 4 times.
Rational crucial_slope(const Poly& P, int j, const BerkPoint& xi, const Direction& d, Rational h = Rational(1));

// Closed-form weights on the nodes of t.
TreeMeasure crucial_curvature(const Poly& P, int j, const DynTree& t);
// Independent computation from the Laplacian of rho(u, P^j(u) ^ u) plus the
// retracted pullback of a Dirac mass at xi0 (the top of t by default).
TreeMeasure crucial_curvature_oracle(const Poly& P, int j, const DynTree& t);
TreeMeasure crucial_curvature_oracle(const Poly& P, int j, const DynTree& t, const BerkPoint& xi0);

// Mass of the component U(d), and of the closed ball below xi.
Rational ball_mass(const DynTree& t, const TreeMeasure& nu, const Direction& d);
Rational closed_ball_mass(const DynTree& t, const TreeMeasure& nu, const BerkPoint& xi);

// Leaves of t where P^j is injective and moves the leaf strictly up.
std::vector<int> z_set(const Poly& P, int j, const DynTree& t);

struct BarycenterResult {
  bool segment = false;
  int a = -1;  // the singleton, or the deeper end of the segment
  int b = -1;  // the upper end of the segment
};
BarycenterResult barycenter(const DynTree& t, const TreeMeasure& nu);

struct VariationParts {
  TreeMeasure positive;
  TreeMeasure negative;  // as nonnegative masses
};
VariationParts total_variation_parts(const TreeMeasure& nu);
TreeMeasure averaged_total_variation(const TreeMeasure& nu);

}  // namespace berktree
