#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "berktree/berkline.hpp"
#include "berktree/newton.hpp"

namespace berktree {

// A polynomial of degree >= 2 over a field tower shared by everything
// derived from it.
class Poly {
 public:
  Poly(std::shared_ptr<FieldTower> tower, SPoly coeffs);
  static Poly parse(long p, std::string_view expr, int precision = 64);

  long p() const { return tower_->p(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const SPoly& coeffs() const { return coeffs_; }
  const Scalar& leading() const { return coeffs_.back(); }
  FieldTower& tower() const { return *tower_; }
  const std::shared_ptr<FieldTower>& tower_ptr() const { return tower_; }

  Scalar eval(const Scalar& x) const { return spoly::eval(coeffs_, x); }
  // c_k = coefficient of z^k in P(a + z).
  SPoly taylor(const Scalar& a) const { return spoly::taylor_shift(coeffs_, a); }
  std::string str() const;

 private:
  std::shared_ptr<FieldTower> tower_;
  SPoly coeffs_;
};

struct FiberEntry {
  BerkPoint point;
  int local_degree = 1;
};

BerkPoint image_point(const Poly& P, const BerkPoint& xi);
BerkPoint image_point_iter(const Poly& P, int j, const BerkPoint& xi);
int local_degree(const Poly& P, const BerkPoint& xi);
// deg of P^j at xi: product of local degrees along the orbit.
long local_degree_iter(const Poly& P, int j, const BerkPoint& xi);

int directional_multiplicity(const Poly& P, const BerkPoint& xi, const Direction& d);
int surplus_multiplicity(const Poly& P, const BerkPoint& xi, const Direction& d);

std::vector<FiberEntry> preimages(const Poly& P, const BerkPoint& xi);
std::vector<FiberEntry> iterate_fiber(const Poly& P, int j, const BerkPoint& xi);

// Explicit coefficients of P^j; throws DegreeBoundExceeded past the bound.
Poly iterate_poly(const Poly& P, int j, long degree_bound = 256);

struct BasePoint {
  BerkPoint point;
  bool simple = false;
};
BasePoint base_point(const Poly& P);

// Finite critical points (roots of P'); infinity is always critical.
std::vector<Root> critical_points(const Poly& P);
bool is_tame(const Poly& P);
bool is_simple(const Poly& P);

}  // namespace berktree
