#pragma once

#include <optional>
#include <string>
#include <vector>

#include "berktree/crucial.hpp"

namespace berktree {

// d^j, throwing DegreeBoundExceeded past 2^40.
long iterate_degree(const Poly& P, int j);

// ordRes of P^j at a Ball, from the image radius and the orbit of the
// center; P^j is never expanded.
Rational ord_res_at(const Poly& P, int j, const BerkPoint& xi);
// Same quantity from the expanded and conjugated P^j, with the resultant
// of the lift taken as a Sylvester determinant. Intended for small D.
Rational ord_res_explicit(const Poly& P, int j, const BerkPoint& xi, long degree_bound = 64);
// Valuation of the resultant of two binary forms of degree D, coefficient
// k standing for X^k Y^(D-k). Infinity when the forms share a factor.
ValQ resultant_valuation(const SPoly& F, const SPoly& G, int D);

struct IdentityCheck {
  Rational lhs;  // ordRes at xi
  Rational rhs;  // 2D(D-1) Crucial(xi) + v(Res) of the minimal lift of P^j
  std::optional<Rational> explicit_lhs;  // Sylvester path, small D only
  bool equal = false;
};
IdentityCheck identity_check(const Poly& P, int j, const BerkPoint& xi);

// A hole of the coefficient reduction of P^j conjugated to the Gauss point.
// Finite holes are grouped: `count` residue classes share the depth.
struct Hole {
  bool to_infinity = false;
  long depth = 0;
  int count = 1;
  bool fixed = false;  // fixed by the reduced map
};

struct DepthReport {
  BerkPoint point;
  int j = 1;
  long D = 1;
  long local_degree = 1;
  std::vector<Hole> holes;  // infinity first, then finite holes by depth
  bool semistable = false;
  bool stable = false;
};

DepthReport depth_report(const Poly& P, int j, const BerkPoint& xi);
long depth_at(const Poly& P, int j, const BerkPoint& xi, const Direction& dir);
// Directions of the finite holes of positive depth.
std::vector<Direction> hole_directions(const Poly& P, int j, const BerkPoint& xi);
bool is_semistable(const DepthReport& r);
bool is_stable(const DepthReport& r);

struct LevelRecord {
  int n = 0;
  BarycenterResult bc;
  BerkPoint a, b;  // b equals a for a singleton
  bool leaf_end = false;
  std::optional<Rational> hausdorff;  // to the final answer
};

// ordRes is convex along paths, so equal secant slopes over steps h and h/2
// pin down the one-sided slope exactly.
struct ProbeRecord {
  BerkPoint from;
  Direction direction;
  BerkPoint point;  // at the accepted step h
  Rational ord_res;
  Rational slope;
  bool passes = false;  // strictly increasing away from the candidate
};

struct MinResLocResult {
  bool segment = false;
  BerkPoint a, b;  // a is the lower end; b equals a for a singleton
  Rational ord_res;
  std::string method;  // "stabilized", "certified-leaf" or "extrapolated"
  int levels_used = 0;
  std::string stop_reason;
  std::vector<DepthReport> certificates;
  std::vector<ProbeRecord> probes;
  std::vector<LevelRecord> history;
};

MinResLocResult min_res_loc(TreeFamily& fam, int j, int max_level = 6);
MinResLocResult min_res_loc(const Poly& P, int j, int max_level = 6);

// True when P^j has the same locus as P^(d-1) for d-1 <= j <= j_max.
bool independence_check(TreeFamily& fam, int j_max, int max_level = 6);

struct EquidistRow {
  int n = 0;
  BerkPoint leaf;  // a leaf of the probe tree
  Rational target;  // deg_leaf(P^s) / d^s
  Rational mass;    // averaged total variation on the closed ball below
  Rational discrepancy;
};

struct EquidistReport {
  int j = 1;
  int s = 1;
  bool tame = true;
  std::vector<EquidistRow> rows;
  // Largest discrepancy per level, indexed from n = s.
  std::vector<Rational> max_discrepancy;
};

EquidistReport equidist_report(TreeFamily& fam, int j, int n_max, int s);

}  // namespace berktree
