#include "berktree/resloc.hpp"

#include <map>
#include <numeric>
#include <sstream>

#include "berktree/errors.hpp"

namespace berktree {

namespace {

BerkPoint gauss_point(const Poly& P) { return BerkPoint::ball(Scalar::zero(P.tower().base()), Rational(0)); }

// A scalar of valuation exactly r, in the first stage at or above s where
// r lies in the value group.
Scalar scale_for(FieldTower& T, const Stage* s, const Rational& r) {
  const Stage* S = T.ensure(s, static_cast<int>(r.den()), 1);
  return Scalar::pi_power(S, (r * Rational(S->E)).num());
}

RPoly compose(const ResidueField& F, const RPoly& g, const RPoly& h) {
  RPoly acc;
  for (std::size_t k = g.size(); k-- > 0;) {
    acc = rpoly::mul(F, acc, h);
    acc = rpoly::add(F, acc, RPoly{g[k]});
  }
  rpoly::trim(F, acc);
  return acc;
}

// Squarefree factorization valid in characteristic p: (multiplicity,
// squarefree factor) pairs, with p-th power parts handled by recursion.
void squarefree_parts(const ResidueField& F, RPoly f, long scale, std::vector<std::pair<long, RPoly>>& out) {
  rpoly::trim(F, f);
  if (rpoly::degree(F, f) <= 0) return;
  f = rpoly::monic(F, f);
  RPoly c = rpoly::gcd(F, f, rpoly::derivative(F, f));
  RPoly w = rpoly::divmod(F, f, c).first;
  for (long i = 1; rpoly::degree(F, w) > 0; ++i) {
    RPoly y = rpoly::gcd(F, w, c);
    RPoly z = rpoly::divmod(F, w, y).first;
    if (rpoly::degree(F, z) > 0) out.emplace_back(i * scale, z);
    w = y;
    c = rpoly::divmod(F, c, y).first;
  }
  if (rpoly::degree(F, c) <= 0) return;
  // c is a p-th power; undo Frobenius coefficientwise.
  mpz_class e = 1;
  for (int i = 1; i < F.degree(); ++i) e *= F.p();
  RPoly root;
  for (std::size_t k = 0; k < c.size(); k += static_cast<std::size_t>(F.p())) root.push_back(F.pow(c[k], e));
  squarefree_parts(F, root, scale * F.p(), out);
}

// (multiplicity, number of distinct roots over the algebraic closure).
std::vector<std::pair<long, int>> root_multiplicities(const ResidueField& F, const RPoly& f) {
  std::vector<std::pair<long, RPoly>> parts;
  squarefree_parts(F, f, 1, parts);
  std::map<long, int> grouped;
  for (const auto& [m, g] : parts) grouped[m] += rpoly::degree(F, g);
  return {grouped.begin(), grouped.end()};
}

enum class Orbit { Fixed, Above, Below, Apart };

// Residue of x / c for a formal c with v(c) = v and unit part 1. The
// uniformizers of the tower are compatible, so no element of valuation v
// has to exist in the tower.
ResidueField::Elem unit_residue(const Scalar& x, const Rational& v) {
  const ResidueField& F = x.stage()->residue;
  if (x.is_exact_zero()) return F.zero();
  if (x.state() == Scalar::State::InexactZero) {
    if (x.valuation_lower_bound() >= ValQ(v)) return F.zero();
    throw PrecisionExhausted("coefficient too coarse to reduce");
  }
  const Rational vx = x.valuation().value();
  if (vx > v) return F.zero();
  if (vx < v) throw InvariantViolation("reduction of a coefficient with negative valuation");
  return x.mul_pi_power(-(vx * Rational(x.stage()->E)).num()).residue();
}

// The reduction of P^j conjugated so that xi becomes the Gauss point, built
// as the composition of the reductions of P along the orbit of xi.
struct IterateReduction {
  const Stage* stage = nullptr;
  Scalar center;
  Rational radius;
  BerkPoint image;
  Orbit orbit = Orbit::Fixed;
  RPoly map;
  ResidueField::Elem back;  // residue class at the image pointing to xi (Above only)
};

IterateReduction reduce_iterate(const Poly& P, int j, const BerkPoint& xi, const Stage* extra = nullptr) {
  if (!xi.is_ball()) throw TypeIPoint("reductions are taken at type II points");
  std::vector<BerkPoint> orbit{xi};
  for (int i = 0; i < j; ++i) orbit.push_back(image_point(P, orbit.back()));
  const Stage* S = FieldTower::common(FieldTower::common(xi.center().stage(), P.leading().stage()), extra);
  for (const auto& x : orbit) S = FieldTower::common(S, x.center().stage());
  const ResidueField& F = S->residue;

  std::vector<Scalar> centers;
  for (const auto& x : orbit) centers.push_back(x.center().embed(S));
  RPoly H{F.zero(), F.one()};
  for (std::size_t i = 1; i < orbit.size(); ++i) {
    const SPoly t = P.taylor(centers[i - 1]);
    const Rational& r_in = orbit[i - 1].rv();
    const Rational& r_out = orbit[i].rv();
    RPoly g{F.zero()};
    for (std::size_t k = 1; k < t.size(); ++k) {
      g.push_back(unit_residue(t[k].embed(S), r_out - Rational(static_cast<std::int64_t>(k)) * r_in));
    }
    rpoly::trim(F, g);
    H = compose(F, g, H);
  }

  IterateReduction R;
  R.stage = S;
  R.center = centers.front();
  R.radius = xi.rv();
  R.image = orbit.back();
  R.map = H;
  if (same_point(R.image, xi)) {
    R.orbit = Orbit::Fixed;
  } else if (leq(xi, R.image)) {
    R.orbit = Orbit::Above;
    R.back = unit_residue((centers.front() - centers.back()).embed(S), R.image.rv());
  } else if (leq(R.image, xi)) {
    R.orbit = Orbit::Below;
  } else {
    R.orbit = Orbit::Apart;
  }
  return R;
}

bool same_locus(const LevelRecord& x, const LevelRecord& y) {
  if (x.bc.segment != y.bc.segment) return false;
  return same_point(x.a, y.a) && same_point(x.b, y.b);
}

Rational hausdorff(const BerkPoint& a, const BerkPoint& b, const BerkPoint& A, const BerkPoint& B) {
  Rational h = max(distance_to_segment(a, A, B), distance_to_segment(b, A, B));
  h = max(h, distance_to_segment(A, a, b));
  return max(h, distance_to_segment(B, a, b));
}

struct Candidate {
  bool segment = false;
  BerkPoint a, b;
  std::string method;
};

// Directions at e leading away from the candidate: up, the finite holes,
// toward every tree node below e, and toward the center of e. ordRes can
// only stay flat in the first two kinds.
std::vector<Direction> outward_directions(const Poly& P, int j, const BerkPoint& e, const DynTree& t,
                                          const Candidate& c) {
  std::vector<Direction> dirs;
  auto add = [&](const Direction& d) {
    if (c.segment && (in_direction(d, c.a) || in_direction(d, c.b))) return;
    for (const auto& o : dirs) {
      if (same_direction(o, d)) return;
    }
    dirs.push_back(d);
  };
  add(direction_to_infinity(e));
  try {
    for (const auto& d : hole_directions(P, j, e)) add(d);
  } catch (const WildCase&) {
    // Stability alone certifies a singleton; a segment end needs every hole.
    if (c.segment) throw;
  }
  for (int id = 1; id < static_cast<int>(t.size()); ++id) {
    if (strictly_below(t.point(id), e)) add(direction_at(e, t.point(id)));
  }
  add(direction_at(e, BerkPoint::ball(e.center(), e.rv() + Rational(1))));
  return dirs;
}

ProbeRecord probe(const Poly& P, int j, const BerkPoint& e, const Direction& d, const Rational& level) {
  ProbeRecord pr;
  pr.from = e;
  pr.direction = d;
  Rational h(1, 4);
  for (int attempt = 0; attempt < 16; ++attempt, h = h / Rational(4)) {
    BerkPoint far = step_into(d, h);
    Rational at_h = ord_res_at(P, j, far);
    Rational s1 = (at_h - level) / h;
    Rational s2 = (ord_res_at(P, j, step_into(d, h / Rational(2))) - level) / (h / Rational(2));
    if (s1 != s2) continue;
    pr.point = far;
    pr.ord_res = at_h;
    pr.slope = s1;
    pr.passes = s1.sign() > 0;
    return pr;
  }
  throw NonAffineProbe("ordRes has no affine germ at " + e.str());
}

bool certify(const Poly& P, int j, const Candidate& c, const DynTree& t, MinResLocResult& out) {
  out.certificates.clear();
  out.probes.clear();
  std::vector<BerkPoint> ends{c.a};
  if (c.segment) ends.push_back(c.b);
  for (const auto& e : ends) {
    DepthReport r = depth_report(P, j, e);
    out.certificates.push_back(r);
    if (!r.semistable) return false;
    // A stable point is the whole locus, so it cannot end a segment.
    if (c.segment == r.stable) return false;
  }
  const Rational level = ord_res_at(P, j, c.a);
  if (c.segment) {
    if (ord_res_at(P, j, c.b) != level) return false;
    if (ord_res_at(P, j, point_on_segment(c.a, c.b, rho(c.a, c.b) / Rational(2))) != level) return false;
  }
  for (const auto& e : ends) {
    std::vector<Direction> dirs;
    try {
      dirs = outward_directions(P, j, e, t, c);
    } catch (const WildCase&) {
      return false;
    }
    for (const auto& d : dirs) {
      out.probes.push_back(probe(P, j, e, d, level));
      if (!out.probes.back().passes) return false;
    }
  }
  out.ord_res = level;
  return true;
}

// Limit of lower endpoints that keep moving down: a ball about a periodic
// point (or the last center) that P^k fixes and that sits below them all.
std::optional<BerkPoint> extrapolate(const Poly& P, const std::vector<LevelRecord>& hist) {
  if (hist.size() < 3) return std::nullopt;
  for (std::size_t i = hist.size() - 2; i < hist.size(); ++i) {
    if (!strictly_below(hist[i].a, hist[i - 1].a)) return std::nullopt;
  }
  const BerkPoint& last = hist.back().a;
  std::optional<BerkPoint> best;
  for (int k = 1; k <= 2; ++k) {
    Poly Pk = k == 1 ? P : iterate_poly(P, k, 64);
    std::vector<Scalar> centers{last.center()};
    SPoly fk = Pk.coeffs();
    fk[1] = fk[1] - Scalar::from_int(fk.back().stage(), 1);
    for (const auto& r : split_roots(fk)) {
      if (leq(BerkPoint::finite(r.value), last)) centers.push_back(r.value);
    }
    for (const auto& a : centers) {
      SPoly C = Pk.taylor(a);
      for (std::size_t i = 2; i < C.size(); ++i) {
        if (C[i].state() != Scalar::State::Value) continue;
        Rational t = C[i].valuation().value() / Rational(1 - static_cast<std::int64_t>(i));
        if (t <= last.rv()) continue;
        BerkPoint L = BerkPoint::ball(a, t);
        if (!same_point(image_point_iter(P, k, L), L)) continue;
        bool below_all = true;
        for (const auto& h : hist) below_all = below_all && strictly_below(L, h.a);
        if (!below_all) continue;
        if (!best || compare_height(L, *best) > 0) best = L;
      }
    }
  }
  return best;
}

std::string bracketing(const std::vector<LevelRecord>& hist, const std::string& reason) {
  std::ostringstream os;
  for (const auto& h : hist) {
    os << "n=" << h.n << ": " << (h.bc.segment ? "[" + h.a.str() + ", " + h.b.str() + "]" : "{" + h.a.str() + "}")
       << (h.leaf_end ? " (leaf end)" : "") << "; ";
  }
  if (!reason.empty()) os << "stopped: " << reason;
  return os.str();
}

}  // namespace

long iterate_degree(const Poly& P, int j) {
  if (j < 1) throw InputError("iterate must be at least 1");
  long D = 1;
  for (int i = 0; i < j; ++i) {
    D *= P.degree();
    if (D > (1L << 40)) throw DegreeBoundExceeded("degree of the iterate is too large");
  }
  return D;
}

Rational ord_res_at(const Poly& P, int j, const BerkPoint& xi) {
  if (!xi.is_ball()) throw TypeIPoint("ordRes is evaluated at type II points");
  const long D = iterate_degree(P, j);
  const Rational r = xi.rv();
  const Rational v_lead = P.leading().valuation().value() * Rational((D - 1) / (P.degree() - 1));
  const Rational v_top = v_lead + Rational(D - 1) * r;
  const Rational s = image_point_iter(P, j, xi).rv();
  Scalar x = xi.center();
  for (int i = 0; i < j; ++i) x = P.eval(x);
  Scalar moved = x - xi.center();
  Rational low = moved.is_exact_zero() ? s : min(s, moved.val_capped(s));
  Rational m = min(Rational(0), low - r);
  return Rational(D) * v_top - Rational(2 * D) * m;
}

ValQ resultant_valuation(const SPoly& F, const SPoly& G, int D) {
  const int n = 2 * D;
  SPoly all;
  for (int k = 0; k <= D; ++k) {
    all.push_back(k < static_cast<int>(F.size()) ? F[static_cast<std::size_t>(k)] : Scalar());
    all.push_back(k < static_cast<int>(G.size()) ? G[static_cast<std::size_t>(k)] : Scalar());
  }
  all = spoly::coerced(all);
  const Stage* S = nullptr;
  for (const auto& c : all) S = FieldTower::common(S, c.stage());
  std::vector<std::vector<Scalar>> M(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n), Scalar::zero(S)));
  for (int i = 0; i < D; ++i) {
    for (int k = 0; k <= D; ++k) {
      M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + D - k)] = all[static_cast<std::size_t>(2 * k)];
      M[static_cast<std::size_t>(D + i)][static_cast<std::size_t>(i + D - k)] = all[static_cast<std::size_t>(2 * k + 1)];
    }
  }
  Rational total;
  for (int step = 0; step < n; ++step) {
    int pr = -1, pc = -1;
    Rational best;
    bool inexact_left = false;
    for (int r = step; r < n; ++r) {
      for (int c = step; c < n; ++c) {
        const Scalar& x = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        if (x.state() == Scalar::State::InexactZero) inexact_left = true;
        if (x.state() != Scalar::State::Value) continue;
        Rational v = x.valuation().value();
        if (pr < 0 || v < best) {
          pr = r;
          pc = c;
          best = v;
        }
      }
    }
    if (pr < 0) {
      if (inexact_left) throw PrecisionExhausted("Sylvester matrix degenerates to working precision");
      return ValQ::infinity();
    }
    std::swap(M[static_cast<std::size_t>(step)], M[static_cast<std::size_t>(pr)]);
    for (auto& row : M) std::swap(row[static_cast<std::size_t>(step)], row[static_cast<std::size_t>(pc)]);
    total += best;
    const Scalar pinv = M[static_cast<std::size_t>(step)][static_cast<std::size_t>(step)].inv();
    for (int r = step + 1; r < n; ++r) {
      auto& row = M[static_cast<std::size_t>(r)];
      if (row[static_cast<std::size_t>(step)].is_exact_zero()) continue;
      Scalar factor = row[static_cast<std::size_t>(step)] * pinv;
      for (int c = step; c < n; ++c) {
        row[static_cast<std::size_t>(c)] =
            row[static_cast<std::size_t>(c)] - factor * M[static_cast<std::size_t>(step)][static_cast<std::size_t>(c)];
      }
    }
  }
  return ValQ(total);
}

Rational ord_res_explicit(const Poly& P, int j, const BerkPoint& xi, long degree_bound) {
  if (!xi.is_ball()) throw TypeIPoint("ordRes is evaluated at type II points");
  const long D = iterate_degree(P, j);
  if (D > degree_bound) throw DegreeBoundExceeded("explicit ordRes limited to degree " + std::to_string(degree_bound));
  const SPoly Q = iterate_poly(P, j, degree_bound).coeffs();
  const Scalar& a = xi.center();
  const Scalar c = scale_for(P.tower(), FieldTower::common(a.stage(), Q.back().stage()), xi.rv());
  const SPoly T = spoly::taylor_shift(Q, a);
  SPoly b(T.size());
  b[0] = (T[0] - a) / c;
  Scalar cpow = Scalar::from_int(c.stage(), 1);
  for (std::size_t k = 1; k < T.size(); ++k) {
    b[k] = T[k] * cpow;
    cpow = cpow * c;
  }
  std::optional<Rational> low;
  for (const auto& x : b) {
    if (x.state() == Scalar::State::Value && (!low || x.valuation().value() < *low)) low = x.valuation().value();
  }
  for (const auto& x : b) {
    if (x.state() == Scalar::State::InexactZero && low && x.valuation_lower_bound().value() < *low) {
      throw PrecisionExhausted("lift coefficient too coarse to normalize");
    }
  }
  const Rational m = min(Rational(0), low.value_or(Rational(0)));
  SPoly G(static_cast<std::size_t>(D) + 1, Scalar::zero(c.stage()));
  G[0] = Scalar::from_int(c.stage(), 1);
  ValQ v = resultant_valuation(b, G, static_cast<int>(D));
  if (v.is_inf()) throw InvariantViolation("lift of a polynomial map has vanishing resultant");
  return v.value() - Rational(2 * D) * m;
}

IdentityCheck identity_check(const Poly& P, int j, const BerkPoint& xi) {
  const long D = iterate_degree(P, j);
  const BerkPoint g = gauss_point(P);
  IdentityCheck out;
  out.lhs = ord_res_at(P, j, xi);
  const Rational baseline = ord_res_at(P, j, g);
  out.rhs = Rational(2 * D * (D - 1)) * crucial(P, j, xi) + baseline;
  out.equal = out.lhs == out.rhs;
  if (D <= 16) {
    out.explicit_lhs = ord_res_explicit(P, j, xi);
    out.equal = out.equal && *out.explicit_lhs == out.lhs && ord_res_explicit(P, j, g) == baseline;
  }
  return out;
}

bool is_semistable(const DepthReport& r) {
  for (const auto& h : r.holes) {
    if (h.depth == 0) continue;
    if (2 * h.depth > r.D + 1) return false;
    if (h.fixed && 2 * h.depth >= r.D) return false;
  }
  return true;
}

bool is_stable(const DepthReport& r) {
  for (const auto& h : r.holes) {
    if (h.depth == 0) continue;
    if (2 * h.depth > r.D) return false;
    if (h.fixed && 2 * h.depth >= r.D - 1) return false;
  }
  return true;
}

DepthReport depth_report(const Poly& P, int j, const BerkPoint& xi) {
  DepthReport rep;
  rep.point = xi;
  rep.j = j;
  rep.D = iterate_degree(P, j);
  IterateReduction R = reduce_iterate(P, j, xi);
  const ResidueField& F = R.stage->residue;
  rep.local_degree = rpoly::degree(F, R.map);
  if (rep.local_degree != local_degree_iter(P, j, xi)) throw InvariantViolation("reduction degree disagrees with the local degree");
  switch (R.orbit) {
    case Orbit::Fixed:
      rep.holes.push_back({true, rep.D - rep.local_degree, 1, true});
      break;
    case Orbit::Above: {
      rep.holes.push_back({true, rep.D - rep.local_degree, 1, true});
      RPoly f = rpoly::sub(F, R.map, RPoly{R.back});
      auto mult = root_multiplicities(F, f);
      for (auto it = mult.rbegin(); it != mult.rend(); ++it) rep.holes.push_back({false, it->first, it->second, false});
      break;
    }
    case Orbit::Apart:
      rep.holes.push_back({true, rep.D, 1, true});
      break;
    case Orbit::Below:
      rep.holes.push_back({true, rep.D, 1, false});
      break;
  }
  rep.semistable = is_semistable(rep);
  rep.stable = is_stable(rep);
  return rep;
}

long depth_at(const Poly& P, int j, const BerkPoint& xi, const Direction& dir) {
  if (dir.to_infinity) return depth_report(P, j, xi).holes.front().depth;
  IterateReduction R = reduce_iterate(P, j, xi, dir.witness.center().stage());
  if (R.orbit != Orbit::Above) return 0;
  const ResidueField& F = R.stage->residue;
  auto t = unit_residue(dir.witness.center().embed(R.stage) - R.center, R.radius);
  RPoly f = rpoly::sub(F, R.map, RPoly{R.back});
  rpoly::trim(F, f);
  const RPoly lin{F.neg(t), F.one()};
  long m = 0;
  while (rpoly::degree(F, f) > 0 && F.is_zero(rpoly::eval(F, f, t))) {
    f = rpoly::divmod(F, f, lin).first;
    ++m;
  }
  return m;
}

std::vector<Direction> hole_directions(const Poly& P, int j, const BerkPoint& xi) {
  IterateReduction R = reduce_iterate(P, j, xi);
  if (R.orbit != Orbit::Above) return {};
  std::vector<std::pair<long, RPoly>> parts;
  {
    const ResidueField& F = R.stage->residue;
    squarefree_parts(F, rpoly::sub(F, R.map, RPoly{R.back}), 1, parts);
    int f = 1;
    for (const auto& [m, g] : parts) {
      for (int k : rpoly::factor_degrees(F, g)) f = std::lcm(f, k);
    }
    // Holes off the residue field need a larger one.
    if (f > 1) R = reduce_iterate(P, j, xi, P.tower().ensure(R.stage, 1, R.stage->f * f));
  }
  const ResidueField& F = R.stage->residue;
  std::vector<Direction> out;
  std::optional<Scalar> scale;
  for (const auto& [t, m] : rpoly::roots(F, rpoly::sub(F, R.map, RPoly{R.back}))) {
    Scalar center = R.center;
    if (!F.is_zero(t)) {
      if (!scale) scale = scale_for(P.tower(), R.stage, R.radius);
      center = center + Scalar::lift(R.stage, t) * *scale;
    }
    out.push_back(direction_at(xi, BerkPoint::ball(center, xi.rv() + Rational(1))));
  }
  return out;
}

MinResLocResult min_res_loc(TreeFamily& fam, int j, int max_level) {
  const Poly& P = fam.poly();
  MinResLocResult res;
  std::vector<LevelRecord> hist;
  const DynTree* last = nullptr;
  bool stabilized = false;
  for (int n = 1; n <= max_level; ++n) {
    const DynTree* t = nullptr;
    try {
      t = &fam.tree(n);
    } catch (const LevelBoundExceeded& e) {
      res.stop_reason = e.what();
      break;
    } catch (const WildCase& e) {
      res.stop_reason = e.what();
      break;
    }
    LevelRecord rec;
    rec.n = n;
    rec.bc = barycenter(*t, crucial_curvature(P, j, *t));
    rec.a = with_simple_center(t->point(rec.bc.a));
    rec.b = rec.bc.segment ? with_simple_center(t->point(rec.bc.b)) : rec.a;
    rec.leaf_end = t->node(rec.bc.a).children.empty() || (rec.bc.segment && t->node(rec.bc.b).children.empty());
    hist.push_back(rec);
    last = t;
    res.levels_used = n;
    if (t->simple || (hist.size() >= 2 && same_locus(hist[hist.size() - 2], rec) && !rec.leaf_end)) {
      stabilized = true;
      break;
    }
  }
  if (hist.empty()) throw NotStabilized("no tree level could be built", res.stop_reason);
  if (!stabilized && res.stop_reason.empty()) res.stop_reason = "level cap " + std::to_string(max_level) + " reached";

  std::vector<Candidate> candidates;
  const LevelRecord& fin = hist.back();
  if (stabilized) {
    candidates.push_back({fin.bc.segment, fin.a, fin.b, "stabilized"});
  } else {
    candidates.push_back({fin.bc.segment, fin.a, fin.b, "certified-leaf"});
    if (auto L = extrapolate(P, hist)) {
      if (fin.bc.segment) {
        candidates.push_back({true, *L, fin.b, "extrapolated"});
      } else {
        candidates.push_back({false, *L, *L, "extrapolated"});
      }
    }
  }
  for (const auto& c : candidates) {
    if (!certify(P, j, c, *last, res)) {
      if (c.method == "stabilized") {
        throw InvariantViolation("stabilized barycenter " + bracketing(hist, "") + "failed certification");
      }
      continue;
    }
    res.segment = c.segment;
    res.a = c.a;
    res.b = c.b;
    res.method = c.method;
    if (res.segment && j >= P.degree() - 1) throw InvariantViolation("locus of a high iterate is not a singleton");
    for (auto& h : hist) h.hausdorff = hausdorff(h.a, h.b, res.a, res.b);
    res.history = std::move(hist);
    return res;
  }
  throw NotStabilized("barycenters did not stabilize and no candidate could be certified",
                      bracketing(hist, res.stop_reason));
}

MinResLocResult min_res_loc(const Poly& P, int j, int max_level) {
  TreeFamily fam(P);
  return min_res_loc(fam, j, max_level);
}

bool independence_check(TreeFamily& fam, int j_max, int max_level) {
  const int d = fam.poly().degree();
  MinResLocResult ref = min_res_loc(fam, d - 1, max_level);
  for (int j = d; j <= j_max; ++j) {
    MinResLocResult r = min_res_loc(fam, j, max_level);
    if (r.segment != ref.segment || !same_point(r.a, ref.a) || !same_point(r.b, ref.b)) return false;
  }
  return true;
}

EquidistReport equidist_report(TreeFamily& fam, int j, int n_max, int s) {
  const Poly& P = fam.poly();
  EquidistReport rep;
  rep.j = j;
  rep.s = s;
  rep.tame = is_tame(P);
  const DynTree probe = fam.tree(s);
  long ds = 1;
  for (int i = 0; i < s; ++i) ds *= P.degree();
  for (int n = s; n <= n_max; ++n) {
    const DynTree& t = fam.tree(n);
    TreeMeasure nu = averaged_total_variation(crucial_curvature(P, j, t));
    Rational worst;
    for (int id : probe.leaves()) {
      EquidistRow row;
      row.n = n;
      row.leaf = probe.point(id);
      row.target = Rational(probe.node(id).fiber_degree, ds);
      row.mass = closed_ball_mass(t, nu, row.leaf);
      row.discrepancy = abs(row.mass - row.target);
      worst = max(worst, row.discrepancy);
      rep.rows.push_back(row);
    }
    rep.max_discrepancy.push_back(worst);
  }
  return rep;
}

}  // namespace berktree
