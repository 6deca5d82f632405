#include "berktree/polydyn.hpp"

#include <optional>

#include "berktree/errors.hpp"
#include "berktree/parse.hpp"

namespace berktree {

namespace {

// Lower envelope of the lines t -> v(c_k) + k t (k >= 1) at t = r: its
// value and the largest k attaining it.
struct Envelope {
  Rational value;
  int degree = 0;
};

Envelope envelope_at(const SPoly& c, const Rational& r) {
  std::optional<Rational> best;
  int deg = 0;
  for (int k = 1; k < static_cast<int>(c.size()); ++k) {
    if (c[k].state() != Scalar::State::Value) continue;
    Rational val = c[k].valuation().value() + Rational(k) * r;
    if (!best || val < *best) {
      best = val;
      deg = k;
    } else if (val == *best) {
      deg = k;
    }
  }
  if (!best) throw PrecisionExhausted("all Taylor coefficients vanish to working precision");
  for (int k = 1; k < static_cast<int>(c.size()); ++k) {
    if (c[k].state() != Scalar::State::InexactZero) continue;
    Rational lb = c[k].valuation_lower_bound().value() + Rational(k) * r;
    if (lb < *best || (lb == *best && k > deg)) {
      throw PrecisionExhausted("Taylor coefficient too coarse to fix the image radius");
    }
  }
  return {*best, deg};
}

}  // namespace

Poly::Poly(std::shared_ptr<FieldTower> tower, SPoly coeffs) : tower_(std::move(tower)) {
  coeffs_ = spoly::coerced(spoly::trimmed(std::move(coeffs)));
  if (coeffs_.size() < 3) throw InputError("polynomial must have degree at least 2");
  if (coeffs_.back().state() != Scalar::State::Value) throw InputError("leading coefficient vanishes");
  for (auto& c : coeffs_) {
    if (!c.stage()) c = Scalar::zero(coeffs_.back().stage());
  }
}

Poly Poly::parse(long p, std::string_view expr, int precision) {
  auto tower = std::make_shared<FieldTower>(p, precision);
  SPoly f = parse_poly(*tower, expr);
  return Poly(tower, std::move(f));
}

std::string Poly::str() const { return poly_to_string(coeffs_); }

BerkPoint image_point(const Poly& P, const BerkPoint& xi) {
  switch (xi.kind()) {
    case BerkPoint::Kind::Infinity:
      return xi;
    case BerkPoint::Kind::Finite:
      return BerkPoint::finite(P.eval(xi.center()));
    case BerkPoint::Kind::Ball:
      break;
  }
  SPoly c = P.taylor(xi.center());
  Envelope e = envelope_at(c, xi.rv());
  return BerkPoint::ball(c[0], e.value);
}

BerkPoint image_point_iter(const Poly& P, int j, const BerkPoint& xi) {
  BerkPoint x = xi;
  for (int i = 0; i < j; ++i) x = image_point(P, x);
  return x;
}

int local_degree(const Poly& P, const BerkPoint& xi) {
  switch (xi.kind()) {
    case BerkPoint::Kind::Infinity:
      return P.degree();
    case BerkPoint::Kind::Finite: {
      SPoly c = P.taylor(xi.center());
      for (int k = 1; k < static_cast<int>(c.size()); ++k) {
        if (c[k].state() == Scalar::State::Value) return k;
      }
      return P.degree();
    }
    case BerkPoint::Kind::Ball:
      break;
  }
  return envelope_at(P.taylor(xi.center()), xi.rv()).degree;
}

long local_degree_iter(const Poly& P, int j, const BerkPoint& xi) {
  long prod = 1;
  BerkPoint x = xi;
  for (int i = 0; i < j; ++i) {
    prod *= local_degree(P, x);
    if (i + 1 < j) x = image_point(P, x);
  }
  return prod;
}

int directional_multiplicity(const Poly& P, const BerkPoint& xi, const Direction& d) {
  if (d.to_infinity) return local_degree(P, xi);
  if (!xi.is_ball()) throw TypeIPoint("directions at a type I point");
  // Step into the class by half the distance to the first place where the
  // dominant Taylor term changes, so the degree is constant on the step.
  const Scalar& b = d.witness.center();
  SPoly c = P.taylor(b);
  const Rational r = xi.rv();
  std::optional<Rational> first_break;
  for (int k = 1; k < static_cast<int>(c.size()); ++k) {
    if (c[k].state() != Scalar::State::Value) continue;
    for (int l = k + 1; l < static_cast<int>(c.size()); ++l) {
      if (c[l].state() != Scalar::State::Value) continue;
      Rational t = (c[k].valuation().value() - c[l].valuation().value()) / Rational(l - k);
      if (t > r && (!first_break || t - r < *first_break)) first_break = t - r;
    }
  }
  Rational h = first_break ? min(*first_break / Rational(2), Rational(1)) : Rational(1);
  int m = local_degree(P, BerkPoint::ball(b, r + h));
  int m_half = local_degree(P, BerkPoint::ball(b, r + h / Rational(2)));
  if (m != m_half) throw InvariantViolation("directional multiplicity unstable under halving the step");
  return m;
}

int surplus_multiplicity(const Poly& P, const BerkPoint& xi, const Direction& d) {
  if (d.to_infinity) return P.degree() - local_degree(P, xi);
  return 0;
}

std::vector<FiberEntry> preimages(const Poly& P, const BerkPoint& xi) {
  if (xi.is_infinity()) return {{xi, P.degree()}};
  if (!xi.is_ball()) throw TypeIPoint("preimages are computed for disks");
  SPoly f = P.coeffs();
  f[0] = f[0] - xi.center();
  const Rational u = xi.rv();
  auto roots = split_roots(f);
  std::vector<FiberEntry> out;
  for (const auto& root : roots) {
    SPoly c = P.taylor(root.value);
    std::optional<Rational> w;
    for (int k = 1; k < static_cast<int>(c.size()); ++k) {
      if (c[k].state() != Scalar::State::Value) continue;
      Rational cand = (u - c[k].valuation().value()) / Rational(k);
      if (!w || cand > *w) w = cand;
    }
    if (!w) throw PrecisionExhausted("Taylor coefficients at a root vanish to working precision");
    for (int k = 1; k < static_cast<int>(c.size()); ++k) {
      if (c[k].state() == Scalar::State::InexactZero &&
          c[k].valuation_lower_bound().value() + Rational(k) * *w < u) {
        throw PrecisionExhausted("Taylor coefficient too coarse to fix a preimage radius");
      }
    }
    if (root.precision < ValQ(*w)) throw PrecisionExhausted("root known too coarsely for its preimage disk");
    BerkPoint ball = BerkPoint::ball(root.value, *w);
    bool dup = false;
    for (const auto& e : out) {
      if (same_point(e.point, ball)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back({ball, 0});
  }
  int total = 0;
  for (auto& e : out) {
    e.local_degree = local_degree(P, e.point);
    total += e.local_degree;
    if (!same_point(image_point(P, e.point), xi)) throw InvariantViolation("preimage does not map back");
  }
  if (total != P.degree()) throw InvariantViolation("fiber degrees do not add up to the degree");
  return out;
}

std::vector<FiberEntry> iterate_fiber(const Poly& P, int j, const BerkPoint& xi) {
  std::vector<FiberEntry> fiber{{xi, 1}};
  for (int i = 0; i < j; ++i) {
    std::vector<FiberEntry> next;
    for (const auto& e : fiber) {
      for (const auto& pre : preimages(P, e.point)) next.push_back({pre.point, pre.local_degree * e.local_degree});
    }
    fiber = std::move(next);
  }
  return fiber;
}

Poly iterate_poly(const Poly& P, int j, long degree_bound) {
  if (j < 1) throw InputError("iterate must be at least 1");
  long D = 1;
  for (int i = 0; i < j; ++i) {
    D *= P.degree();
    if (D > degree_bound) throw DegreeBoundExceeded("degree of the iterate exceeds " + std::to_string(degree_bound));
  }
  SPoly acc = P.coeffs();
  for (int i = 1; i < j; ++i) acc = spoly::compose(P.coeffs(), acc);
  return Poly(P.tower_ptr(), acc);
}

BasePoint base_point(const Poly& P) {
  const int d = P.degree();
  SPoly f = P.coeffs();
  f[1] = f[1] - Scalar::from_int(f.back().stage(), 1);
  auto fixed = split_roots(f);
  // Any fixed point lies in the filled Julia set; the one in the smallest
  // field keeps later arithmetic cheap.
  const Root* pick = &fixed.front();
  for (const auto& r : fixed) {
    if (r.value.stage()->index < pick->value.stage()->index) pick = &r;
  }
  const Scalar& z = pick->value;
  SPoly c = P.taylor(z);
  const Rational vd = c[d].valuation().value();
  std::optional<Rational> t_deg;
  for (int k = 1; k < d; ++k) {
    if (c[k].state() != Scalar::State::Value) continue;
    Rational t = (c[k].valuation().value() - vd) / Rational(d - k);
    if (!t_deg || t < *t_deg) t_deg = t;
  }
  for (int k = 1; k < d; ++k) {
    if (c[k].state() != Scalar::State::InexactZero) continue;
    Rational t = (c[k].valuation_lower_bound().value() - vd) / Rational(d - k);
    if (!t_deg || t < *t_deg) throw PrecisionExhausted("Taylor data too coarse to locate the base point");
  }
  std::optional<Rational> t_up;
  bool expanding = c[1].state() == Scalar::State::Value && c[1].valuation().value().sign() <= 0;
  if (!expanding) {
    for (int k = 2; k <= d; ++k) {
      if (c[k].state() != Scalar::State::Value) continue;
      Rational t = -c[k].valuation().value() / Rational(k - 1);
      if (!t_up || t > *t_up) t_up = t;
    }
  }
  Rational tB;
  if (t_deg && t_up) {
    tB = min(*t_deg, *t_up);
  } else if (t_deg || t_up) {
    tB = t_deg ? *t_deg : *t_up;
  } else {
    throw NoFixedParameter("no finite parameter on the ray above the fixed point " + z.str());
  }
  BerkPoint xiB = BerkPoint::ball(z, tB);
  auto pre = preimages(P, xiB);
  if (pre.size() == 1 && same_point(pre.front().point, xiB)) return {xiB, true};
  std::string where = " at " + xiB.str();
  if (pre.size() < 2) throw NoFixedParameter("fewer than two preimages" + where);
  std::vector<Direction> dirs;
  for (const auto& e : pre) {
    if (!strictly_below(e.point, xiB)) throw NoFixedParameter("a preimage is not strictly below" + where);
    Direction dir = direction_at(xiB, e.point);
    bool seen = false;
    for (const auto& o : dirs) seen = seen || same_direction(o, dir);
    if (!seen) dirs.push_back(dir);
  }
  if (dirs.size() < 2) throw NoFixedParameter("preimages occupy a single direction" + where);
  if (!strictly_below(xiB, image_point(P, xiB))) throw NoFixedParameter("the candidate does not map strictly up" + where);
  return {xiB, false};
}

std::vector<Root> critical_points(const Poly& P) { return split_roots(spoly::derivative(P.coeffs())); }

bool is_tame(const Poly& P) { return P.p() > P.degree(); }

bool is_simple(const Poly& P) { return base_point(P).simple; }

}  // namespace berktree
