#include "berktree/crucial.hpp"

#include "berktree/errors.hpp"

namespace berktree {

namespace {

long power_of(long d, int j) {
  long D = 1;
  for (int i = 0; i < j; ++i) D *= d;
  return D;
}

// u -> rho(u, P^j(u) ^_{xi0} u), the non-constant part of Crucial.
Rational twisted_distance(const Poly& P, int j, const BerkPoint& u, const BerkPoint& xi0) {
  BerkPoint image = image_point_iter(P, j, u);
  return rho(u, meet(image, u, xi0));
}

// Slope of g along the ray t -> at(t) at t = 0+, from probes at h and h/2.
template <class G, class At>
Rational probe_slope(G g, At at, Rational h, const char* what) {
  const Rational g0 = g(at(Rational(0)));
  for (int attempt = 0; attempt <= 4; ++attempt) {
    Rational s1 = (g(at(h)) - g0) / h;
    Rational s2 = (g(at(h / Rational(2))) - g0) / (h / Rational(2));
    if (s1 == s2) return s1;
    h = h / Rational(4);
  }
  throw NonAffineProbe(what);
}

}  // namespace

CrucialEvaluator::CrucialEvaluator(Poly P, int j, BerkPoint xi0)
    : P_(std::move(P)), j_(j), xi0_(std::move(xi0)), D_(power_of(P_.degree(), j)) {
  if (j < 1) throw InputError("iterate must be at least 1");
  if (!xi0_.is_ball()) throw TypeIPoint("Crucial is evaluated at type II points");
  fiber_ = iterate_fiber(P_, j_, xi0_);
}

Rational CrucialEvaluator::diff(const BerkPoint& xi) const {
  if (!xi.is_ball()) throw TypeIPoint("Crucial is evaluated at type II points");
  Rational pulled;
  for (const auto& e : fiber_) pulled += Rational(e.local_degree) * rho(xi0_, meet(xi, e.point, xi0_));
  Rational twisted = twisted_distance(P_, j_, xi, xi0_);
  return rho(xi, xi0_) / Rational(2) + (twisted - pulled) / Rational(D_ - 1);
}

Rational crucial_diff(const Poly& P, int j, const BerkPoint& xi, const BerkPoint& xi0) {
  return CrucialEvaluator(P, j, xi0).diff(xi);
}

Rational crucial(const Poly& P, int j, const BerkPoint& xi) {
  const Stage* s = P.tower().base();
  return crucial_diff(P, j, xi, BerkPoint::ball(Scalar::zero(s), Rational(0)));
}

Rational crucial_slope(const Poly& P, int j, const BerkPoint& xi, const Direction& d, Rational h) {
  // Any reference point gives the same slope; the base point has the
  // shallowest fiber, while a deep xi would drag in level n + j.
  BerkPoint ref = xi;
  try {
    ref = base_point(P).point;
  } catch (const Error&) {
  }
  CrucialEvaluator ev(P, j, ref);
  return probe_slope([&](const BerkPoint& x) { return ev.diff(x); },
                     [&](const Rational& t) { return t.is_zero() ? xi : step_into(d, t); }, h,
                     "Crucial is not affine on the probe segment");
}

TreeMeasure crucial_curvature(const Poly& P, int j, const DynTree& t) {
  const long D = power_of(P.degree(), j);
  const Rational scale(1, D - 1);
  TreeMeasure m;
  if (t.simple) {
    m[t.top()] = Rational(1);
    return m;
  }
  for (int id = 1; id < static_cast<int>(t.size()); ++id) {
    const int v = t.valency(id);
    if (v >= 2) {
      if (v > 2) m[id] = Rational(v - 2) * scale;
      continue;
    }
    const BerkPoint& xi = t.point(id);
    if (strictly_below(xi, image_point_iter(P, j, xi))) {
      long deg = local_degree_iter(P, j, xi);
      if (deg > 1) m[id] = Rational(deg - 1) * scale;
    } else {
      m[id] = -scale;
    }
  }
  if (total_mass(m) != Rational(1)) throw InvariantViolation("crucial curvature does not have total mass 1");
  return m;
}

TreeMeasure crucial_curvature_oracle(const Poly& P, int j, const DynTree& t) {
  return crucial_curvature_oracle(P, j, t, t.point(t.top()));
}

TreeMeasure crucial_curvature_oracle(const Poly& P, int j, const DynTree& t, const BerkPoint& xi0) {
  const long D = power_of(P.degree(), j);
  DynTree aug = t;
  std::vector<std::pair<int, int>> pulled;
  for (const auto& e : iterate_fiber(P, j, xi0)) pulled.emplace_back(aug.insert(t.retract(e.point)), e.local_degree);
  const int base = aug.insert(t.retract(xi0));

  auto f = [&](const BerkPoint& u) { return twisted_distance(P, j, u, xi0); };
  PAFunction F;
  for (int id = 1; id < static_cast<int>(aug.size()); ++id) F.values[id] = f(aug.point(id));
  for (int id = 1; id < static_cast<int>(aug.size()); ++id) {
    const TreeNode& n = aug.node(id);
    if (n.parent == DynTree::kRoot) continue;
    const Rational len = *n.edge_length;
    const Rational& lo = F.values[id];
    const Rational& hi = F.values[n.parent];
    if (f(point_on_path(n.point, len / Rational(2))) != (lo + hi) / Rational(2) ||
        f(point_on_path(n.point, len / Rational(4))) != (Rational(3) * lo + hi) / Rational(4)) {
      throw NonAffineProbe("twisted distance bends inside a tree edge at " + n.point.str());
    }
  }
  const BerkPoint& top = aug.point(aug.top());
  F.slope_inf = probe_slope(f, [&](const Rational& s) { return point_on_path(top, s); }, Rational(1),
                            "twisted distance is not affine above the tree");

  TreeMeasure lap = laplacian(aug, F);
  for (const auto& [id, m] : pulled) lap[id] += Rational(m);
  lap[base] -= Rational(1);

  TreeMeasure out;
  const Rational scale(1, D - 1);
  for (const auto& [id, w] : lap) {
    if (id == DynTree::kRoot || id >= static_cast<int>(t.size())) {
      if (!w.is_zero()) throw InvariantViolation("oracle measure charges a point outside the vertex set");
      continue;
    }
    if (!w.is_zero()) out[id] = w * scale;
  }
  return out;
}

Rational ball_mass(const DynTree& t, const TreeMeasure& nu, const Direction& d) {
  Rational s;
  for (const auto& [id, w] : nu) {
    if (in_direction(d, t.point(id))) s += w;
  }
  return s;
}

Rational closed_ball_mass(const DynTree& t, const TreeMeasure& nu, const BerkPoint& xi) {
  Rational s;
  for (const auto& [id, w] : nu) {
    if (leq(t.point(id), xi)) s += w;
  }
  return s;
}

std::vector<int> z_set(const Poly& P, int j, const DynTree& t) {
  std::vector<int> out;
  if (t.simple) return out;
  for (int id : t.leaves()) {
    const BerkPoint& xi = t.point(id);
    if (local_degree_iter(P, j, xi) == 1 && strictly_below(xi, image_point_iter(P, j, xi))) out.push_back(id);
  }
  return out;
}

BarycenterResult barycenter(const DynTree& t, const TreeMeasure& nu) {
  const int n = static_cast<int>(t.size());
  std::vector<Rational> below(static_cast<std::size_t>(n));
  auto order = t.subtree(DynTree::kRoot);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto a = nu.find(*it);
    Rational s = a == nu.end() ? Rational(0) : a->second;
    for (int c : t.node(*it).children) s += below[static_cast<std::size_t>(c)];
    below[static_cast<std::size_t>(*it)] = s;
  }
  const Rational total = below[DynTree::kRoot];
  const Rational half = total / Rational(2);

  // (neighbor, mass of the component containing it) for every tree direction.
  auto branches = [&](int id) {
    std::vector<std::pair<int, Rational>> out;
    if (id != DynTree::kRoot) out.emplace_back(t.node(id).parent, total - below[static_cast<std::size_t>(id)]);
    for (int c : t.node(id).children) out.emplace_back(c, below[static_cast<std::size_t>(c)]);
    return out;
  };

  int cur = t.top();
  for (int steps = 0;; ++steps) {
    if (steps > n) throw InvariantViolation("barycenter descent does not terminate");
    int next = -1;
    for (const auto& [nb, m] : branches(cur)) {
      if (m > half) next = nb;
    }
    if (next < 0) break;
    cur = next;
  }

  std::vector<int> ends;
  for (const auto& [nb, m] : branches(cur)) {
    if (m != half) continue;
    int prev = cur, at = nb;
    for (;;) {
      int onward = -1, count = 0;
      for (const auto& [nb2, m2] : branches(at)) {
        if (nb2 != prev && m2 == half) {
          onward = nb2;
          ++count;
        }
      }
      if (count != 1) break;
      prev = at;
      at = onward;
    }
    ends.push_back(at);
  }
  if (ends.size() > 2) throw InvariantViolation("more than two balanced directions at a barycenter point");
  BarycenterResult r;
  if (ends.empty()) {
    r.a = cur;
    return r;
  }
  int x = ends.size() == 2 ? ends[0] : cur;
  int y = ends.back();
  if (compare_height(t.point(x), t.point(y)) > 0) std::swap(x, y);
  r.segment = true;
  r.a = x;
  r.b = y;
  return r;
}

VariationParts total_variation_parts(const TreeMeasure& nu) {
  VariationParts parts;
  for (const auto& [id, w] : nu) {
    if (w.sign() > 0) parts.positive[id] = w;
    if (w.sign() < 0) parts.negative[id] = -w;
  }
  return parts;
}

TreeMeasure averaged_total_variation(const TreeMeasure& nu) {
  Rational mass;
  for (const auto& [id, w] : nu) mass += abs(w);
  if (mass.is_zero()) throw InputError("zero measure has no normalization");
  TreeMeasure out;
  for (const auto& [id, w] : nu) {
    if (!w.is_zero()) out[id] = abs(w) / mass;
  }
  return out;
}

}  // namespace berktree
