#include "berktree/newton.hpp"

#include <algorithm>
#include <optional>

#include "berktree/errors.hpp"

namespace berktree {

namespace spoly {

int degree(const SPoly& f) {
  for (int k = static_cast<int>(f.size()) - 1; k >= 0; --k) {
    if (!f[k].is_exact_zero()) return k;
  }
  return -1;
}

SPoly trimmed(SPoly f) {
  f.resize(static_cast<std::size_t>(degree(f) + 1));
  return f;
}

SPoly embed(const SPoly& f, const Stage* s) {
  SPoly out;
  out.reserve(f.size());
  for (const auto& c : f) out.push_back(c.embed(s));
  return out;
}

SPoly coerced(const SPoly& f) {
  const Stage* s = nullptr;
  for (const auto& c : f) s = FieldTower::common(s, c.stage());
  return embed(f, s);
}

Scalar eval(const SPoly& f, const Scalar& x) {
  Scalar acc = Scalar::zero(FieldTower::common(x.stage(), f.empty() ? nullptr : f.back().stage()));
  for (std::size_t k = f.size(); k-- > 0;) acc = acc * x + f[k];
  return acc;
}

SPoly add(const SPoly& a, const SPoly& b) {
  SPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size() && i < b.size()) {
      r[i] = a[i] + b[i];
    } else {
      r[i] = i < a.size() ? a[i] : b[i];
    }
  }
  return r;
}

SPoly sub(const SPoly& a, const SPoly& b) {
  SPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size() && i < b.size()) {
      r[i] = a[i] - b[i];
    } else {
      r[i] = i < a.size() ? a[i] : -b[i];
    }
  }
  return r;
}

SPoly mul(const SPoly& a, const SPoly& b) {
  if (a.empty() || b.empty()) return {};
  SPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_exact_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_exact_zero()) continue;
      r[i + j] = r[i + j] + a[i] * b[j];
    }
  }
  return r;
}

SPoly derivative(const SPoly& f) {
  SPoly r;
  for (std::size_t k = 1; k < f.size(); ++k) {
    if (f[k].is_exact_zero()) {
      r.push_back(f[k]);
    } else {
      r.push_back(f[k] * Scalar::from_int(f[k].stage(), static_cast<long>(k)));
    }
  }
  return r;
}

SPoly compose(const SPoly& f, const SPoly& g) {
  SPoly acc;
  for (std::size_t k = f.size(); k-- > 0;) {
    acc = mul(acc, g);
    if (acc.empty()) acc.resize(1);
    acc[0] = acc[0] + f[k];
  }
  return acc;
}

SPoly taylor_shift(const SPoly& f, const Scalar& a) {
  SPoly c = f;
  const int n = static_cast<int>(c.size());
  // After pass i, c[i] holds the i-th Taylor coefficient at a.
  for (int i = 0; i < n - 1; ++i) {
    for (int k = n - 2; k >= i; --k) c[k] = c[k] + a * c[k + 1];
  }
  return c;
}

SPoly scale_variable(const SPoly& f, const Scalar& c) {
  SPoly r = f;
  if (r.empty()) return r;
  Scalar power = Scalar::from_int(FieldTower::common(c.stage(), f.back().stage()), 1);
  for (std::size_t k = 0; k < r.size(); ++k) {
    r[k] = r[k] * power;
    power = power * c;
  }
  return r;
}

}  // namespace spoly

namespace {

struct HullPoint {
  int x;
  Rational y;
};

// Lower convex hull, points sorted by x with distinct abscissae.
std::vector<HullPoint> lower_hull(const std::vector<HullPoint>& pts) {
  std::vector<HullPoint> h;
  for (const auto& q : pts) {
    while (h.size() >= 2) {
      const auto& a = h[h.size() - 2];
      const auto& b = h.back();
      // Remove b when it lies on or above segment a-q.
      Rational lhs = (b.y - a.y) * Rational(q.x - a.x);
      Rational rhs = (q.y - a.y) * Rational(b.x - a.x);
      if (lhs >= rhs) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(q);
  }
  return h;
}

Rational hull_value_at(const std::vector<HullPoint>& h, int x) {
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (h[i].x <= x && x <= h[i + 1].x) {
      return h[i].y + (h[i + 1].y - h[i].y) * Rational(x - h[i].x, h[i + 1].x - h[i].x);
    }
  }
  return h.front().y;
}

// Root valuation of the hull segment covering [x-1, x].
Rational segment_root_valuation_at(const std::vector<HullPoint>& h, int x) {
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (h[i].x <= x - 1 && x <= h[i + 1].x) return -(h[i + 1].y - h[i].y) / Rational(h[i + 1].x - h[i].x);
  }
  throw InvariantViolation("no hull segment covers the requested abscissa");
}

// Precision of a root r of multiplicity mu, read off the Taylor expansion.
ValQ root_precision(const SPoly& f, const Scalar& r, int mu) {
  SPoly c = spoly::taylor_shift(f, r);
  std::vector<HullPoint> pts;
  bool any_inexact = false;
  for (int k = 0; k < static_cast<int>(c.size()); ++k) {
    if (c[k].is_exact_zero()) continue;
    if (c[k].state() == Scalar::State::InexactZero) {
      if (k < mu) {
        any_inexact = true;
        pts.push_back({k, c[k].valuation_lower_bound().value()});
      }
      continue;
    }
    if (k < mu) any_inexact = true;
    pts.push_back({k, c[k].valuation().value()});
  }
  if (!any_inexact) return ValQ::infinity();
  auto h = lower_hull(pts);
  if (h.empty() || h.front().x >= mu || h.back().x < mu) {
    throw PrecisionExhausted("root cluster not resolved at working precision");
  }
  return ValQ(segment_root_valuation_at(h, mu));
}

Scalar newton_iterate(const SPoly& f, const SPoly& df, Scalar y) {
  for (int iter = 0; iter < 96; ++iter) {
    Scalar fy = spoly::eval(f, y);
    if (fy.is_zero()) return y;
    Scalar step = fy / spoly::eval(df, y);
    if (step.is_zero()) return y;
    y = y - step;
  }
  throw PrecisionExhausted("Newton iteration did not reach working precision");
}

struct Splitter {
  FieldTower* tower;
  int max_depth;
  std::vector<Root> out;

  // Roots of g with valuation > 0 when positive_only, all roots otherwise.
  // Results are scaled by `scale` and shifted by `shift` before recording.
  void split(const SPoly& g0, bool positive_only, const Scalar& scale, const Scalar& shift, int depth) {
    if (depth > max_depth) throw WildCase("root clustering deeper than the configured recursion limit");
    SPoly g = spoly::coerced(spoly::trimmed(g0));
    NewtonPolygon np = newton_polygon(g);
    if (np.zero_order > 0) record(Scalar::zero(g.back().stage()), np.zero_order, scale, shift);
    for (const auto& seg : np.segments) {
      if (positive_only && seg.slope.sign() <= 0) continue;
      split_segment(g, seg, scale, shift, depth);
    }
  }

  void record(const Scalar& y, int mult, const Scalar& scale, const Scalar& shift) {
    out.push_back({scale * y + shift, mult, ValQ::infinity()});
  }

  void split_segment(const SPoly& g, const NPSegment& seg, const Scalar& scale, const Scalar& shift, int depth) {
    const Stage* S = g.back().stage();
    int E_needed = static_cast<int>(lcm64(S->E, seg.slope.den()));
    const Stage* S1 = tower->ensure(S, E_needed, 1);
    for (int round = 0; round < 4; ++round) {
      SPoly h = spoly::embed(g, S1);
      // c = pi^(s E), so z = c y puts this segment's roots on the unit circle.
      std::int64_t sE = (seg.slope * Rational(S1->E)).num();
      Scalar c = Scalar::pi_power(S1, sE);
      Rational lambda = h[seg.start].valuation().value() + seg.slope * Rational(seg.start);
      std::int64_t lE = (lambda * Rational(S1->E)).num();
      Scalar c_pow = Scalar::pi_power(S1, -lE);
      for (auto& coef : h) {
        coef = coef * c_pow;
        c_pow = c_pow * c;
      }
      const ResidueField& F = S1->residue;
      RPoly rbar;
      for (int k = seg.start; k <= seg.start + seg.length; ++k) rbar.push_back(h[k].residue());
      rpoly::trim(F, rbar);
      auto rts = rpoly::roots(F, rbar);
      int found = 0;
      for (const auto& [e, m] : rts) found += m;
      if (found < seg.length) {
        auto degs = rpoly::factor_degrees(F, rbar);
        int L = 1;
        for (int d : degs) L = static_cast<int>(lcm64(L, d));
        S1 = tower->ensure(S1, S1->E, S1->f * L);
        continue;
      }
      Scalar new_scale = scale.embed(S1) * c;
      Scalar new_shift = shift.embed(S1);
      SPoly dh = spoly::derivative(h);
      for (const auto& [e, m] : rts) {
        Scalar y0 = Scalar::lift(S1, e);
        if (m == 1) {
          Scalar y = newton_iterate(h, dh, y0);
          record(y, 1, new_scale, new_shift);
        } else {
          SPoly H = spoly::taylor_shift(h, y0);
          std::size_t before = out.size();
          split(H, true, new_scale, new_shift + new_scale * y0, depth + 1);
          int total = 0;
          for (std::size_t i = before; i < out.size(); ++i) total += out[i].multiplicity;
          if (total != m) throw PrecisionExhausted("repeated residue root did not separate at working precision");
        }
      }
      return;
    }
    throw InvariantViolation("residue polynomial failed to split after extension");
  }
};

}  // namespace

NewtonPolygon newton_polygon(const SPoly& f0) {
  SPoly f = spoly::trimmed(f0);
  const int d = static_cast<int>(f.size()) - 1;
  if (d < 0) throw InputError("Newton polygon of the zero polynomial");
  if (f[d].state() != Scalar::State::Value) throw PrecisionExhausted("leading coefficient vanishes to precision");
  NewtonPolygon np;
  while (np.zero_order < d && f[np.zero_order].is_zero()) ++np.zero_order;
  std::vector<HullPoint> pts;
  for (int k = np.zero_order; k <= d; ++k) {
    if (f[k].state() == Scalar::State::Value) pts.push_back({k, f[k].valuation().value()});
  }
  auto h = lower_hull(pts);
  for (int k = np.zero_order; k <= d; ++k) {
    if (f[k].state() == Scalar::State::InexactZero && hull_value_at(h, k) > f[k].valuation_lower_bound().value()) {
      throw PrecisionExhausted("coefficient known too coarsely to fix the Newton polygon");
    }
  }
  for (std::size_t i = h.size() - 1; i > 0; --i) {
    NPSegment s;
    s.length = h[i].x - h[i - 1].x;
    s.start = h[i - 1].x;
    s.slope = -(h[i].y - h[i - 1].y) / Rational(s.length);
    np.segments.push_back(s);
  }
  return np;
}

std::vector<Root> split_roots(const SPoly& f0) {
  SPoly f = spoly::coerced(spoly::trimmed(f0));
  const int d = static_cast<int>(f.size()) - 1;
  if (d < 1) throw InputError("split_roots needs a polynomial of degree at least 1");
  const Stage* S = f.back().stage();
  if (!S) throw InputError("polynomial has no field stage");
  auto* tower = const_cast<FieldTower*>(S->tower);
  Splitter sp{tower, tower->max_depth(), {}};
  sp.split(f, false, Scalar::from_int(S, 1), Scalar::zero(S), 0);
  int total = 0;
  for (const auto& r : sp.out) total += r.multiplicity;
  if (total != d) throw InvariantViolation("root multiplicities do not add up to the degree");
  // Final stage for everything, then precision of each cluster.
  const Stage* top = S;
  for (const auto& r : sp.out) top = FieldTower::common(top, r.value.stage());
  SPoly ft = spoly::embed(f, top);
  for (auto& r : sp.out) {
    r.value = r.value.embed(top);
    r.precision = root_precision(ft, r.value, r.multiplicity);
  }
  return sp.out;
}

Scalar hensel_lift(const SPoly& f0, const Scalar& r0) {
  SPoly f = spoly::coerced(spoly::trimmed(f0));
  SPoly df = spoly::derivative(f);
  Scalar fr = spoly::eval(f, r0);
  Scalar dfr = spoly::eval(df, r0);
  if (dfr.is_zero()) throw HenselPreconditionFailed("derivative vanishes at the starting point");
  if (!fr.is_zero()) {
    Rational vf = fr.valuation().value();
    Rational vd = dfr.valuation().value();
    if (!(vf > vd * Rational(2))) throw HenselPreconditionFailed("v(f(r0)) <= 2 v(f'(r0))");
  }
  return newton_iterate(f, df, r0);
}

}  // namespace berktree
