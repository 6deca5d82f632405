#include "berktree/cli/report.hpp"

#include <iomanip>
#include <sstream>

#include "berktree/errors.hpp"
#include "berktree/parse.hpp"

namespace berktree::cli {

namespace {

std::string decimal(const Rational& q) {
  std::ostringstream os;
  os << std::setprecision(6) << q.to_double();
  return os.str();
}

Rational rational_from(const json& j) {
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw InputError("bad rational \"" + s + "\"");
  }
}

json hole_json(const Hole& h) {
  return {{"direction", h.to_infinity ? "infinity" : "finite"}, {"depth", h.depth}, {"count", h.count}, {"fixed", h.fixed}};
}

}  // namespace

json tower_json(const FieldTower& T) {
  json stages = json::array();
  for (std::size_t i = 0; i < T.size(); ++i) stages.push_back({{"E", T.stage(i)->E}, {"f", T.stage(i)->f}});
  return {{"p", T.p()}, {"precision", T.precision()}, {"stages", stages}};
}

std::shared_ptr<FieldTower> tower_from_json(const json& j) {
  auto T = std::make_shared<FieldTower>(j.at("p").get<long>(), j.at("precision").get<int>());
  const auto& st = j.at("stages");
  for (std::size_t i = 1; i < st.size(); ++i) {
    const int E = st[i].at("E").get<int>(), f = st[i].at("f").get<int>();
    const Stage* s = T->ensure(T->top(), E, f);
    if (s->E != E || s->f != f || static_cast<std::size_t>(s->index) != i) {
      throw InputError("tower description does not replay");
    }
  }
  return T;
}

json scalar_json(const Scalar& x) {
  mpq_class q;
  if (x.state() != Scalar::State::InexactZero && x.to_rational(q)) return q.get_str();
  switch (x.state()) {
    case Scalar::State::ExactZero:
      return {{"zero", "exact"}};
    case Scalar::State::InexactZero:
      return {{"zero", "inexact"}, {"stage", x.stage()->index}, {"abs", x.raw_k()}};
    case Scalar::State::Value:
      break;
  }
  json digits = json::array();
  for (const auto& c : x.raw_coeffs()) digits.push_back(c.get_str());
  return {{"stage", x.stage()->index}, {"k", x.raw_k()}, {"rel", x.raw_rel()}, {"digits", digits}, {"text", x.str()}};
}

Scalar scalar_from_json(FieldTower& T, const json& j) {
  if (j.is_string()) return parse_scalar(T, j.get<std::string>());
  if (j.contains("zero")) {
    if (j.at("zero") == "exact") return Scalar::zero(T.base());
    return Scalar::inexact_zero(T.stage(j.at("stage").get<std::size_t>()), j.at("abs").get<std::int64_t>());
  }
  const std::size_t idx = j.at("stage").get<std::size_t>();
  if (idx >= T.size()) throw InputError("scalar refers to a missing stage");
  std::vector<mpz_class> c;
  for (const auto& d : j.at("digits")) c.emplace_back(d.get<std::string>());
  return Scalar::from_raw(T.stage(idx), j.at("k").get<std::int64_t>(), j.at("rel").get<int>(), std::move(c));
}

json point_json(const BerkPoint& x) {
  if (x.is_infinity()) return {{"type", "infinity"}, {"text", x.str()}};
  if (x.is_finite()) return {{"type", "finite"}, {"center", scalar_json(x.center())}, {"text", x.str()}};
  return {{"type", "ball"}, {"center", scalar_json(x.center())}, {"rv", x.rv().str()}, {"text", x.str()}};
}

BerkPoint point_from_json(FieldTower& T, const json& j) {
  const std::string kind = j.at("type").get<std::string>();
  if (kind == "infinity") return BerkPoint::infinity();
  if (kind == "finite") return BerkPoint::finite(scalar_from_json(T, j.at("center")));
  if (kind == "ball") return BerkPoint::ball(scalar_from_json(T, j.at("center")), rational_from(j.at("rv")));
  throw InputError("unknown point kind \"" + kind + "\"");
}

json tree_json(const DynTree& t) {
  json nodes = json::array();
  for (int id = 0; id < static_cast<int>(t.size()); ++id) {
    const TreeNode& n = t.node(id);
    json e = {{"id", id},
              {"point", point_json(n.point)},
              {"parent", n.parent},
              {"children", n.children},
              {"valency", t.valency(id)},
              {"fiber_degree", n.fiber_degree},
              {"level", n.level}};
    e["edge_length"] = n.edge_length ? json(n.edge_length->str()) : json(nullptr);
    nodes.push_back(std::move(e));
  }
  return {{"level", t.level}, {"simple", t.simple}, {"nodes", nodes}, {"vertex_set", t.vertex_set()},
          {"leaves", t.leaves()}};
}

DynTree tree_from_json(FieldTower& T, const json& j) {
  DynTree t;
  t.level = j.at("level").get<int>();
  t.simple = j.at("simple").get<bool>();
  const auto& nodes = j.at("nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const int id = t.insert(point_from_json(T, nodes[i].at("point")));
    t.set_fiber_degree(id, nodes[i].at("fiber_degree").get<int>());
    const int level = nodes[i].at("level").get<int>();
    if (level >= 0) t.set_level(id, level);
  }
  if (t.size() != nodes.size()) throw InputError("stored tree is not closed under joins");
  return t;
}

json measure_json(const DynTree& t, const TreeMeasure& m) {
  json out = json::array();
  for (const auto& [id, w] : m) {
    if (w.is_zero()) continue;
    out.push_back({{"node", id}, {"point", t.point(id).str()}, {"mass", w.str()}, {"approx", decimal(w)}});
  }
  return out;
}

json barycenter_json(const DynTree& t, const BarycenterResult& bc) {
  if (!bc.segment) return {{"kind", "singleton"}, {"node", bc.a}, {"point", point_json(t.point(bc.a))}};
  return {{"kind", "segment"},
          {"nodes", {bc.a, bc.b}},
          {"points", {point_json(t.point(bc.a)), point_json(t.point(bc.b))}},
          {"length", rho(t.point(bc.a), t.point(bc.b)).str()}};
}

json depth_json(const DepthReport& r) {
  json holes = json::array();
  for (const auto& h : r.holes) holes.push_back(hole_json(h));
  return {{"point", r.point.str()}, {"iterate", r.j},          {"D", r.D},
          {"local_degree", r.local_degree}, {"holes", holes}, {"semistable", r.semistable},
          {"stable", r.stable}};
}

json minresloc_json(const MinResLocResult& r) {
  json loc = {{"kind", r.segment ? "segment" : "singleton"},
              {"ord_res", r.ord_res.str()},
              {"method", r.method},
              {"levels_used", r.levels_used},
              {"stop_reason", r.stop_reason}};
  if (r.segment) {
    loc["points"] = {point_json(r.a), point_json(r.b)};
  } else {
    loc["point"] = point_json(r.a);
  }
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(depth_json(c));
  json probes = json::array();
  for (const auto& p : r.probes) {
    probes.push_back({{"from", p.from.str()},
                      {"direction", p.direction.str()},
                      {"point", p.point.str()},
                      {"ord_res", p.ord_res.str()},
                      {"slope", p.slope.str()},
                      {"passes", p.passes}});
  }
  json hist = json::array();
  for (const auto& h : r.history) {
    json e = {{"level", h.n}, {"kind", h.bc.segment ? "segment" : "singleton"}, {"leaf_end", h.leaf_end}};
    e["points"] = h.bc.segment ? json{h.a.str(), h.b.str()} : json{h.a.str()};
    e["hausdorff"] = h.hausdorff ? json(h.hausdorff->str()) : json(nullptr);
    hist.push_back(std::move(e));
  }
  return {{"minresloc", loc}, {"certificates", certs}, {"probes", probes}, {"history", hist}};
}

json equidist_json(const EquidistReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"leaf", row.leaf.str()},
                    {"target", row.target.str()},
                    {"mass", row.mass.str()},
                    {"discrepancy", row.discrepancy.str()},
                    {"approx", decimal(row.discrepancy)}});
  }
  json worst = json::array();
  for (std::size_t i = 0; i < r.max_discrepancy.size(); ++i) {
    worst.push_back({{"n", r.s + static_cast<int>(i)},
                     {"max_discrepancy", r.max_discrepancy[i].str()},
                     {"approx", decimal(r.max_discrepancy[i])}});
  }
  return {{"iterate", r.j}, {"probe_level", r.s}, {"tame", r.tame}, {"rows", rows}, {"max", worst}};
}

std::string equidist_csv(const EquidistReport& r) {
  std::ostringstream os;
  os << "n,leaf,target,mass,discrepancy,discrepancy_approx\n";
  for (const auto& row : r.rows) {
    os << row.n << ",\"" << row.leaf.str() << "\"," << row.target.str() << ',' << row.mass.str() << ','
       << row.discrepancy.str() << ',' << decimal(row.discrepancy) << '\n';
  }
  return os.str();
}

}  // namespace berktree::cli
