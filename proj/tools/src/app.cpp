#include "berktree/cli/app.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <gmpxx.h>

#include "berktree/cli/report.hpp"
#include "berktree/parse.hpp"

namespace berktree::cli {

namespace {

struct Config {
  long p = 0;
  std::string poly;
  std::vector<std::string> coeffs;
  int iterate = 1;
  int level = 1;
  int max_level = 6;
  int probe_level = 1;
  int precision = 64;
  std::string format = "json";
  std::string out;
  std::string point;
  std::string tree_in;
  bool oracle = true;
};

Poly make_poly(const Config& c, int precision) {
  if (c.p < 2 || mpz_probab_prime_p(mpz_class(c.p).get_mpz_t(), 25) == 0) {
    throw InputError("--p must be a prime, got " + std::to_string(c.p));
  }
  if (c.poly.empty() == c.coeffs.empty()) throw InputError("give exactly one of --poly and --coeffs");
  auto tower = std::make_shared<FieldTower>(c.p, precision);
  SPoly f = c.poly.empty() ? parse_coefficients(*tower, c.coeffs) : parse_poly(*tower, c.poly);
  Poly P(tower, spoly::trimmed(f));
  if (P.degree() < 2) throw InputError("polynomial must have degree at least 2");
  return P;
}

Rational parse_rational(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
  try {
    std::size_t used = 0;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      long long n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(n);
    }
    long long n = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    long long d = std::stoll(s.substr(slash + 1), &used);
    if (used != s.size() - slash - 1 || d == 0) throw std::invalid_argument(s);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw InputError("bad rational \"" + s + "\"");
  }
}

// "Ball(<scalar>, <rational>)", "<scalar>" for a classical point, or "infinity".
BerkPoint parse_point(FieldTower& T, const std::string& text) {
  if (text == "infinity" || text == "inf") return BerkPoint::infinity();
  const std::string head = "Ball(";
  if (text.rfind(head, 0) != 0) return BerkPoint::finite(parse_scalar(T, text));
  const auto comma = text.rfind(',');
  if (comma == std::string::npos || text.back() != ')') throw InputError("expected Ball(center, radius): " + text);
  Scalar center = parse_scalar(T, text.substr(head.size(), comma - head.size()));
  return BerkPoint::ball(center, parse_rational(text.substr(comma + 1, text.size() - comma - 2)));
}

json header(const std::string& command, const Config& c, const Poly& P, int precision) {
  return {{"version", kVersion},
          {"command", command},
          {"p", c.p},
          {"poly", P.str()},
          {"degree", P.degree()},
          {"precision", precision}};
}

// Runs a check whose failure to complete should not sink the report.
json guarded(const std::function<json()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    return {{"skipped", e.what()}};
  }
}

std::string cmd_analyze(const Config& c, int N) {
  Poly P = make_poly(c, N);
  BasePoint B = base_point(P);
  json crit = json::array();
  for (const auto& r : critical_points(P)) crit.push_back({{"value", r.value.str()}, {"multiplicity", r.multiplicity}});
  json j = header("analyze", c, P, N);
  j["base_point"] = point_json(B.point);
  j["simple"] = B.simple;
  j["tame"] = is_tame(P);
  j["critical_points"] = crit;
  return j.dump(2) + "\n";
}

std::string cmd_tree(const Config& c, int N) {
  Poly P = make_poly(c, N);
  TreeFamily fam(P);
  const DynTree& t = fam.tree(c.level);
  if (c.format == "dot") return to_dot(t);
  json j = header("tree", c, P, N);
  j["level"] = c.level;
  j["tower"] = tower_json(P.tower());
  j["tree"] = tree_json(t);
  return j.dump(2) + "\n";
}

std::string cmd_curvature(const Config& c, int N) {
  Poly P = make_poly(c, N);
  TreeFamily fam(P);
  const DynTree& t = fam.tree(c.level);
  TreeMeasure nu = crucial_curvature(P, c.iterate, t);
  json j = header("curvature", c, P, N);
  j["iterate"] = c.iterate;
  j["level"] = c.level;
  j["measure"] = measure_json(t, nu);
  j["total_mass"] = total_mass(nu).str();
  j["z_set"] = z_set(P, c.iterate, t);
  if (c.oracle) {
    j["checks"] = {{"oracle_equal", guarded([&] { return json(pruned(crucial_curvature_oracle(P, c.iterate, t)) == pruned(nu)); })}};
  }
  return j.dump(2) + "\n";
}

std::string cmd_barycenter(const Config& c, int N) {
  Poly P = make_poly(c, N);
  TreeFamily fam(P);
  const DynTree& t = fam.tree(c.level);
  TreeMeasure nu = crucial_curvature(P, c.iterate, t);
  json j = header("barycenter", c, P, N);
  j["iterate"] = c.iterate;
  j["level"] = c.level;
  j["barycenter"] = barycenter_json(t, barycenter(t, nu));
  j["measure"] = measure_json(t, nu);
  return j.dump(2) + "\n";
}

json identity_json(const Poly& P, int j, const BerkPoint& x) {
  return guarded([&] {
    IdentityCheck ic = identity_check(P, j, x);
    json e = {{"point", x.str()}, {"lhs", ic.lhs.str()}, {"rhs", ic.rhs.str()}, {"equal", ic.equal}};
    if (ic.explicit_lhs) e["explicit_lhs"] = ic.explicit_lhs->str();
    return e;
  });
}

std::string cmd_minresloc(const Config& c, int N) {
  Poly P = make_poly(c, N);
  MinResLocResult r = min_res_loc(P, c.iterate, c.max_level);
  json j = header("minresloc", c, P, N);
  j.update(minresloc_json(r));
  j["iterate"] = c.iterate;
  j["max_level"] = c.max_level;
  std::vector<BerkPoint> pts{r.a};
  if (r.segment) pts.push_back(r.b);
  pts.push_back(BerkPoint::ball(Scalar::zero(P.tower().base()), Rational(0)));
  json samples = json::array(), ident = json::array();
  for (const auto& x : pts) {
    samples.push_back({{"point", x.str()}, {"value", ord_res_at(P, c.iterate, x).str()}});
    ident.push_back(identity_json(P, c.iterate, x));
  }
  j["ordres_samples"] = samples;
  j["checks"] = {{"identity_check", ident}};
  return j.dump(2) + "\n";
}

std::string cmd_equidist(const Config& c, int N) {
  Poly P = make_poly(c, N);
  TreeFamily fam(P);
  EquidistReport r = equidist_report(fam, c.iterate, c.max_level, c.probe_level);
  if (c.format == "csv") return equidist_csv(r);
  json j = header("equidist", c, P, N);
  j.update(equidist_json(r));
  if (!r.tame) j["warning"] = "NotTame: p does not exceed the degree";
  return j.dump(2) + "\n";
}

std::string cmd_certify(const Config& c, int N) {
  Poly P = make_poly(c, N);
  if (c.point.empty()) throw InputError("certify needs --point");
  BerkPoint x = parse_point(P.tower(), c.point);
  if (!x.is_ball()) throw InputError("certify works at type II points");
  json j = header("certify", c, P, N);
  j["iterate"] = c.iterate;
  j["depth"] = depth_json(depth_report(P, c.iterate, x));
  j["ord_res"] = ord_res_at(P, c.iterate, x).str();
  j["checks"] = {{"identity_check", identity_json(P, c.iterate, x)}};
  return j.dump(2) + "\n";
}

// Re-ingests a stored tree and answers a retraction query against it.
std::string cmd_retract(const Config& c) {
  if (c.tree_in.empty() || c.point.empty()) throw InputError("retract needs --tree-in and --point");
  std::ifstream in(c.tree_in);
  if (!in) throw InputError("cannot read " + c.tree_in);
  json stored;
  try {
    stored = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed tree file: ") + e.what());
  }
  auto tower = tower_from_json(stored.at("tower"));
  DynTree t = tree_from_json(*tower, stored.at("tree"));
  BerkPoint x = parse_point(*tower, c.point);
  json j = {{"version", kVersion}, {"command", "retract"}, {"point", x.str()}};
  j["retraction"] = point_json(t.retract(x));
  j["in_tree"] = t.contains(x);
  return j.dump(2) + "\n";
}

}  // namespace

int default_precision() {
  if (const char* env = std::getenv("BERKTREE_PRECISION")) {
    try {
      int n = std::stoi(env);
      if (n >= 8) return n;
    } catch (const std::logic_error&) {
    }
  }
  return 64;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  c.precision = default_precision();
  CLI::App app{"Dynamical trees, crucial curvature and minimal resultant loci of p-adic polynomials", "berktree"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--p", c.p, "residue characteristic (a prime)");
  app.add_option("--poly", c.poly, "polynomial in z, e.g. \"10*z^3 - 3*z^2\"");
  app.add_option("--coeffs", c.coeffs, "coefficients, constant term first")->delimiter(',');
  app.add_option("--iterate,-j", c.iterate, "iterate j")->check(CLI::PositiveNumber);
  app.add_option("--level,-n", c.level, "tree level n")->check(CLI::NonNegativeNumber);
  app.add_option("--max-level", c.max_level, "level cap")->check(CLI::PositiveNumber);
  app.add_option("--probe-level", c.probe_level, "probe level s for equidist")->check(CLI::PositiveNumber);
  app.add_option("--precision", c.precision, "p-adic working precision")->check(CLI::Range(8, 4096));
  app.add_option("--format", c.format, "json, dot or csv")->check(CLI::IsMember({"json", "dot", "csv"}));
  app.add_option("--out", c.out, "write the report here instead of stdout");
  app.add_option("--point", c.point, "Ball(center, radius-valuation)");
  app.add_option("--tree-in", c.tree_in, "tree JSON written by the tree command");
  app.add_flag("!--no-oracle", c.oracle, "skip the Laplacian cross-check");

  std::string command;
  for (const char* name : {"analyze", "tree", "curvature", "barycenter", "minresloc", "equidist", "certify", "retract"}) {
    app.add_subcommand(name)->callback([&command, name] { command = name; });
  }
  app.get_subcommand("analyze")->description("base point, simplicity, tameness and critical points");
  app.get_subcommand("tree")->description("the dynamical tree of level n (json or dot)");
  app.get_subcommand("curvature")->description("crucial curvature of P^j on the tree of level n");
  app.get_subcommand("barycenter")->description("barycenter of the crucial curvature");
  app.get_subcommand("minresloc")->description("minimal resultant locus of P^j with certificates");
  app.get_subcommand("equidist")->description("closed-ball discrepancies against deg/d^s (json or csv)");
  app.get_subcommand("certify")->description("depths, semistability and ordRes at --point");
  app.get_subcommand("retract")->description("retract --point onto a stored tree");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kBadInput;
  }
  if ((command == "tree" && c.format == "csv") || (command == "equidist" && c.format == "dot") ||
      (command != "tree" && command != "equidist" && c.format != "json")) {
    err << "error: --format " << c.format << " is not available for " << command << "\n";
    return kBadInput;
  }

  try {
    std::string report;
    if (command == "retract") {
      report = cmd_retract(c);
    } else {
      std::function<std::string(const Config&, int)> f;
      if (command == "analyze") f = cmd_analyze;
      if (command == "tree") f = cmd_tree;
      if (command == "curvature") f = cmd_curvature;
      if (command == "barycenter") f = cmd_barycenter;
      if (command == "minresloc") f = cmd_minresloc;
      if (command == "equidist") f = cmd_equidist;
      if (command == "certify") f = cmd_certify;
      report = with_precision_retry(c.precision, [&](int N) { return f(c, N); });
    }
    if (c.out.empty()) {
      out << report;
    } else {
      std::ofstream file(c.out, std::ios::binary);
      if (!(file << report)) {
        err << "error: cannot write " << c.out << "\n";
        return kBadInput;
      }
    }
    return kOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const NotStabilized& e) {
    err << "not stabilized: " << e.what() << "\n" << e.bracketing << "\n";
    return kRefused;
  } catch (const WildCase& e) {
    err << "wild case: " << e.what() << "\n";
    return kRefused;
  } catch (const LevelBoundExceeded& e) {
    err << "level bound: " << e.what() << "\n";
    return kRefused;
  } catch (const DegreeBoundExceeded& e) {
    err << "degree bound: " << e.what() << "\n";
    return kRefused;
  } catch (const PrecisionExhausted& e) {
    err << "precision exhausted after retries: " << e.what() << "\n";
    return kRefused;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace berktree::cli
