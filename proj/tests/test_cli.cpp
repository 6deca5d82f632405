#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "berktree/cli/app.hpp"
#include "support.hpp"

using json = nlohmann::json;
using namespace berktree::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kQuartic = "1/(4*p^2)*z^4 - (p-1)/(3*p^3)*z^3 + 1/(2*p^3)*z^2";
const std::string kCubic = "10*z^3 - 3*z^2";

}  // namespace

TEST_CASE("analyze") {
  const Result z = invoke({"--p", "5", "--poly", "z^2", "analyze"});
  REQUIRE(z.code == kOk);
  const json jz = json::parse(z.out);
  CHECK(jz["simple"] == true);
  CHECK(jz["base_point"]["text"] == "Ball(0, 0)");

  const Result q = invoke({"--p", "5", "--poly", kQuartic, "analyze"});
  REQUIRE(q.code == kOk);
  const json jq = json::parse(q.out);
  CHECK(jq["simple"] == false);
  CHECK(jq["tame"] == true);
  CHECK(jq["base_point"]["rv"] == "-1");
  CHECK(jq["base_point"]["center"] == "0");
}

TEST_CASE("bad input exits with 3") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--p", "5", "--poly", "3.5*z^2", "analyze"},
           {"--p", "5", "--poly", "2*q*z^2", "analyze"},
           {"--p", "4", "--poly", "z^2", "analyze"},
           {"--p", "5", "--poly", "z", "analyze"},
           {"--p", "5", "--poly", "z^2", "--format", "dot", "analyze"},
           {"--p", "5", "--poly", "z^2", "--point", "Ball(0", "certify"},
           {"--p", "5", "--poly", "z^2", "frobnicate"}}) {
    const Result r = invoke(args);
    CHECK(r.code == kBadInput);
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("tree exports") {
  const Result dot = invoke({"--p", "5", "--poly", kQuartic, "-n", "1", "--format", "dot", "tree"});
  REQUIRE(dot.code == kOk);
  std::size_t vertices = 0;
  std::istringstream lines(dot.out);
  for (std::string line; std::getline(lines, line);) {
    if (line.find("[label=") != std::string::npos && line.find(" -- ") == std::string::npos) ++vertices;
  }
  CHECK(vertices == 6);

  const Result js = invoke({"--p", "5", "--poly", kQuartic, "-n", "1", "tree"});
  REQUIRE(js.code == kOk);
  const json t = json::parse(js.out)["tree"];
  CHECK(t["vertex_set"].size() == 6);
  CHECK(t["leaves"].size() == 3);
}

TEST_CASE("curvature of z^d is a single atom at the Gauss point") {
  for (const char* e : {"z^2", "z^3"}) {
    const Result r = invoke({"--p", "5", "--poly", e, "-n", "2", "curvature"});
    REQUIRE(r.code == kOk);
    const json m = json::parse(r.out)["measure"];
    REQUIRE(m.size() == 1);
    CHECK(m[0]["mass"] == "1");
    CHECK(m[0]["point"] == "Ball(0, 0)");
  }
}

TEST_CASE("minresloc") {
  const Result r = invoke({"--p", "5", "--poly", kCubic, "-j", "2", "--max-level", "4", "minresloc"});
  REQUIRE(r.code == kOk);
  const json j = json::parse(r.out);
  CHECK(j["minresloc"]["kind"] == "singleton");
  CHECK(j["minresloc"]["point"]["text"] == "Ball(0, -1/2)");
  CHECK(j["minresloc"]["ord_res"] == "27");

  // One level is not enough to pin down the segment for j = 1.
  const Result short_run = invoke({"--p", "5", "--poly", kCubic, "-j", "1", "--max-level", "1", "minresloc"});
  CHECK(short_run.code == kRefused);
  CHECK(short_run.err.find("Ball(0, -1/2)") != std::string::npos);
}

TEST_CASE("certify and equidist") {
  const Result c = invoke({"--p", "5", "--poly", kCubic, "-j", "2", "--point", "Ball(0,-1/2)", "certify"});
  REQUIRE(c.code == kOk);
  const json jc = json::parse(c.out);
  CHECK(jc.dump().find("\"stable\":true") != std::string::npos);

  const Result e = invoke({"--p", "5", "--poly", kCubic, "--max-level", "3", "--format", "csv", "equidist"});
  REQUIRE(e.code == kOk);
  CHECK(e.out.rfind("n,leaf,target,mass,discrepancy", 0) == 0);
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::string> args{"--p", "5", "--poly", kQuartic, "-n", "2", "curvature"};
  const Result a = invoke(args), b = invoke(args);
  REQUIRE(a.code == kOk);
  CHECK(a.out == b.out);
}

TEST_CASE("stored trees answer retractions like the live tree") {
  const auto path = std::filesystem::temp_directory_path() / "berktree_roundtrip.json";
  REQUIRE(invoke({"--p", "5", "--poly", kCubic, "-n", "2", "--out", path.string(), "tree"}).code == kOk);

  const bt::Poly P = bt::family(3, 5);
  const berktree::DynTree live = berktree::build_tree(P, 2);
  struct Probe {
    const char* text;
    berktree::Rational c, rv;
  };
  for (const Probe& q : {Probe{"Ball(0,3)", 0, 3}, Probe{"Ball(3/10,2)", {3, 10}, 2}, Probe{"Ball(1,1)", 1, 1},
                         Probe{"Ball(0,-3)", 0, -3}, Probe{"Ball(2/5,0)", {2, 5}, 0}}) {
    const Result r = invoke({"--p", "5", "--poly", kCubic, "--tree-in", path.string(), "--point", q.text, "retract"});
    REQUIRE(r.code == kOk);
    CHECK(json::parse(r.out)["retraction"]["text"] == live.retract(bt::ball(P, q.c, q.rv)).str());
  }
  CHECK(invoke({"--p", "5", "--poly", kCubic, "--point", "Ball(0,3)", "retract"}).code == kBadInput);
  std::filesystem::remove(path);
}
