#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ktopos/cli.hpp"
#include "ktopos/errors.hpp"
#include "ktopos/json_io.hpp"

using namespace ktopos;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_json(const std::string& name, const json& j) {
  auto path = std::filesystem::temp_directory_path() / ("ktopos_test_" + name + ".json");
  std::ofstream(path) << j.dump();
  return path.string();
}

}  // namespace

TEST_CASE("JSON round trips") {
  FinPoset v = rooted_vee();
  CHECK(json_io::poset_from_json(json_io::to_json(v)) == v);
  MonotoneMap f = MonotoneMap::create(v, point(), {0, 0, 0});
  CHECK(json_io::map_from_json(json_io::to_json(f)) == f);
  RNElement e = RNElement::from_nodes({{'L', 1}, {'R', 1}, {'L', 2}});
  CHECK(json_io::rn_from_json(json_io::to_json(e)) == e);
  CHECK(json_io::rn_from_json(json_io::to_json(RNElement::top())).is_top());
  ProductUpset s(v, {RNElement::empty(), e, RNElement::top()});
  CHECK(json_io::product_upset_from_json(json_io::to_json(s)) == s);
  Presentation a({"x", "y"}, {parse("x -> y")});
  Presentation b = json_io::presentation_from_json(json_io::to_json(a));
  CHECK(b.generators() == a.generators());
  CHECK(b.relations() == a.relations());
  KripkeModel m(sierpinski(), {{"p", Upset{0b10}}});
  KripkeModel m2 = json_io::kripke_from_json(json_io::to_json(m));
  CHECK(m2.frame() == m.frame());
  CHECK(m2.valuation() == m.valuation());
  auto [p, u] = json_io::upset_from_json(json_io::upset_to_json(v, Upset{0b110}));
  CHECK(p == v);
  CHECK(u.members == 0b110);
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(json_io::poset_from_json(json::object()), FormatError);
  CHECK_THROWS_AS(json_io::poset_from_json(json::parse(R"({"elements": ["a"], "leq": [["a"]]})")), FormatError);
  CHECK_THROWS_AS(json_io::poset_from_json(json::parse(R"({"elements": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]})")),
                  CycleError);
  CHECK_THROWS_AS(json_io::rn_from_json(json::parse(R"({"nodes": [["X", 1]]})")), FormatError);
  CHECK_THROWS_AS(json_io::read_file("/nonexistent/file.json"), FormatError);
}

TEST_CASE("CLI logic commands") {
  Run r = invoke({"--json", "logic", "decide", "p | ~p"});
  CHECK(r.code == cli::kExitOk);
  json j = json::parse(r.out);
  CHECK(j["provable"] == false);
  CHECK(j["countermodel"]["point"].is_string());
  // Global flags may also follow the subcommand.
  Run r2 = invoke({"logic", "decide", "p -> p", "--json"});
  CHECK(json::parse(r2.out)["provable"] == true);
  Run r3 = invoke({"logic", "equiv", "~~~p", "~p"});
  CHECK(r3.out.find("equivalent: true") != std::string::npos);
}

TEST_CASE("CLI exit codes") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"logic", "decide", "p &"}).code == cli::kExitUsage);
  CHECK(invoke({"poset", "show", "/nonexistent.json"}).code == cli::kExitUsage);
  CHECK(invoke({"poset", "show", "@nothing"}).code == cli::kExitUsage);
  CHECK(invoke({"verify", "nosuch"}).code == cli::kExitUsage);
  CHECK(invoke({"--grid", "huge", "verify", "omega"}).code == cli::kExitUsage);
  CHECK(invoke({"--help"}).code == cli::kExitOk);
  CHECK(invoke({"quant", "frobenius", "--poset", "@vee"}).code == cli::kExitVerificationFailed);
  CHECK(invoke({"quant", "frobenius", "--poset", "@chain:3"}).code == cli::kExitOk);
  CHECK(invoke({"quant", "joins", "--poset", "@point", "--control"}).code == cli::kExitOk);
  CHECK(invoke({"quant", "local", "--poset", "@antichain:2"}).code == cli::kExitUsage);
}

TEST_CASE("CLI file inputs") {
  const std::string vee = temp_json("vee", json_io::to_json(rooted_vee()));
  Run r = invoke({"--json", "poset", "upsets", vee});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["count"] == 5);

  Run rt = invoke({"dual", "roundtrip", vee});
  CHECK(rt.code == 0);

  const std::string up = temp_json("up", json_io::upset_to_json(point(), Upset{1}));
  const std::string empty = temp_json("empty", json_io::upset_to_json(point(), Upset{0}));
  Run z = invoke({"--json", "nerve", "pi-connect", "--a", up, "--b", empty});
  REQUIRE(z.code == 0);
  CHECK(json::parse(z.out)["nodes"].size() >= 2);

  const std::string pres = temp_json("pres", json{{"generators", {"x"}}, {"relations", {"~x"}}});
  Run m = invoke({"--json", "nerve", "models", "--presentation", pres, "--poset", "@sigma"});
  CHECK(json::parse(m.out)["count"] == 1);
  Run sh = invoke({"nerve", "sheaf-check", "--presentation", pres, "--poset", vee});
  CHECK(sh.code == 0);

  const std::string psi = temp_json(
      "psi", json_io::to_json(ProductUpset(rooted_vee(), {RNElement::empty(), RNElement::from_nodes({{'L', 1}}),
                                                         RNElement::from_nodes({{'R', 1}})})));
  Run ex = invoke({"--json", "quant", "exists", psi});
  CHECK(json::parse(ex.out)["members"] == json{"a", "b"});
  Run fa = invoke({"--json", "quant", "forall", psi});
  CHECK(json::parse(fa.out)["members"].empty());
}

TEST_CASE("CLI notexact and ladder") {
  Run n = invoke({"--json", "kp", "notexact"});
  REQUIRE(n.code == 0);
  json j = json::parse(n.out);
  CHECK(j["quotient_is_three_chain"] == true);
  CHECK(j["swap_pair"]["hu_equals_hv"] == true);
  Run e = invoke({"ladder", "eval", "~~x"});
  CHECK(e.out.find("{R1,R2}") != std::string::npos);
  Run u = invoke({"--json", "ladder", "utop-search", "--depth", "3"});
  CHECK(json::parse(u.out)["passing"].size() == 3);
}

TEST_CASE("verify reports are deterministic") {
  Run a = invoke({"--json", "--grid", "small", "verify", "omega"});
  Run b = invoke({"--json", "--grid", "small", "verify", "omega"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  json j = json::parse(a.out);
  CHECK(j["reports"][0]["suite"] == "omega");
  CHECK_FALSE(j["reports"][0].contains("wall_seconds"));
  Run t = invoke({"--json", "--grid", "small", "verify", "two-valued", "--timing"});
  CHECK(json::parse(t.out)["reports"][0].contains("wall_seconds"));
  Run s1 = invoke({"--json", "--grid", "small", "--seed", "5", "verify", "soundness"});
  Run s2 = invoke({"--json", "--grid", "small", "--seed", "5", "verify", "soundness"});
  CHECK(s1.out == s2.out);
}
