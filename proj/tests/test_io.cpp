#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "loopcurv/json_io.hpp"
#include "loopcurv/report.hpp"

using namespace loopcurv;
namespace fs = std::filesystem;

namespace {

const char* kExampleX =
    R"({"components": [[{"freq":1,"kind":"sin","coeff":"1"}],[],[]]})";
const char* kExampleY =
    R"({"components": [[],[{"freq":1,"kind":"sin","coeff":"1"}],[]]})";

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream out(p);
  out << contents;
  return p;
}

#ifdef LOOPCURV_CLI_PATH
int run_cli(const std::string& args, std::string* output = nullptr) {
  const fs::path out = fs::temp_directory_path() / "loopcurv_cli_out.txt";
  const std::string cmd = std::string(LOOPCURV_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(out);
    std::ostringstream ss;
    ss << in.rdbuf();
    *output = ss.str();
  }
  return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("field specs parse to exact loop fields") {
  const LieAlgebraSpec L = su2();
  const LoopField x = parse_field_spec(kExampleX, L);
  CHECK(x == example_field_x());

  const LoopField zero = parse_field_spec(
      R"({"components": [[],[],[]]})", L);
  CHECK(zero.is_zero());

  const LoopField third = parse_field_spec(
      R"({"components": [[],[{"freq":2,"kind":"cos","coeff":"1/3"}],[]]})", L);
  CHECK(third.components[1] ==
        TrigPoly::cosine(2, CCoeff(Coeff(Rat(1, 3)))));
}

TEST_CASE("field spec rejections carry the offending path") {
  const LieAlgebraSpec L = su2();
  auto expect_error = [&](const char* text, const char* needle) {
    try {
      parse_field_spec(text, L);
      FAIL_CHECK("expected InputError for ", text);
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("{not json", "field");
  expect_error(R"({"components": [[],[]],"extra":1})", "unknown key");
  expect_error(R"({"components": [[],[]]})", "expected 3");
  expect_error(
      R"({"components": [[{"freq":1,"kind":"sin","coeff":"0.5"}],[],[]]})",
      "components[0][0]");
  expect_error(
      R"({"components": [[{"freq":-1,"kind":"sin","coeff":"1"}],[],[]]})",
      "negative");
  expect_error(
      R"({"components": [[{"freq":1,"kind":"const","coeff":"1"}],[],[]]})",
      "no frequency");
  expect_error(
      R"({"components": [[{"kind":"sin","coeff":"1"}],[],[]]})", "freq >= 1");
  expect_error(
      R"({"components": [[{"freq":1,"kind":"tan","coeff":"1"}],[],[]]})",
      "kind");
}

TEST_CASE("canonical fields round-trip through JSON") {
  std::mt19937 rng(99);
  const LieAlgebraSpec L = su2();
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  for (int it = 0; it < 12; ++it) {
    std::vector<TrigPoly> comps(3);
    for (auto& p : comps) {
      p = TrigPoly::constant(CCoeff(Coeff(make_rat(num(rng), den(rng)))));
      for (int n = 1; n <= 3; ++n) {
        p += TrigPoly::sine(n, CCoeff(Coeff(make_rat(num(rng), den(rng)))));
        p += TrigPoly::cosine(n, CCoeff(Coeff(make_rat(num(rng), den(rng)))));
      }
    }
    const LoopField f(L, std::move(comps));
    const LoopField back = parse_field_json(field_to_json(f), L);
    CHECK(back == f);
  }
}

TEST_CASE("algebra specs: builtins, inline JSON, validation") {
  CHECK(resolve_algebra("su2") == su2());
  CHECK(resolve_algebra("abelian4") == abelian(4));
  CHECK(resolve_algebra("so3") == so3(Rat(1)));
  CHECK_THROWS_AS(resolve_algebra("abelianx"), InputError);
  CHECK_THROWS_AS(resolve_algebra("nothing"), InputError);

  const char* su2_json = R"({"dim":3,"brackets":[
    {"i":1,"j":2,"k":3,"coeff":"-2"},
    {"i":1,"j":3,"k":2,"coeff":"2"},
    {"i":2,"j":3,"k":1,"coeff":"-2"}]})";
  CHECK(resolve_algebra(su2_json) == su2());

  const fs::path p = temp_file("algebra_su2.json", su2_json);
  CHECK(resolve_algebra("@" + p.string()) == su2());

  // same brackets with one coefficient changed: still a Lie algebra but
  // the basis loses Ad-invariance -> rejected
  CHECK_THROWS_AS(resolve_algebra(R"({"dim":3,"brackets":[
    {"i":1,"j":2,"k":3,"coeff":"-1"},
    {"i":1,"j":3,"k":2,"coeff":"2"},
    {"i":2,"j":3,"k":1,"coeff":"-2"}]})"),
                  InvalidAlgebra);

  CHECK_THROWS_AS(resolve_algebra(R"({"dim":3,"brackets":[
    {"i":1,"j":2,"k":3,"coeff":"-2"},
    {"i":1,"j":2,"k":3,"coeff":"-2"}]})"),
                  InputError);  // duplicate
  CHECK_THROWS_AS(resolve_algebra(R"({"dim":2,"brackets":[
    {"i":2,"j":1,"k":1,"coeff":"1"}]})"),
                  InputError);  // i >= j
}

TEST_CASE("symbol JSON schema is stable") {
  const LieAlgebraSpec L = su2();
  const SobolevParam p(Rat(2), Space::free);
  const ConnectionSymbol c =
      connection_symbol(L, example_field_x(), p, Rat(-2));
  const Json j = connection_to_json(c, "su2", true);
  REQUIRE(j.contains("provenance"));
  for (const char* key :
       {"s", "regime", "space", "sign_convention", "cutoff", "algebra"})
    CHECK(j["provenance"].contains(key));
  REQUIRE(j.contains("symbol"));
  REQUIRE(j["symbol"].contains("terms"));
  REQUIRE(!j["symbol"]["terms"].empty());
  for (const auto& term : j["symbol"]["terms"]) {
    CHECK(term.contains("grade"));
    CHECK(term["grade"].contains("a"));
    CHECK(term["grade"].contains("b"));
    CHECK(term["grade"].contains("value"));
    CHECK(term.contains("parity"));
    CHECK(term.contains("matrix"));
    CHECK(term.contains("exact"));
  }
  CHECK(j.contains("audit"));
}

TEST_CASE("order estimates serialize to csv with fitted values") {
  OrderEstimate e;
  e.slope = -2.0;
  e.intercept = 0.0;
  e.n_min = 2;
  e.n_max = 4;
  e.norms = {{2, 0.25}, {4, 0.0625}};
  const std::string csv = order_estimate_to_csv(e);
  CHECK(csv.rfind("n,norm,fitted\n", 0) == 0);
  CHECK(csv.find("2,") != std::string::npos);
}

#ifdef LOOPCURV_CLI_PATH

TEST_CASE("cli: jacobi-check exit codes") {
  CHECK(run_cli("jacobi-check --algebra su2") == 0);
  CHECK(run_cli("jacobi-check --algebra abelian3") == 0);

  const fs::path bad = temp_file("bad_algebra.json", R"({"dim":3,"brackets":[
    {"i":1,"j":2,"k":3,"coeff":"-1"},
    {"i":1,"j":3,"k":2,"coeff":"2"},
    {"i":2,"j":3,"k":1,"coeff":"-2"}]})");
  CHECK(run_cli("jacobi-check --algebra @" + bad.string()) == 1);
  CHECK(run_cli("jacobi-check --algebra @/nonexistent.json") == 2);
}

TEST_CASE("cli: curvature reproduces the worked example in JSON") {
  const fs::path xf = temp_file("x_field.json", kExampleX);
  const fs::path yf = temp_file("y_field.json", kExampleY);
  std::string out;
  const int code =
      run_cli("curvature --algebra su2 --s 2 --X @" + xf.string() + " --Y @" +
                  yf.string() + " --cutoff -2 --format json",
              &out);
  REQUIRE(code == 0);
  const Json j = Json::parse(out);
  CHECK(j["leading_order"] == "-2");
  bool found = false;
  for (const auto& term : j["symbol"]["terms"]) {
    if (term["grade"]["value"] != "-2") continue;
    found = true;
    CHECK(term["parity"] == 0);
    CHECK(term["exact"] == true);
    const Json& entry = term["matrix"][1][0];  // component (2,1)
    CHECK(entry["const"]["re"] == "8");
    REQUIRE(entry["harmonics"].size() == 1);
    CHECK(entry["harmonics"][0]["freq"] == 2);
    CHECK(entry["harmonics"][0]["cos"]["re"] == "8");
  }
  CHECK(found);
}

TEST_CASE("cli: numeric coefficient mode is flagged in JSON output") {
  // default cutoff at s = 7/2 reaches the power-bracket term, whose field
  // multiplier (1+n^2)^{7/2} is irrational
  const fs::path xf = temp_file("x_field.json", kExampleX);
  std::string out;
  const int code = run_cli(
      "symbols --algebra su2 --s 7/2 --X @" + xf.string() + " --format json",
      &out);
  REQUIRE(code == 0);
  const Json j = Json::parse(out);
  bool numeric_term = false;
  for (const auto& term : j["symbol"]["terms"])
    if (term["exact"] == false) numeric_term = true;
  CHECK(numeric_term);
}

TEST_CASE("cli: input errors exit with code 2") {
  CHECK(run_cli("curvature --algebra su2 --s nonsense --X '{}' --Y '{}'") ==
        2);
  const fs::path xf = temp_file("x_field.json", kExampleX);
  CHECK(run_cli("curvature --algebra su2 --s 2 --X @" + xf.string()) == 2);
  CHECK(run_cli("symbols --algebra su2 --s 1/2 --X @" + xf.string()) == 2);
  CHECK(run_cli("verify-order --s 2 --window 9 7") == 2);
}

TEST_CASE("cli: flipping the sign convention fails the torsion row") {
  std::string out;
  const int code = run_cli("reproduce-paper --plus-convention --format json",
                           &out);
  CHECK(code == 1);
  const Json j = Json::parse(out);
  bool torsion_failed = false;
  for (const auto& r : j["rows"])
    if (r["id"] == "9-sign-convention" && r["pass"] == false)
      torsion_failed = true;
  CHECK(torsion_failed);
}

TEST_CASE("cli: verify-order agrees with the symbol on a quick window") {
  std::string out;
  const int code =
      run_cli("verify-order --s 2 --N 128 --window 16 96 --format json", &out);
  CHECK(code == 0);
  const Json j = Json::parse(out);
  CHECK(j["pass"] == true);
  CHECK(j["symbolic_leading_order"] == "-2");
}

#endif  // LOOPCURV_CLI_PATH
