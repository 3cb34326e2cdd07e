#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polymmp/cli.hpp"
#include "polymmp/errors.hpp"
#include "polymmp/io.hpp"
#include "polymmp/render.hpp"

using namespace polymmp;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
  return std::string(POLYMMP_FIXTURES) + "/" + name;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> class_names(const json& doc) {
  std::vector<std::string> out;
  for (const auto& c : doc["classes"]) out.push_back(c["interval"].get<std::string>());
  return out;
}

}  // namespace

TEST_CASE("parse round-trips through emit for every fixture") {
  for (const char* name : {"ex_toric1.json", "ex_toric2.json", "ex_horo1.json",
                           "ex_horo2.json", "ex_horo3.json", "ex_horo4.json",
                           "ex_horo5.json"}) {
    const auto embedding = parse_input(fixture(name));
    const std::string emitted = emit_input(embedding);
    const auto reparsed = parse_input_text(emitted);
    CHECK(reparsed.rays == embedding.rays);
    CHECK(reparsed.fan == embedding.fan);
    CHECK(reparsed.divisor == embedding.divisor);
    CHECK(reparsed.space.m_basis() == embedding.space.m_basis());
    CHECK(reparsed.space.parabolic() == embedding.space.parabolic());
    CHECK(emit_input(reparsed) == emitted);
  }
}

TEST_CASE("run subcommand emits the expected class strings") {
  const auto result =
      run_cli({"run", "--input", fixture("ex_toric2.json"), "--format", "json"});
  REQUIRE(result.code == 0);
  const json doc = json::parse(result.out);
  CHECK(doc["version"] == 1);
  CHECK(class_names(doc) ==
        std::vector<std::string>{"[0,1/2)", "{1/2}", "(1/2,3/2)", "[3/2,2)", "{2}"});
  CHECK(doc["steps"].size() == 3);
  CHECK(doc["steps"][0]["kind"] == "flip");
  CHECK(doc["steps"][1]["kind"] == "divisorial");
  CHECK(doc["steps"][1]["dropped_rows"] == json::array({2}));
  CHECK(doc["steps"][2]["kind"] == "mori_fibration");
  CHECK(doc["eps_max"] == "2");
  CHECK(doc["fingerprint"].get<std::string>().size() > 0);

  // The flag-variety target example: steps divisorial at 1, fibration at 4/3.
  const auto horo1 = run_cli({"run", "--input", fixture("ex_horo1.json")});
  REQUIRE(horo1.code == 0);
  const json doc1 = json::parse(horo1.out);
  CHECK(class_names(doc1) == std::vector<std::string>{"[0,1)", "[1,4/3)", "{4/3}"});
  CHECK(doc1["steps"][0]["kind"] == "divisorial");
  CHECK(doc1["steps"][0]["epsilon"] == "1");
  CHECK(doc1["steps"][1]["kind"] == "mori_fibration");
  CHECK(doc1["steps"][1]["epsilon"] == "4/3");
}

TEST_CASE("text format lists classes and steps") {
  const auto result =
      run_cli({"run", "--input", fixture("ex_horo5.json"), "--format", "text"});
  REQUIRE(result.code == 0);
  CHECK(result.out.find("[0,1)") != std::string::npos);
  CHECK(result.out.find("{5/4}") != std::string::npos);
  CHECK(result.out.find("flip at 1") != std::string::npos);
  CHECK(result.out.find("Mori fibration at 5/4") != std::string::npos);
}

TEST_CASE("classes and fiber subcommands") {
  const auto classes =
      run_cli({"classes", "--input", fixture("ex_horo4.json"), "--format", "json"});
  REQUIRE(classes.code == 0);
  CHECK(class_names(json::parse(classes.out)) ==
        std::vector<std::string>{"[0,1)", "{1}", "(1,5/3)", "{5/3}"});

  const auto fiber =
      run_cli({"fiber", "--input", fixture("ex_toric2.json"), "--format", "json"});
  REQUIRE(fiber.code == 0);
  const json doc = json::parse(fiber.out);
  CHECK(doc["terminal"]["eps_max"] == "2");
  CHECK(doc["terminal"]["fiber"]["rows"] == json::array({1, 5, 6}));
  CHECK(doc["terminal"]["fiber"]["picard"] == 1);
}

TEST_CASE("check subcommand reports flags and witnesses") {
  const auto check =
      run_cli({"check", "--input", fixture("ex_toric1.json"), "--format", "json"});
  REQUIRE(check.code == 0);
  const json doc = json::parse(check.out);
  CHECK(doc["q_gorenstein"] == true);
  CHECK(doc["q_factorial"] == true);
  CHECK(doc["picard"] == 3);
  CHECK(doc["genericity"]["q_factorial_generic"] == false);
  bool witness = false;
  for (const auto& w : doc["genericity"]["q_factorial_witnesses"])
    if (w == json::array({3, 4, 5, 6})) witness = true;
  CHECK(witness);

  const auto deep =
      run_cli({"check", "--input", fixture("ex_toric2.json"), "--format", "json"});
  CHECK(json::parse(deep.out)["genericity"]["q_factorial_generic"] == true);
}

TEST_CASE("oracle cross-check and error exit codes") {
  CHECK(run_cli({"classes", "--input", fixture("ex_horo5.json"), "--oracle", "both"}).code ==
        0);
  CHECK(run_cli({"run", "--input", fixture("ex_horo3.json"), "--oracle", "brute"}).code == 0);

  // Usage errors.
  CHECK(run_cli({"run"}).code == 1);
  CHECK(run_cli({"frobnicate", "--input", "x"}).code == 1);

  // Schema error: malformed document.
  const auto dir = std::filesystem::temp_directory_path() / "polymmp_cli_test";
  std::filesystem::create_directories(dir);
  const auto bad_json = dir / "bad.json";
  std::ofstream(bad_json) << "{ not json";
  CHECK(run_cli({"run", "--input", bad_json.string()}).code == 2);

  const auto missing = dir / "missing.json";
  std::ofstream(missing) << "{\"version\": 1}";
  CHECK(run_cli({"run", "--input", missing.string()}).code == 2);

  // Invariant violation: non-primitive ray.
  std::ifstream src(fixture("ex_horo1.json"));
  std::stringstream buf;
  buf << src.rdbuf();
  std::string text = buf.str();
  const auto nonprim = dir / "nonprim.json";
  {
    std::string t = text;
    const auto pos = t.find("[\"1\"], [\"-1\"]");
    REQUIRE(pos != std::string::npos);
    t.replace(pos, 13, "[\"2\"], [\"-1\"]");
    std::ofstream(nonprim) << t;
  }
  CHECK(run_cli({"run", "--input", nonprim.string()}).code == 3);

  // Ampleness failure: a divisor coefficient pushed until the polytope dies.
  const auto non_ample = dir / "nonample.json";
  {
    std::string t = text;
    const auto pos = t.find("\"g_stable\": [\"1\",\"2\"]");
    REQUIRE(pos != std::string::npos);
    t.replace(pos, 21, "\"g_stable\": [\"-3\",\"2\"]");
    std::ofstream(non_ample) << t;
  }
  CHECK(run_cli({"run", "--input", non_ample.string()}).code == 4);
}

TEST_CASE("render writes per-class frames with a CSV fallback") {
  const auto dir = std::filesystem::temp_directory_path() / "polymmp_render_test";
  std::filesystem::remove_all(dir);
  const auto result = run_cli(
      {"render", "--input", fixture("ex_horo5.json"), "--out", dir.string()});
  REQUIRE(result.code == 0);
  CHECK(std::filesystem::exists(dir / "vertices.csv"));
  // Four classes: three triangles plus the terminal point frame.
  for (int i = 0; i < 4; ++i)
    CHECK(std::filesystem::exists(dir / ("frame_" + std::to_string(i) + ".svg")));

  std::ifstream csv(dir / "vertices.csv");
  std::stringstream content;
  content << csv.rdbuf();
  CHECK(content.str().find("(0,1/4)") != std::string::npos);  // terminal point

  // 3D input renders through the declared top-view projection.
  const auto dir2 = std::filesystem::temp_directory_path() / "polymmp_render_toric";
  std::filesystem::remove_all(dir2);
  const auto toric = run_cli(
      {"render", "--input", fixture("ex_toric1.json"), "--out", dir2.string()});
  REQUIRE(toric.code == 0);
  CHECK(std::filesystem::exists(dir2 / "frame_0.svg"));
}

TEST_CASE("emitted classes match across sweep and brute oracles byte for byte") {
  for (const char* name : {"ex_horo1.json", "ex_horo4.json"}) {
    const auto sweep = run_cli({"run", "--input", fixture(name), "--format", "json"});
    const auto brute =
        run_cli({"run", "--input", fixture(name), "--format", "json", "--oracle", "brute"});
    REQUIRE(sweep.code == 0);
    REQUIRE(brute.code == 0);
    CHECK(sweep.out == brute.out);
  }
}
