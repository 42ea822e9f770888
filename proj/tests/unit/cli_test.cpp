#include <doctest.h>

#include "gafzeros/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

using namespace gafzeros;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gafzeros");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Config(const std::string& name) { return std::string(GAFZEROS_CONFIG_DIR) + "/" + name; }

std::string Temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("gafzeros_cli_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::string Stripped(const std::string& report) {
  json doc = json::parse(report);
  doc.erase("timestamp");
  return doc.dump();
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(FormatNumber(4.0) == "4.0");
  CHECK(FormatNumber(0.1) == "0.1");
  CHECK(FormatNumber(1.0 / 3.0) == "0.3333333333333333");
  CHECK(FormatNumber(1e20) == "1e+20");
}

TEST_CASE("expected count prints 4.0") {
  const auto r = Cli({"intensity", "--ensemble", Config("planar.json"), "--region", "disk:0,0,2", "--expected-count"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "4.0\n");
}

TEST_CASE("malformed configs exit 1 with the field") {
  const auto bad = Temp("bad.json", R"({"variant": "kostlan", "degree": "five"})");
  const auto r = Cli({"sample", "--ensemble", bad});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("ensemble.degree") != std::string::npos);
  const auto syntax = Temp("syntax.json", "{\"variant\": ");
  CHECK(Cli({"sample", "--ensemble", syntax}).code == kExitUsage);
  CHECK(Cli({"sample", "--ensemble", "/nonexistent.json"}).code == kExitUsage);
  CHECK(Cli({"frobnicate"}).code == kExitUsage);
  CHECK(Cli({"tail", "--ensemble", Config("planar.json")}).code == kExitUsage);
  CHECK(Cli({"tail", "--ensemble", Config("planar.json"), "--bump", "1,2", "--lambdas", "1", "--trials", "10"}).code ==
        kExitUsage);
  CHECK(Cli({"intensity", "--ensemble", Config("planar.json"), "--region", "disk:0,0,9", "--expected-count"}).code ==
        kExitUsage);
  CHECK(Cli({"--help"}).code == kExitOk);
}

TEST_CASE("a violated bound exits 2") {
  const std::vector<std::string> args = {"tail", "--ensemble", Config("planar.json"), "--bump", "1,2",
                                         "--lambdas", "0.5", "--trials", "1000", "--seed", "5"};
  CHECK(Cli(args).code == kExitOk);
  auto forced = args;
  forced.insert(forced.end(), {"--prefactor", "1e-6"});
  const auto r = Cli(forced);
  CHECK(r.code == kExitViolation);
  const json doc = json::parse(r.out);
  CHECK(doc["results"]["estimates"][0]["violated"] == true);
}

TEST_CASE("reports embed config and version and ignore worker count") {
  const std::vector<std::string> args = {"hole", "--ensemble", Config("hyperbolic.json"), "--R", "0.4,0.6",
                                         "--trials", "300", "--seed", "17"};
  auto one = args;
  one.insert(one.end(), {"--workers", "1"});
  auto three = args;
  three.insert(three.end(), {"--workers", "3"});
  const auto a = Cli(one);
  const auto b = Cli(three);
  REQUIRE(a.code == kExitOk);
  CHECK(Stripped(a.out) == Stripped(b.out));
  const json doc = json::parse(a.out);
  CHECK(doc["version"] == Version());
  CHECK(doc["config"]["seed"] == 17);
  CHECK(doc["config"]["ensemble"]["variant"] == "hyperbolic");
  CHECK_FALSE(doc["config"].contains("workers"));
}

TEST_CASE("seed defaults to the environment") {
  const std::vector<std::string> args = {"sample", "--ensemble", Config("kostlan5.json"), "--trials", "2"};
  ::setenv("GAFZEROS_SEED", "99", 1);
  const auto env = Cli(args);
  ::unsetenv("GAFZEROS_SEED");
  auto explicit_seed = args;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "99"});
  CHECK(Stripped(env.out) == Stripped(Cli(explicit_seed).out));
  ::setenv("GAFZEROS_SEED", "x9", 1);
  CHECK(Cli(args).code == kExitUsage);
  ::unsetenv("GAFZEROS_SEED");
}

TEST_CASE("zeros and density tables are CSV") {
  const auto z = Cli({"zeros", "--ensemble", Config("kostlan5.json"), "--method", "companion", "--seed", "1"});
  CHECK(z.code == kExitOk);
  CHECK(z.out.starts_with("re,im,multiplicity\n"));
  std::size_t lines = 0;
  for (char c : z.out) lines += c == '\n';
  CHECK(lines == 6);
  const auto plot = (std::filesystem::temp_directory_path() / "gafzeros_cli_test_plot.csv").string();
  const auto d = Cli({"intensity", "--ensemble", Config("hyperbolic.json"), "--region", "disk:0,0,0.5", "--grid",
                      "3x2", "--emit-plot-data", plot});
  CHECK(d.code == kExitOk);
  CHECK(d.out.starts_with("x,y,density\n"));
  CHECK(std::filesystem::exists(plot));
}

TEST_CASE("lemma, rigidity and polynomial lemma runs") {
  const auto l = Cli({"lemma", "--sigma", "0.5,5", "--events", "mass:0.01", "half:1", "sector:0,2,0,1"});
  CHECK(l.code == kExitOk);
  CHECK(json::parse(l.out)["results"]["checks"].size() == 6);
  const auto r = Cli({"rigidity", "--model1", Config("model_a.json"), "--model2", Config("model_b.json"),
                      "--polarize", "4"});
  CHECK(r.code == kExitOk);
  CHECK(json::parse(r.out)["results"]["certificate"]["valid"] == true);
  const auto small = Temp("small.json", R"({"coefficients": [[1, 0], [0, 1]]})");
  CHECK(Cli({"rigidity", "--model1", Config("model_a.json"), "--model2", small}).code == kExitUsage);
  const auto p = Cli({"poly-lemma", "--terms", "1:1:1", "--variables", "2", "--event", "sub:0.1", "--trials",
                      "20000"});
  CHECK(p.code == kExitOk);
  CHECK(json::parse(p.out)["results"]["degree"] == 2);
  CHECK(Cli({"poly-lemma", "--terms", "1:1", "--event", "box:7,8", "--trials", "1000"}).code == kExitUsage);
}
