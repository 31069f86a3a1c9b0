#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nehari/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = nehari::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string example(const std::string& name) { return std::string(NEHARI_SOURCE_DIR) + "/docs/examples/" + name; }

std::filesystem::path scratch() {
  auto d = std::filesystem::temp_directory_path() / "nehari_cli_test";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("classify prints the class") {
  const auto r = run({"classify", "--body", example("square.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "POLYTOPE\n");
  CHECK(r.err.find("config:") != std::string::npos);
  CHECK(run({"classify", "--body", example("strip.json")}).out == "LINE_STRIP\n");
  CHECK(run({"classify", "--body", example("disc.json")}).out == "NON_POLYHEDRAL\n");
}

TEST_CASE("verdict") {
  CHECK(run({"verdict", "--body", example("disc.json")}).out.rfind("FAILS_BY_THEOREM_1\n", 0) == 0);
  CHECK(run({"verdict", "--body", example("square.json")}).out.rfind("OPEN_POLYTOPE\n", 0) == 0);
}

TEST_CASE("witness certificate text") {
  const auto r = run({"witness", "--body", example("disc.json"), "--point", "1,0", "--rho", "0.5"});
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("FOUND\n", 0) == 0);
  const auto pos = r.out.find("max_dist: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 10)) <= 0.2);
}

TEST_CASE("region and domain") {
  const auto r = run({"region", "--body", example("disc.json"), "--supp", example("lens_support.json")});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "BOUNDED");
  CHECK(j["vertices"].size() >= 3);
  const auto d = run({"domain", "--body", example("disc.json"), "--directions", "64"});
  CHECK(d.out.find("exposed points (64 directions): 64") != std::string::npos);
}

TEST_CASE("bump norms") {
  const auto r = run({"bump", "--N", "128", "256", "--pad", "4", "8"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["l1_hat"]["value"].get<double>() == doctest::Approx(1.78829).epsilon(1e-3));
}

TEST_CASE("experiment writes the CSV and reports BLOCKED as success") {
  const auto csv = (scratch() / "square.csv").string();
  const auto js = (scratch() / "square.json").string();
  const auto r = run({"experiment", "--config", example("square_experiment.json"), "--out", csv, "--json", js});
  CHECK(r.code == 0);
  std::ifstream in(csv);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "k,r,l2sq_hat,l1_time,hankel_norm,ratio,analytic_bound,certificates_ok\n5,,,,,,,false\n");
  std::ifstream jin(js);
  const auto j = nlohmann::json::parse(jin);
  CHECK(j["schema_version"] == 1);
  CHECK(j["rows"][0]["status"] == "BLOCKED");
  CHECK(r.err.find("BLOCKED") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"classify"}).code == 2);
  CHECK(run({"classify", "--body", example("square.json"), "--frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--help"}).out.find("experiment") != std::string::npos);

  // Schema errors name the field.
  const auto bad = (scratch() / "bad_body.json").string();
  std::ofstream(bad) << R"({"type": "ball", "center": [0, 0], "radius": "big"})";
  const auto s = run({"classify", "--body", bad});
  CHECK(s.code == 2);
  CHECK(s.err.find("/radius") != std::string::npos);

  const auto cfg = (scratch() / "bad_cfg.json").string();
  std::ofstream(cfg) << R"({"k_sweep": [3, 1]})";
  const auto c = run({"experiment", "--config", cfg});
  CHECK(c.code == 2);
  CHECK(c.err.find("/k_sweep/1") != std::string::npos);

  // Domain errors: missing file, capacity.
  CHECK(run({"classify", "--body", (scratch() / "missing.json").string()}).code == 1);
  const auto cap = run({"hankel", "--body", example("disc.json"), "--center", "1.5,0", "--r", "0.25", "--max-rows", "10"});
  CHECK(cap.code == 1);
  CHECK(cap.err.find("more than 10 rows") != std::string::npos);
}
