#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "nehari/body_io.hpp"
#include "nehari/errors.hpp"
#include "nehari/experiment.hpp"

using namespace nehari;
using nlohmann::json;

namespace {

BumpNorms fake_norms() {
  BumpNorms n;
  n.dim = 2;
  n.l1_hat.value = 1.7882877731736506;
  n.l2sq_hat.value = n.l2sq_time.value = 1.5661110093041266;
  n.l1_time.value = 2.6869;
  n.l1_weighted.value = 3.2316;
  n.b0.value = n.l1_hat.value;
  return n;
}

// The closed form written out with pi, independent of ball_volume_root.
double bound_oracle(double k, double R) {
  const auto n = fake_norms();
  const double i1 = std::sqrt(M_PI) * R * std::sqrt(k * n.l2sq_time.value);
  return k * n.l2sq_hat.value / (n.l1_hat.value * (i1 + k / R * n.l1_weighted.value));
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    out.push_back(cells);
  }
  return out;
}

const ExperimentReport& small_disc_report() {
  static const ExperimentReport rep = [] {
    ExperimentConfig c;
    c.k_sweep = {1, 2};
    return run_ratio_sweep(c);
  }();
  return rep;
}

}  // namespace

TEST_CASE("analytic bound") {
  const auto n = fake_norms();
  for (double k : {1.0, 3.0, 16.0})
    for (double R : {0.3, 1.0, 7.0}) CHECK(analytic_bound(n, 2, k, R) == doctest::Approx(bound_oracle(k, R)).epsilon(1e-13));

  SUBCASE("limits") {
    CHECK(analytic_bound(n, 2, 1, 1e-9) < 1e-8);
    CHECK(analytic_bound(n, 2, 1e14, 1.0) == doctest::Approx(analytic_limit(n, 1.0)).epsilon(1e-5));
    CHECK(analytic_limit(n, 2.0) == doctest::Approx(2 * n.l2sq_hat.value / (n.l1_hat.value * n.l1_weighted.value)));
  }
  SUBCASE("growth with optimal R") {
    const auto Rs = RSweep{}.values();
    REQUIRE(Rs.size() == 32);
    CHECK(Rs.front() == doctest::Approx(0.1));
    CHECK(Rs.back() == doctest::Approx(100));
    const double b1 = best_analytic_bound(n, 2, 1, Rs).value;
    const double b16 = best_analytic_bound(n, 2, 16, Rs).value;
    CHECK(b16 / b1 >= 1.5);
  }
  SUBCASE("refuses unreliable norms") {
    auto bad = n;
    bad.l1_weighted.error = 10.0;
    CHECK_THROWS_AS(analytic_bound(bad, 2, 1, 1.0), std::domain_error);
  }
  CHECK_THROWS_AS(analytic_bound(n, 2, 1, 0.0), std::invalid_argument);
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const auto c = config_from_json(json::object());
    CHECK(c.k_sweep == std::vector<int>{1, 2, 4, 8});
    CHECK(c.omega.kind() == BodyKind::Ball);
    CHECK(c.r_sweep.count == 32);
  }
  SUBCASE("round trip") {
    json j = {{"k_sweep", {1, 3}}, {"omega", body_to_json(fixtures::square())}, {"slack", 0.05}, {"seed", 7}};
    const auto c = config_from_json(j);
    const auto back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(back.seed == 7);
    CHECK(back.omega.kind() == BodyKind::HPolyhedron);
  }
  SUBCASE("errors name the field") {
    auto field_of = [](const json& j) {
      try {
        config_from_json(j);
      } catch (const SchemaError& e) {
        return e.field();
      }
      return std::string("<none>");
    };
    CHECK(field_of({{"bogus", 1}}) == "/bogus");
    CHECK(field_of({{"k_sweep", {2, 2}}}) == "/k_sweep/1");
    CHECK(field_of({{"k_sweep", "many"}}) == "/k_sweep");
    CHECK(field_of({{"grid", {{"bump_resolutions", {{{"N", 500}, {"pad", 8}}, {{"N", 2048}, {"pad", 16}}}}}}}) ==
          "/grid/bump_resolutions/0/N");
    CHECK(field_of({{"grid", {{"bump_resolutions", {{{"N", 512}, {"pad", 8}}, {{"N", 16384}, {"pad", 16}}}}}}}) ==
          "/grid/bump_resolutions/1/N");
    CHECK(field_of({{"omega", {{"type", "ball"}, {"center", {0, 0}}}}}) == "/omega/radius");
    CHECK(field_of({{"R_sweep", {{"min", -1}}}}) == "/R_sweep/min");
  }
}

TEST_CASE("report emission") {
  SUBCASE("empty sweep") {
    ExperimentReport empty;
    CHECK(report_csv(empty) == "k,r,l2sq_hat,l1_time,hankel_norm,ratio,analytic_bound,certificates_ok\n");
    CHECK(report_json(empty)["schema_version"] == kReportSchemaVersion);
  }
  SUBCASE("blocked rows have empty numerics") {
    ExperimentReport rep;
    ExperimentRow row;
    row.k = 5;
    row.status = RowStatus::Blocked;
    rep.rows.push_back(row);
    CHECK(report_csv(rep).substr(report_csv(rep).find('\n') + 1) == "5,,,,,,,false\n");
    CHECK(report_json(rep)["rows"][0]["ratio"].is_null());
  }
  SUBCASE("one row, fields in order, CSV and JSON agree") {
    ExperimentReport rep;
    ExperimentRow row;
    row.k = 3;
    row.status = RowStatus::Ok;
    row.r = 0.1 / 3;
    row.l2sq_hat = 1.0 / 7;
    row.l1_time = std::sqrt(2.0);
    row.hankel_norm = M_PI * 1e-3;
    row.ratio = 1.0 / 3;
    row.analytic_bound = 2.0 / 9;
    row.certificates_ok = true;
    rep.rows.push_back(row);
    const auto cells = split_csv(report_csv(rep));
    REQUIRE(cells.size() == 2);
    REQUIRE(cells[1].size() == 8);
    const json j = json::parse(report_json(rep).dump());
    const char* keys[] = {"k", "r", "l2sq_hat", "l1_time", "hankel_norm", "ratio", "analytic_bound"};
    for (int i = 0; i < 7; ++i) {
      CHECK(cells[0][i] == keys[i]);
      CHECK(std::stod(cells[1][i]) == j["rows"][0][keys[i]].get<double>());
    }
    CHECK(cells[1][7] == "true");
  }
  SUBCASE("atomic file output") {
    const auto dir = std::filesystem::temp_directory_path() / "nehari_emit";
    std::filesystem::create_directories(dir);
    ExperimentReport rep;
    emit_report(rep, ReportFormat::Csv, (dir / "r.csv").string());
    CHECK(std::filesystem::exists(dir / "r.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "r.csv.tmp"));
    CHECK_THROWS(emit_report(rep, ReportFormat::Json, (dir / "missing" / "r.json").string()));
  }
}

TEST_CASE("disc sweep over k = 1, 2") {
  const auto& rep = small_disc_report();
  REQUIRE(rep.rows.size() == 2);
  for (const auto& row : rep.rows) {
    CHECK(row.status == RowStatus::Ok);
    CHECK(row.certificates_ok);
    CHECK(row.dominates);
    CHECK(row.ratio >= row.analytic_bound * (1 - row.tolerance));
    // ||H|| <= r^2 ||b̂||_1 (per block, up to discretization).
    CHECK(row.hankel_norm <= row.r * row.r * rep.norms.l1_hat.value * 1.02);
    CHECK(row.l2sq_hat == doctest::Approx(row.k * row.r * row.r * rep.norms.l2sq_hat.value).epsilon(1e-3));
  }
  CHECK(rep.rows[0].r == rep.rows[1].r);
  CHECK(rep.rows[1].ratio >= rep.rows[0].ratio * 0.98);
  REQUIRE(rep.rows[1].cert.block_max);
  CHECK(rep.rows[1].cert.block_max->status == BlockCheck::Passed);
  CHECK(rep.largest_lower_bound_k == 2);

  // CSV and JSON describe the same numbers.
  const auto cells = split_csv(report_csv(rep));
  const json j = json::parse(report_json(rep).dump());
  for (int i = 0; i < 2; ++i) {
    CHECK(std::stod(cells[i + 1][5]) == j["rows"][i]["ratio"].get<double>());
    CHECK(std::stod(cells[i + 1][4]) == j["rows"][i]["hankel_norm"].get<double>());
  }
}

TEST_CASE("reproducible output") {
  ExperimentConfig c;
  c.k_sweep = {1};
  CHECK(report_csv(run_ratio_sweep(c)) == report_csv(run_ratio_sweep(c)));
}

TEST_CASE("square blocks at k = 5") {
  ExperimentConfig c;
  c.omega = fixtures::square();
  c.k_sweep = {5};
  const auto rep = run_ratio_sweep(c);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].status == RowStatus::Blocked);
  CHECK_FALSE(rep.rows[0].certificates_ok);
  REQUIRE(rep.rows[0].cert.blocking_pair);
  CHECK(rep.rows[0].reason.find("blocking pair") != std::string::npos);
  CHECK(report_csv(rep).find("5,,,,,,,false") != std::string::npos);
}

TEST_CASE("verdicts") {
  CHECK(nehari_verdict(fixtures::disc()).kind == VerdictKind::Fails);
  CHECK(nehari_verdict(fixtures::stadium()).kind == VerdictKind::Fails);
  CHECK(nehari_verdict(ConvexBody::parabolic_epigraph(2, 1.0)).kind == VerdictKind::Fails);
  CHECK(nehari_verdict(fixtures::square()).kind == VerdictKind::OpenPolytope);
  CHECK(nehari_verdict(ConvexBody::hull_rays({vec2(0, 0)}, {vec2(1, 0), vec2(0, 1)})).kind ==
        VerdictKind::OpenPolyhedron);
  CHECK(nehari_verdict(ConvexBody::ball(Vec::Constant(1, 0.5), 0.5)).kind == VerdictKind::OpenPolytope);

  const auto v = nehari_verdict(fixtures::disc());
  REQUIRE(v.classification);
  REQUIRE(v.classification->exposed_counts.size() == 2);
  CHECK(v.classification->exposed_counts[0] == 64);
  CHECK(v.classification->exposed_counts[1] == 256);

  const auto cone = solid_cone_fixture();
  CHECK(cone.body.dim() == 3);
  CHECK(cone.extreme_points == 1);
  CHECK(cone.infinitely_many_extreme_halflines);
  CHECK(nehari_verdict(cone.body).kind == VerdictKind::Unknown);
  CHECK(support(cone.body, (Vec(3) << 0, 0, -1).finished()) == doctest::Approx(0.0));
}
