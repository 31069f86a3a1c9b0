#include "nehari/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "nehari/body_io.hpp"
#include "nehari/bump.hpp"
#include "nehari/classify.hpp"
#include "nehari/errors.hpp"
#include "nehari/experiment.hpp"
#include "nehari/hankel.hpp"
#include "nehari/region.hpp"

namespace nehari {

using nlohmann::json;

namespace {

struct Common {
  std::string out;
  int verbosity = 0;
  std::uint64_t seed = 0x5EED;
};

void log_config(std::ostream& err, const std::string& sub, const json& cfg) {
  err << "nehari " << sub << " config: " << cfg.dump() << "\n";
}

// Writes text to the output file (atomically) or to `out`.
void deliver(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_file_atomic(path, text);
}

std::string pt(const Vec& v) {
  std::ostringstream s;
  s << std::setprecision(10) << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << ")";
  return s.str();
}

json points_json(const std::vector<Vec>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(vec_to_json(p));
  return a;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hankel operators on Paley-Wiener spaces of convex domains: certificates and ratio experiments", "nehari"};
  app.require_subcommand(1);
  // One option set per subcommand; CLI11 must not share bound variables.
  std::map<const CLI::App*, Common> commons;
  auto add_common = [&](CLI::App* s) {
    Common& c = commons[s];
    s->add_option("-o,--out", c.out, "Output file (default: standard output)");
    s->add_flag("-v,--verbose", c.verbosity, "More diagnostics on standard error");
    s->add_option("--seed", c.seed, "Seed for randomized restarts")->capture_default_str();
  };

  std::string body_path, supp_path, point_text;
  double rho = 0.5;
  int directions = 256;

  auto* domain = app.add_subcommand("domain", "Describe a convex body: kind, bounds, exposed points");
  domain->add_option("--body", body_path, "Body description file")->required();
  domain->add_option("--directions", directions, "Probe directions")->capture_default_str();
  add_common(domain);

  auto* region = app.add_subcommand("region", "Outer polygon of the interaction region (S - omega) ∩ omega");
  region->add_option("--body", body_path, "Domain omega")->required();
  region->add_option("--supp", supp_path, "Fourier support S of the symbol")->required();
  region->add_option("--directions", directions, "Polygon directions")->capture_default_str();
  add_common(region);

  auto* witness = app.add_subcommand("witness", "Certify a small region near a boundary point");
  witness->add_option("--body", body_path, "Domain omega")->required();
  witness->add_option("--point", point_text, "Boundary point y as x,y")->required();
  witness->add_option("--rho", rho, "Target radius")->capture_default_str();
  add_common(witness);

  std::vector<int> bump_N{512, 2048};
  std::vector<double> bump_pad{8, 16};
  int bump_dim = 2;
  auto* bump = app.add_subcommand("bump", "Norms of the smooth bump by two-level FFT synthesis");
  bump->add_option("--N", bump_N, "Coarse and fine grid sizes")->expected(2)->capture_default_str();
  bump->add_option("--pad", bump_pad, "Coarse and fine Fourier half-widths")->expected(2)->capture_default_str();
  bump->add_option("--dim", bump_dim, "Dimension (1 or 2)")->capture_default_str();
  add_common(bump);

  std::vector<std::string> center_texts;
  double bump_r = 0.0;
  std::string matrix_path;
  std::size_t max_rows = 4096;
  bool oversize = false;
  auto* hankel = app.add_subcommand("hankel", "Discretized Hankel matrix of a bump sum and its norm");
  hankel->add_option("--body", body_path, "Domain omega")->required();
  hankel->add_option("--center", center_texts, "Bump center x,y (repeatable)")->required();
  hankel->add_option("--r", bump_r, "Common bump radius")->required();
  hankel->add_option("--matrix-out", matrix_path, "Dump the matrix in the grid binary format");
  hankel->add_option("--max-rows", max_rows, "Row cap")->capture_default_str();
  hankel->add_flag("--allow-oversize", oversize, "Proceed past the row cap");
  add_common(hankel);

  std::string json_out;
  std::string config_path;
  auto* experiment = app.add_subcommand("experiment", "Nehari ratio sweep over k");
  experiment->add_option("-c,--config", config_path, "Experiment config file")->required();
  experiment->add_option("--json", json_out, "Also write the JSON report here");
  add_common(experiment);

  auto* classify_cmd = app.add_subcommand("classify", "Planar classification: polytope, polyhedron, strip or not");
  classify_cmd->add_option("--body", body_path, "Body description file")->required();
  add_common(classify_cmd);

  auto* verdict = app.add_subcommand("verdict", "Does the Nehari theorem fail for omega?");
  verdict->add_option("--body", body_path, "Body description file")->required();
  add_common(verdict);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }
  const Common& common = commons.at(app.get_subcommands().front());

  try {
    if (*domain) {
      const ConvexBody body = load_body(body_path);
      log_config(err, "domain", {{"body", body_to_json(body)}, {"directions", directions}});
      std::ostringstream s;
      s << "kind: " << to_string(body.kind()) << "\n";
      s << "dim: " << body.dim() << "\n";
      s << "diameter: " << diameter(body) << "\n";
      if (body.dim() == 2) {
        const auto ex = exposed_points(body, equiangular_directions(directions));
        s << "exposed points (" << directions << " directions): " << ex.points.size() << "\n";
        s << "unbounded directions: " << ex.unbounded_directions.size() << "\n";
        if (common.verbosity > 0)
          for (const auto& p : ex.points.points) s << "  " << pt(p) << "\n";
      }
      deliver(common.out, s.str(), out);
      return 0;
    }

    if (*region) {
      const ConvexBody omega = load_body(body_path);
      const ConvexBody supp = load_body(supp_path);
      log_config(err, "region",
                 {{"body", body_to_json(omega)}, {"supp", body_to_json(supp)}, {"directions", directions}});
      const auto poly = outer_polygon(d_region(omega, supp), directions);
      json j = {{"status", to_string(poly.status)}, {"vertices", points_json(poly.vertices)}};
      if (poly.status == PolygonStatus::Empty) {
        j["farkas_value"] = poly.farkas_value;
        j["farkas_residual"] = poly.farkas_residual;
      }
      if (poly.chebyshev_center) {
        j["chebyshev_center"] = vec_to_json(*poly.chebyshev_center);
        j["chebyshev_radius"] = poly.chebyshev_radius;
      }
      deliver(common.out, j.dump(2) + "\n", out);
      return 0;
    }

    if (*witness) {
      const ConvexBody omega = load_body(body_path);
      const Vec y = parse_point(point_text);
      log_config(err, "witness", {{"body", body_to_json(omega)}, {"point", vec_to_json(y)}, {"rho", rho}});
      const auto c = find_witness(omega, y, rho);
      std::ostringstream s;
      s << std::setprecision(10);
      if (c.found) {
        s << "FOUND\n";
        s << "y: " << pt(c.y) << "\nrho: " << c.rho << "\nz: " << pt(c.z) << "\ns: " << c.s << "\nt: " << c.t
          << "\nmax_dist: " << c.max_dist << "\n";
      } else {
        s << "NOT-FOUND\nbest max_dist: " << c.max_dist << "\ncandidates tried: " << c.candidates_tried << "\n";
      }
      deliver(common.out, s.str(), out);
      return 0;
    }

    if (*bump) {
      log_config(err, "bump", {{"N", bump_N}, {"pad", bump_pad}, {"dim", bump_dim}});
      const auto n = bump_norms(BumpProfile{bump_dim}, {{bump_N[0], bump_pad[0]}, {bump_N[1], bump_pad[1]}});
      auto est = [](const NormEstimate1& e) { return json{{"value", e.value}, {"error", e.error}}; };
      const json j = {{"dim", n.dim},
                      {"l1_hat", est(n.l1_hat)},
                      {"l2sq_hat", est(n.l2sq_hat)},
                      {"l2sq_time", est(n.l2sq_time)},
                      {"l1_time", est(n.l1_time)},
                      {"l1_weighted", est(n.l1_weighted)},
                      {"b0", est(n.b0)},
                      {"plancherel_mismatch", n.plancherel_mismatch},
                      {"reliable", n.reliable()}};
      deliver(common.out, j.dump(2) + "\n", out);
      return 0;
    }

    if (*hankel) {
      const ConvexBody omega = load_body(body_path);
      std::vector<BumpSpec> bumps;
      for (const auto& t : center_texts) bumps.push_back({parse_point(t), bump_r});
      HankelOptions opts;
      opts.max_rows = max_rows;
      opts.allow_oversize = oversize;
      json centers = json::array();
      for (const auto& b : bumps) centers.push_back(vec_to_json(b.center));
      log_config(err, "hankel",
                 {{"body", body_to_json(omega)}, {"centers", centers}, {"r", bump_r}, {"max_rows", max_rows},
                  {"allow_oversize", oversize}, {"seed", common.seed}});
      const FourierSymbol phi(BumpProfile{omega.dim()}, bumps);
      std::vector<RegionSpec> regions;
      for (const auto& b : bumps) regions.push_back(d_region(omega, ConvexBody::ball(b.center, b.r)));
      const HankelMatrix M = build_hankel(phi, omega, regions, opts);
      const auto e = op_norm(M, 1e-8, 20000, common.seed);
      if (!matrix_path.empty()) M.save(matrix_path);
      const json j = {{"rows", M.rows()},          {"h", M.h},
                      {"sigma_max", e.sigma_max},  {"hs_norm", e.hs_norm},
                      {"iterations", e.iterations}, {"converged", e.converged},
                      {"residual", e.residual},    {"method", e.method},
                      {"per_bump_l1_hat", phi.l1() / static_cast<double>(bumps.size())}};
      deliver(common.out, j.dump(2) + "\n", out);
      return 0;
    }

    if (*experiment) {
      ExperimentConfig cfg = load_config(config_path);
      if (experiment->count("--seed")) cfg.seed = common.seed;
      if (!common.out.empty()) cfg.csv_path = common.out;
      if (!json_out.empty()) cfg.json_path = json_out;
      log_config(err, "experiment", config_to_json(cfg));
      const auto rep = run_ratio_sweep(cfg, common.verbosity > 0 ? &err : nullptr);
      if (cfg.csv_path.empty()) out << report_csv(rep);
      else emit_report(rep, ReportFormat::Csv, cfg.csv_path);
      if (!cfg.json_path.empty()) emit_report(rep, ReportFormat::Json, cfg.json_path);
      for (const auto& r : rep.rows)
        if (r.status != RowStatus::Ok) err << "k=" << r.k << " " << to_string(r.status) << ": " << r.reason << "\n";
      err << "largest certified lower bound: " << rep.largest_lower_bound << " (k=" << rep.largest_lower_bound_k
          << ")\n";
      return 0;
    }

    if (*classify_cmd) {
      const ConvexBody body = load_body(body_path);
      log_config(err, "classify", {{"body", body_to_json(body)}});
      const auto c = classify(body);
      std::ostringstream s;
      s << to_string(c.kind) << "\n";
      if (common.verbosity > 0) {
        s << "evidence: " << c.evidence << (c.heuristic ? " [heuristic]" : "") << "\n";
        if (c.kind == ShapeClass::LineStrip)
          s << "direction: " << pt(c.direction) << "\nbeta: " << c.beta << "\nalpha: " << c.alpha << "\n";
        for (const auto& h : c.halflines) s << "half-line: " << pt(h.origin) << " + t " << pt(h.direction) << "\n";
      }
      deliver(common.out, s.str(), out);
      return 0;
    }

    if (*verdict) {
      const ConvexBody body = load_body(body_path);
      log_config(err, "verdict", {{"body", body_to_json(body)}});
      const auto v = nehari_verdict(body);
      std::ostringstream s;
      s << to_string(v.kind) << "\n" << "reason: " << v.reason << "\n";
      for (const auto& e : v.evidence) s << "evidence: " << e << "\n";
      deliver(common.out, s.str(), out);
      return 0;
    }
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace nehari
