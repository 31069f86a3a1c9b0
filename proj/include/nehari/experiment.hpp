#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/bump.hpp"
#include "nehari/classify.hpp"
#include "nehari/hankel.hpp"
#include "nehari/region.hpp"

namespace nehari {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kConfigSchemaVersion = 1;

/// Log-spaced cutoffs R.
struct RSweep {
  double min = 0.1;
  double max = 100.0;
  int count = 32;
  std::vector<double> values() const;
};

struct ExperimentConfig {
  ConvexBody omega = ConvexBody::ball(vec2(0, 0), 1.0);
  std::vector<int> k_sweep{1, 2, 4, 8};
  std::vector<Resolution> bump_resolutions{{512, 8}, {2048, 16}};
  HankelOptions hankel;
  int patch_samples = 512;
  int profile_dim = 2;
  RSweep r_sweep;
  SelectionBudget selection;
  double power_tol = 1e-8;
  int power_max_iter = 20000;
  PhiL1Options phi_l1;
  bool block_check = true;
  double block_tol = 1e-6;
  double slack = 0.02;
  std::uint64_t seed = 0x5EED;
  std::string csv_path;
  std::string json_path;
};

/// Parses a config document (docs/config_schema.md). Relative omega file paths
/// are resolved against `base_dir`. Unknown keys are schema errors.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Throws SchemaError on violated invariants (k_sweep increasing, caps).
void validate(const ExperimentConfig& cfg);

/// k L2sq_hat / (L1_hat (c_n R^{n/2} sqrt(k L2sq_time) + (k / R) L1_weighted)).
/// Refuses (std::domain_error) when the norms are not reliable.
double analytic_bound(const BumpNorms& norms, int n, double k, double R);

struct BoundChoice {
  double value = 0.0;
  double R = 0.0;
};
BoundChoice best_analytic_bound(const BumpNorms& norms, int n, double k, const std::vector<double>& Rs);

/// k -> infinity limit at fixed R: R L2sq_hat / (L1_hat L1_weighted).
double analytic_limit(const BumpNorms& norms, double R);

enum class RowStatus { Ok, Blocked, Failed };
const char* to_string(RowStatus s);

struct RowCertificates {
  bool selection_found = false;
  double t = 0.0;
  std::vector<bool> exposed;
  std::optional<std::pair<int, int>> blocking_pair;
  Disjointness disjointness = Disjointness::Inconclusive;
  int pairs_checked = 0;
  double min_margin = 0.0;
  std::optional<BlockMaxReport> block_max;  // absent for a single bump
  bool power_converged = false;
  bool norms_reliable = false;
};

struct ExperimentRow {
  int k = 0;
  RowStatus status = RowStatus::Blocked;
  std::string reason;
  double r = 0.0;
  std::vector<Vec> centers;
  double l2sq_hat = 0.0;      // grid norm of the assembled symbol
  double l1_time = 0.0;       // measured ||φ_k||_1
  double l1_time_rel_error = 0.0;
  double hankel_norm = 0.0;   // max over the block norms
  std::vector<double> block_norms;
  std::vector<double> block_hs_norms;
  std::vector<std::size_t> block_rows;
  double lattice_h = 0.0;
  int phi_l1_samples = 0;
  double ratio = 0.0;
  double analytic_bound = 0.0;
  double best_R = 0.0;
  double tolerance = 0.0;     // composed relative slack for the dominance check
  bool dominates = false;
  RowCertificates cert;
  bool certificates_ok = false;
};

struct ExperimentReport {
  nlohmann::json config;
  BumpNorms norms;
  std::vector<ExperimentRow> rows;
  /// Largest measured ratio over certified rows, with its k (0 when none).
  double largest_lower_bound = 0.0;
  int largest_lower_bound_k = 0;
};

/// Runs the sweep. Progress lines go to `log` when given.
ExperimentReport run_ratio_sweep(const ExperimentConfig& cfg, std::ostream* log = nullptr);

enum class ReportFormat { Csv, Json };

std::string report_csv(const ExperimentReport& report);
nlohmann::json report_json(const ExperimentReport& report);
/// Atomic write; I/O errors propagate unchanged.
void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path);

enum class VerdictKind { Fails, OpenPolytope, OpenPolyhedron, Unknown };
const char* to_string(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::string reason;
  std::optional<Classification> classification;
  std::vector<std::string> evidence;
};

Verdict nehari_verdict(const ConvexBody& omega);

/// Stored annotated fixture (not a decided instance).
struct StoredFixture {
  std::string name;
  ConvexBody body;
  std::string note;
  int extreme_points = 0;
  bool infinitely_many_extreme_halflines = false;
};

/// Solid cone x^2 + y^2 <= z^2, z >= 0, sampled by `rays` generators.
StoredFixture solid_cone_fixture(int rays = 64);

}  // namespace nehari
