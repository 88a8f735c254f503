#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhstab/harness.hpp"
#include "hhstab/radial_solver.hpp"

namespace hhstab {

/// One subject per grid point. Kinds: gelfand_log, whole_space_gelfand,
/// power (g, or g = g_scale * gamma + g_offset), brezis_vazquez (q),
/// gelfand_branch (lambda).
struct SubjectSpec {
  std::string kind;
  std::optional<double> g;
  std::optional<double> g_scale;
  std::optional<double> g_offset;
  std::optional<double> q;
  std::optional<double> lambda;

  std::string name() const;
  RadialProfile build(const ProblemParams& p, const SolverConfig& solver = {}) const;

  nlohmann::json to_json() const;
  static SubjectSpec from_json(const nlohmann::json& j);
};

struct SweepTolerances {
  double residual = 1e-8;
  double growth = 1.05;
  double key_lemma = 1e-8;
  double truncation = 1e-2;
  double eig_rel = 1e-9;
  int ladder_depth = 14;
};

struct SweepConfig {
  std::vector<double> n_grid;
  std::vector<double> alpha_grid;
  std::vector<SubjectSpec> subjects;
  std::vector<std::string> checks;
  SweepTolerances tolerances;
  std::string output_dir = ".";
  /// 0 = hardware concurrency.
  unsigned workers = 0;

  /// Throws std::invalid_argument on an empty grid, an invalid (N, alpha),
  /// an unknown check or a malformed subject.
  void validate() const;

  nlohmann::json to_json() const;
  static SweepConfig from_json(const nlohmann::json& j);
};

/// Check names accepted in SweepConfig::checks, in output order.
const std::vector<std::string>& known_checks();

/// Worker count: flag, else the HHSTAB_WORKERS environment variable, else the config.
unsigned resolve_workers(std::optional<unsigned> flag, const SweepConfig& cfg);

struct SweepRow {
  double n;
  double alpha;
  std::string subject;
  std::string check;
  /// ok, refused or error.
  std::string status;
  double value;
  std::string verdict;
  std::string detail;
};

/// Runs every (grid point, subject) job on the worker pool. Rows are sorted
/// by (N, alpha, subject, check) in config order; failures become error rows.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// RFC-4180 CSV with header "N,alpha,subject,check,status,value,verdict,detail".
std::string sweep_csv(const std::vector<SweepRow>& rows);

nlohmann::json sweep_json(const SweepConfig& cfg, const std::vector<SweepRow>& rows);

/// Writes sweep.csv and sweep.json into cfg.output_dir (created if missing).
void write_sweep(const SweepConfig& cfg, const std::vector<SweepRow>& rows);

/// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

}  // namespace hhstab
