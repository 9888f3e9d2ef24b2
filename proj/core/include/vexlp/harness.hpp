#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vexlp/exponents.hpp"
#include "vexlp/grid.hpp"
#include "vexlp/verifiers.hpp"

namespace vexlp::harness {

struct GridSpec {
  int dimension = 1;
  double half_width = 4.0;
  int points = 512;
};

struct ExponentSpec {
  ExponentFamily family = ExponentFamily::Constant;
  std::vector<double> params;
};

/// kind in {indicator, gaussian, power_clip, noise}; noise is band-limited
/// white noise at level params[0], drawn from the experiment seed.
struct FunctionSpec {
  std::string kind;
  std::vector<double> params;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  GridSpec grid;
  std::vector<ExponentSpec> exponents;
  std::vector<FunctionSpec> corpus;
  std::vector<int> v_range;
  std::vector<double> h_cells;      // translation offsets, in cells
  std::vector<double> q_cells;      // cube sides, in cells
  std::vector<double> m_values;
  std::vector<double> r_values;
  std::vector<double> clip_levels;
  double norm_tol = 1e-10;
  std::size_t pair_budget = 20000;
  double plog_threshold = 10.0;
  std::string output_dir = "out";
  bool svg = false;
  std::string raw_text;  // exact config bytes, hashed into the summary
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

/// One CSV row. The config columns come first, then the fixed data columns
/// lhs, rhs_m_term, rhs_decay_term, slack, ratio, envelope, fitted_c;
/// absent fields serialize as empty cells.
struct ReportRow {
  std::string experiment, subcommand, exponent, function, gamma_variant;
  std::optional<int> v;
  std::optional<double> h, q_side, m, r, k, x_index;
  std::optional<int> hypothesis_ok;  // 0 when the P^log hypothesis fails
  std::optional<int> resolved;       // counterexample clip resolution flag
  std::optional<double> lhs, rhs_m_term, rhs_decay_term, slack, ratio,
      envelope, fitted_c;
};

struct ReportSummary {
  std::size_t rows = 0;
  std::optional<double> min_slack;  // over rows with the hypothesis intact
  std::optional<double> max_ratio;
  std::map<std::string, double> fitted_constants;
  std::string config_hash;
};

struct ReportBundle {
  std::vector<ReportRow> rows;
  ReportSummary summary;
};

std::vector<std::string> subcommands();

std::string config_hash(const std::string& raw);

/// Recompute the summary from rows (used both when writing and to validate
/// a loaded bundle).
ReportSummary summarize(const std::string& subcommand,
                        const std::vector<ReportRow>& rows,
                        const std::string& hash);

ReportBundle run_bundle(const std::string& subcommand,
                        const ExperimentConfig& cfg);

void write_bundle(const ReportBundle& bundle, const ExperimentConfig& cfg,
                  const std::string& subcommand);

/// Reads <dir>/<subcommand>.csv + summary JSON; throws if the stored summary
/// does not match one recomputed from the rows.
ReportBundle load_bundle(const std::string& dir,
                         const std::string& subcommand);

/// Runs the subcommand, writes the bundle, returns the process exit code:
/// 0 ok, 1 when an inequality violation was detected.
int run(const std::string& subcommand, const ExperimentConfig& cfg);

/// Corpus and exponent construction (shared with tests).
std::vector<SampledFunction> build_corpus(const Grid& grid,
                                          const std::vector<FunctionSpec>& specs,
                                          std::uint64_t seed);
std::string function_name(const FunctionSpec& spec);

/// Thread cap from VEXLP_THREADS (default: hardware concurrency).
int thread_cap();

}  // namespace vexlp::harness
