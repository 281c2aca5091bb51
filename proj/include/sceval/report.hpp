#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sceval/reliability.hpp"
#include "sceval/sc_sim.hpp"
#include "sceval/stability.hpp"
#include "sceval/stream.hpp"

namespace sceval {

/// One row of the pillar table: baseline / reliability / stability metrics
/// for a single (stream, score, rho) combination.
struct MetricsReport {
  std::string method_id;
  std::string dataset_name;
  std::string score_name;
  int rho = 0;

  // Baseline
  std::optional<double> f1_mean;    // percent
  std::optional<double> fnr_mean;   // percent
  std::optional<double> auroc;      // [0,1]; needs prob_positive and both classes

  // Reliability
  double aurc = 0.0;                // raw [0,1]
  double aurc_x100 = 0.0;
  double aurc_f1_star = 0.0;        // percentage points

  // Stability
  std::optional<double> sigma_f1;   // percent
  std::optional<double> tau;
  std::optional<double> bf_star;    // percent
  double delta_rej = 0.0;
  double sigma_rej = 0.0;

  std::optional<bool> pareto_flag;
};

struct RunConfig {
  std::string stream_path;
  std::string method_id = "default";
  std::vector<std::string> score_names;
  std::vector<int> rho_list;
  RejectMethod method = RejectMethod::SingleCutoff;
  std::vector<double> coverage_grid;           // empty = default grid
  std::optional<std::size_t> window_months;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "csv";                  // csv | json
  bool emit_svg = true;
};

/// Runs scorers -> reliability -> simulation -> stability for every
/// (score, rho) combination. Sequential and deterministic.
std::vector<MetricsReport> evaluate(const RunConfig& cfg,
                                    const TemporalStream& stream,
                                    const OrientationRegistry& orientations);

/// Metrics for one (score, rho) pair; building block of evaluate().
MetricsReport evaluate_one(const TemporalStream& stream, const std::string& score_name,
                           int rho, const RunConfig& cfg,
                           const OrientationRegistry& orientations);

/// CSV in pillar order, all floats fixed at 6 decimals, empty cell for
/// undefined values.
std::string render_table(const std::vector<MetricsReport>& reports);
std::string render_table_json(const std::vector<MetricsReport>& reports);

/// Standalone SVG of the risk-coverage polyline; byte-deterministic.
void render_rc_svg(const RCCurve& curve, const std::string& path);

/// Three stacked panels: retained F1, monthly rejections against the quota
/// line, and the F1 delta. Undefined F1 months render as gaps.
void render_temporal_svg(const SimulationTrace& trace, int rho,
                         const std::string& path);

/// Helpers shared with the CLI.
std::vector<std::pair<double, bool>> uncertainty_correctness(
    const TemporalStream& stream, const std::string& score_name,
    const OrientationRegistry& orientations);
MonthlySeries baseline_f1_series(const TemporalStream& stream);
MonthlySeries baseline_fnr_series(const TemporalStream& stream);

std::string format_fixed(double v);  // 6 decimals

}  // namespace sceval
