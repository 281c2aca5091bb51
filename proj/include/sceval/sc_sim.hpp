#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sceval/errors.hpp"
#include "sceval/scorers.hpp"
#include "sceval/stream.hpp"

namespace sceval {

enum class RejectMethod { SingleCutoff, Band };

struct RejectionConfig {
  int quota_rho = 0;                    // samples/month, >= 1
  RejectMethod method = RejectMethod::SingleCutoff;
  std::string score_name;
  std::vector<double> coverage_grid;    // for aurc_f1_star; default if empty
  std::optional<std::size_t> window_months;  // rolling calibration window; unbounded if unset
};

/// 0.05 step over [0.05, 1.0], 20 points.
std::vector<double> default_coverage_grid();

struct MonthResult {
  int month_index = 0;
  double threshold_low = 0.0;               // cutoff c, or band lower bound
  std::optional<double> threshold_high;     // band upper bound only
  std::size_t target_quota = 0;             // T after capping
  bool quota_capped = false;                // T exceeded the pool and was capped
  std::size_t rejections = 0;               // realized rho*_i
  std::size_t retained_count = 0;
  std::optional<double> retained_f1;        // undefined when F1 is vacuous
  std::optional<double> baseline_f1;
};

struct SimulationTrace {
  int quota_rho = 0;
  std::vector<MonthResult> months;  // months i >= 2 of the stream
};

/// Cut-off such that the T largest pool scores sit at or above it;
/// the rejection rule downstream is strictly greater-than.
double ood_threshold(const std::vector<double>& pool, std::size_t T);

/// Band [l, u] spanning the T most-uncertain pool scores. T = 0 keeps the
/// (1.0, 0.0) initialization, an empty band. Rejection rule is l <= s <= u.
std::pair<double, double> softmax_thresholds(const std::vector<double>& pool,
                                             std::size_t T);

/// Rolling-calibration rejection simulation: seed the pool with month 1's
/// scores, then for each later month fit the threshold on the pool, reject,
/// record realized rejections and pre/post F1, and append the month's scores.
/// T for month i is i * rho, capped at the pool size.
SimulationTrace run_posthoc_simulation(const TemporalStream& stream,
                                       const RejectionConfig& cfg,
                                       const OrientationRegistry& orientations);

/// F1 over the non-rejected records (positive class = malware).
/// nullopt when TP+FP+FN = 0 or nothing is retained.
std::optional<double> monthly_f1(const MonthBatch& batch,
                                 const std::set<std::string>& rejected);

/// Percentage of months where abstention strictly improves F1; months with
/// an undefined F1 on either side are excluded entirely.
double benefit_fraction(const SimulationTrace& trace);

/// Mean signed deviation of realized rejections from the quota.
double rejection_bias(const SimulationTrace& trace, int rho);

/// Population standard deviation of the realized rejection series.
double rejection_volatility(const SimulationTrace& trace);

/// Operational F1-risk integrated over the coverage grid: per grid point c
/// the monthly quota is ceil((1-c) * pool size), risk = 1 - mean retained F1;
/// trapezoid over c, normalized by the 0.95 span, times 100.
double aurc_f1_star(const TemporalStream& stream, const RejectionConfig& cfg,
                    const OrientationRegistry& orientations);

}  // namespace sceval
