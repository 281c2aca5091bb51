#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sceval/errors.hpp"

namespace sceval {

/// Monthly metric series; undefined months carry no value and are skipped
/// consistently by the statistics below.
struct MonthlySeries {
  std::vector<std::optional<double>> values;
  std::string label;
};

/// Population standard deviation over the defined values.
double f1_volatility(const MonthlySeries& series);

/// Mann-Kendall trend statistic over defined pairs. tau-a by default
/// (ties contribute 0, no denominator correction); tau-b behind the flag.
double mann_kendall_tau(const MonthlySeries& series, bool tie_corrected = false);

/// One method's dataset-averaged pillar representatives.
struct PillarVector {
  double f1_mean = 0.0;        // higher is better
  double f1_volatility = 0.0;  // lower is better
  double aurc = 0.0;           // lower is better
  double tau = 0.0;            // higher is better
  std::string method_id;
};

/// Arithmetic mean of each pillar across datasets.
/// per_dataset rows: (f1_mean, f1_volatility, aurc, tau).
PillarVector aggregate_pillars(const std::vector<std::array<double, 4>>& per_dataset,
                               const std::string& method_id);

/// Dominated iff some other entry is at least as good on all four oriented
/// pillars and strictly better on one. Identical vectors are all non-dominated.
std::vector<std::pair<std::string, bool>> pareto_front(
    const std::vector<PillarVector>& entries);

}  // namespace sceval
