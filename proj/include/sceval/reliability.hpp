#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sceval/errors.hpp"

namespace sceval {

/// Risk-coverage curve: prefix risks after sorting by uncertainty
/// (most confident first), plus the mean-of-prefix-risks AURC summary.
struct RCCurve {
  std::vector<std::pair<double, double>> points;  // (coverage, risk)
  double aurc = 0.0;
  std::size_t n = 0;
};

/// records: (uncertainty, prediction correct). Stable sort ascending by
/// uncertainty, ties by original index; risk(k) = #incorrect-in-prefix / k.
RCCurve rc_curve(const std::vector<std::pair<double, bool>>& records);

inline double aurc(const RCCurve& curve) { return curve.aurc; }

/// Mann-Whitney AUROC with average-rank tie handling.
/// scored: (score, y_true); needs at least one positive and one negative.
double auroc(const std::vector<std::pair<double, int>>& scored);

}  // namespace sceval
