#include "sceval/reliability.hpp"

#include <algorithm>
#include <numeric>

namespace sceval {

RCCurve rc_curve(const std::vector<std::pair<double, bool>>& records) {
  if (records.empty()) throw InputError("EmptyInput: rc_curve needs records");
  const std::size_t n = records.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Stable: ties keep original record order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].first < records[b].first;
  });

  RCCurve curve;
  curve.n = n;
  curve.points.reserve(n);
  std::size_t incorrect = 0;
  double risk_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!records[order[k]].second) ++incorrect;
    double risk = static_cast<double>(incorrect) / static_cast<double>(k + 1);
    double coverage = static_cast<double>(k + 1) / static_cast<double>(n);
    curve.points.emplace_back(coverage, risk);
    risk_sum += risk;
  }
  curve.aurc = risk_sum / static_cast<double>(n);
  return curve;
}

double auroc(const std::vector<std::pair<double, int>>& scored) {
  const std::size_t n = scored.size();
  std::size_t n_pos = 0;
  for (const auto& [s, y] : scored) n_pos += (y != 0);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw InputError("SingleClassInput: auroc needs both classes");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scored[a].first < scored[b].first;
  });

  // Average ranks over tie groups; sum ranks of positives.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scored[order[j]].first == scored[order[i]].first) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (scored[order[k]].second != 0) rank_sum_pos += avg_rank;
    i = j;
  }
  double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) *
                                static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace sceval
