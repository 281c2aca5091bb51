#include "sceval/sc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>

namespace sceval {

namespace {

struct F1Counts {
  std::size_t tp = 0, fp = 0, fn = 0, retained = 0;
};

std::optional<double> f1_from_counts(const F1Counts& c) {
  if (c.retained == 0) return std::nullopt;
  if (c.tp + c.fp + c.fn == 0) return std::nullopt;  // no positives involved
  return 2.0 * static_cast<double>(c.tp) /
         static_cast<double>(2 * c.tp + c.fp + c.fn);
}

std::vector<double> month_uncertainties(const MonthBatch& batch,
                                        const std::string& score_name,
                                        const OrientationRegistry& orientations) {
  std::vector<double> out;
  out.reserve(batch.records.size());
  for (const auto& r : batch.records) {
    auto it = r.scores.find(score_name);
    if (it == r.scores.end())
      throw InputError("MissingScore: sample '" + r.sample_id +
                       "' in month " + std::to_string(batch.month_index) +
                       " lacks score '" + score_name + "'");
    out.push_back(orientations.to_uncertainty(score_name, it->second));
  }
  return out;
}

// quota_fn(i, pool_size) -> uncapped T for month position i (1-based,
// month 1 seeds the pool and is never simulated).
SimulationTrace simulate_core(
    const TemporalStream& stream, const RejectionConfig& cfg,
    const OrientationRegistry& orientations,
    const std::function<std::size_t(std::size_t, std::size_t)>& quota_fn) {
  if (stream.batches.size() < 2)
    throw InputError("TooFewMonths: simulation needs at least 2 months");

  // Per-month score vectors; the calibration pool is their concatenation,
  // optionally limited to the trailing window.
  std::deque<std::vector<double>> pool_months;
  pool_months.push_back(
      month_uncertainties(stream.batches.front(), cfg.score_name, orientations));

  SimulationTrace trace;
  trace.quota_rho = cfg.quota_rho;

  for (std::size_t p = 1; p < stream.batches.size(); ++p) {
    const MonthBatch& batch = stream.batches[p];
    const std::size_t i = p + 1;  // 1-based month position

    std::vector<double> pool;
    for (const auto& m : pool_months) pool.insert(pool.end(), m.begin(), m.end());

    MonthResult res;
    res.month_index = batch.month_index;
    std::size_t T = quota_fn(i, pool.size());
    if (T > pool.size()) {
      T = pool.size();
      res.quota_capped = true;
    }
    res.target_quota = T;

    auto scores = month_uncertainties(batch, cfg.score_name, orientations);
    std::vector<bool> rejected(scores.size(), false);
    if (cfg.method == RejectMethod::SingleCutoff) {
      // T = 0 rejects nothing; there is no cutoff to fit.
      double c = T > 0 ? ood_threshold(pool, T)
                       : std::numeric_limits<double>::infinity();
      res.threshold_low = c;
      for (std::size_t j = 0; j < scores.size(); ++j)
        if (scores[j] > c) rejected[j] = true;
    } else {
      auto [lo, hi] = softmax_thresholds(pool, T);
      res.threshold_low = lo;
      res.threshold_high = hi;
      for (std::size_t j = 0; j < scores.size(); ++j)
        if (lo <= scores[j] && scores[j] <= hi) rejected[j] = true;
    }

    F1Counts base, kept;
    for (std::size_t j = 0; j < batch.records.size(); ++j) {
      const auto& r = batch.records[j];
      auto tally = [&](F1Counts& c) {
        ++c.retained;
        if (r.y_true == 1 && r.y_pred == 1) ++c.tp;
        else if (r.y_true == 0 && r.y_pred == 1) ++c.fp;
        else if (r.y_true == 1 && r.y_pred == 0) ++c.fn;
      };
      tally(base);
      if (!rejected[j]) tally(kept);
      else ++res.rejections;
    }
    res.retained_count = batch.records.size() - res.rejections;
    res.baseline_f1 = f1_from_counts(base);
    res.retained_f1 = f1_from_counts(kept);
    trace.months.push_back(std::move(res));

    pool_months.push_back(std::move(scores));
    if (cfg.window_months && pool_months.size() > *cfg.window_months)
      pool_months.pop_front();
  }
  return trace;
}

}  // namespace

std::vector<double> default_coverage_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  grid.back() = 1.0;
  return grid;
}

double ood_threshold(const std::vector<double>& pool, std::size_t T) {
  if (T < 1 || T > pool.size())
    throw InputError("QuotaExceedsPool: T=" + std::to_string(T) + ", pool=" +
                     std::to_string(pool.size()));
  std::vector<double> sorted(pool);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted[T - 1];
}

std::pair<double, double> softmax_thresholds(const std::vector<double>& pool,
                                             std::size_t T) {
  if (T > pool.size())
    throw InputError("QuotaExceedsPool: T=" + std::to_string(T) + ", pool=" +
                     std::to_string(pool.size()));
  double lo = 1.0, hi = 0.0;  // T = 0 keeps the empty band
  std::vector<double> sorted(pool);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (std::size_t k = 0; k < T; ++k) {
    lo = std::min(lo, sorted[k]);
    hi = std::max(hi, sorted[k]);
  }
  return {lo, hi};
}

SimulationTrace run_posthoc_simulation(const TemporalStream& stream,
                                       const RejectionConfig& cfg,
                                       const OrientationRegistry& orientations) {
  if (cfg.quota_rho < 1) throw InputError("quota_rho must be >= 1");
  std::size_t rho = static_cast<std::size_t>(cfg.quota_rho);
  return simulate_core(stream, cfg, orientations,
                       [rho](std::size_t i, std::size_t) { return i * rho; });
}

std::optional<double> monthly_f1(const MonthBatch& batch,
                                 const std::set<std::string>& rejected) {
  std::set<std::string> ids;
  for (const auto& r : batch.records) ids.insert(r.sample_id);
  for (const auto& id : rejected)
    if (!ids.count(id))
      throw InputError("UnknownRejectedId: '" + id + "' not in month " +
                       std::to_string(batch.month_index));
  F1Counts c;
  for (const auto& r : batch.records) {
    if (rejected.count(r.sample_id)) continue;
    ++c.retained;
    if (r.y_true == 1 && r.y_pred == 1) ++c.tp;
    else if (r.y_true == 0 && r.y_pred == 1) ++c.fp;
    else if (r.y_true == 1 && r.y_pred == 0) ++c.fn;
  }
  return f1_from_counts(c);
}

double benefit_fraction(const SimulationTrace& trace) {
  std::size_t defined = 0, improved = 0;
  for (const auto& m : trace.months) {
    if (!m.retained_f1 || !m.baseline_f1) continue;
    ++defined;
    if (*m.retained_f1 > *m.baseline_f1) ++improved;
  }
  if (defined == 0)
    throw InputError("NoDefinedMonths: benefit_fraction has no defined F1 pairs");
  return 100.0 * static_cast<double>(improved) / static_cast<double>(defined);
}

double rejection_bias(const SimulationTrace& trace, int rho) {
  if (trace.months.empty()) throw InputError("empty trace");
  double sum = 0.0;
  for (const auto& m : trace.months)
    sum += static_cast<double>(m.rejections) - static_cast<double>(rho);
  return sum / static_cast<double>(trace.months.size());
}

double rejection_volatility(const SimulationTrace& trace) {
  if (trace.months.empty()) throw InputError("empty trace");
  double mean = 0.0;
  for (const auto& m : trace.months) mean += static_cast<double>(m.rejections);
  mean /= static_cast<double>(trace.months.size());
  double var = 0.0;
  for (const auto& m : trace.months) {
    double d = static_cast<double>(m.rejections) - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(trace.months.size()));
}

double aurc_f1_star(const TemporalStream& stream, const RejectionConfig& cfg,
                    const OrientationRegistry& orientations) {
  std::vector<double> grid =
      cfg.coverage_grid.empty() ? default_coverage_grid() : cfg.coverage_grid;
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()) ||
      grid.front() <= 0.0 || grid.back() != 1.0)
    throw InputError("coverage_grid must be ascending within (0,1] and end at 1.0");

  std::vector<double> risks;
  risks.reserve(grid.size());
  for (double c : grid) {
    auto trace = simulate_core(
        stream, cfg, orientations, [c](std::size_t, std::size_t pool_size) {
          return static_cast<std::size_t>(
              std::ceil((1.0 - c) * static_cast<double>(pool_size)));
        });
    double sum = 0.0;
    std::size_t defined = 0;
    for (const auto& m : trace.months)
      if (m.retained_f1) {
        sum += *m.retained_f1;
        ++defined;
      }
    if (defined == 0)
      throw InputError("NoDefinedMonths: no defined retained F1 at coverage " +
                       std::to_string(c));
    risks.push_back(1.0 - sum / static_cast<double>(defined));
  }

  double area = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    area += 0.5 * (risks[k] + risks[k + 1]) * (grid[k + 1] - grid[k]);
  return 100.0 * area / (grid.back() - grid.front());
}

}  // namespace sceval
