#include "sceval/stability.hpp"

#include <cmath>

namespace sceval {

double f1_volatility(const MonthlySeries& series) {
  std::vector<double> v;
  for (const auto& x : series.values)
    if (x) v.push_back(*x);
  if (v.empty()) throw InputError("AllUndefined: no defined values in series");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size()));
}

double mann_kendall_tau(const MonthlySeries& series, bool tie_corrected) {
  std::vector<double> v;
  for (const auto& x : series.values)
    if (x) v.push_back(*x);
  const std::size_t n = v.size();
  if (n < 2) throw InputError("TooFewPoints: mann_kendall_tau needs >= 2 defined");

  long long s = 0;
  long long tied = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v[j] > v[i]) ++s;
      else if (v[j] < v[i]) --s;
      else ++tied;
    }
  double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (!tie_corrected) return static_cast<double>(s) / pairs;
  // tau-b: all ties here are value ties on both axes (time has none).
  double denom = pairs - static_cast<double>(tied);
  if (denom <= 0.0) return 0.0;  // constant series
  return static_cast<double>(s) / std::sqrt(pairs * denom);
}

PillarVector aggregate_pillars(const std::vector<std::array<double, 4>>& per_dataset,
                               const std::string& method_id) {
  if (per_dataset.empty()) throw InputError("EmptyInput: aggregate_pillars");
  PillarVector p;
  p.method_id = method_id;
  for (const auto& row : per_dataset) {
    p.f1_mean += row[0];
    p.f1_volatility += row[1];
    p.aurc += row[2];
    p.tau += row[3];
  }
  double n = static_cast<double>(per_dataset.size());
  p.f1_mean /= n;
  p.f1_volatility /= n;
  p.aurc /= n;
  p.tau /= n;
  return p;
}

namespace {

bool dominates(const PillarVector& a, const PillarVector& b) {
  bool ge = a.f1_mean >= b.f1_mean && a.f1_volatility <= b.f1_volatility &&
            a.aurc <= b.aurc && a.tau >= b.tau;
  bool gt = a.f1_mean > b.f1_mean || a.f1_volatility < b.f1_volatility ||
            a.aurc < b.aurc || a.tau > b.tau;
  return ge && gt;
}

}  // namespace

std::vector<std::pair<std::string, bool>> pareto_front(
    const std::vector<PillarVector>& entries) {
  std::vector<std::pair<std::string, bool>> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    bool non_dominated = true;
    for (const auto& other : entries)
      if (&other != &e && dominates(other, e)) {
        non_dominated = false;
        break;
      }
    out.emplace_back(e.method_id, non_dominated);
  }
  return out;
}

}  // namespace sceval
