#include "sceval/budget_select.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace sceval {

SelectionResult select_uncertain(const MonthBatch& batch,
                                 const std::string& score_name, std::size_t budget,
                                 const OrientationRegistry& orientations) {
  std::vector<std::pair<double, std::size_t>> ranked;  // (uncertainty, index)
  ranked.reserve(batch.records.size());
  for (std::size_t i = 0; i < batch.records.size(); ++i) {
    const auto& r = batch.records[i];
    auto it = r.scores.find(score_name);
    if (it == r.scores.end())
      throw InputError("MissingScore: sample '" + r.sample_id + "' lacks score '" +
                       score_name + "'");
    ranked.emplace_back(orientations.to_uncertainty(score_name, it->second), i);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  SelectionResult res;
  res.scheme = "top-uncertain";
  res.budget = budget;
  std::size_t take = std::min(budget, ranked.size());
  for (std::size_t i = 0; i < take; ++i)
    res.selected_ids.push_back(batch.records[ranked[i].second].sample_id);
  return res;
}

SelectionResult stratk_sample(const std::vector<std::pair<std::string, int>>& pool,
                              std::size_t budget, std::uint64_t seed) {
  if (budget > pool.size())
    throw InputError("BudgetExceedsPool: budget " + std::to_string(budget) +
                     " > pool " + std::to_string(pool.size()));
  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < pool.size(); ++i) {
    int y = pool[i].second;
    if (y != 0 && y != 1) throw InputError("stratk_sample: labels must be binary");
    members[y].push_back(i);
  }
  if (members[0].empty() || members[1].empty())
    throw InputError("stratk_sample: both classes must be present");

  // Largest-remainder apportionment of the budget by class proportion.
  const double total = static_cast<double>(pool.size());
  std::size_t counts[2];
  double remainders[2];
  std::size_t assigned = 0;
  for (int c = 0; c < 2; ++c) {
    double quota = static_cast<double>(budget) *
                   static_cast<double>(members[c].size()) / total;
    counts[c] = static_cast<std::size_t>(quota);
    remainders[c] = quota - static_cast<double>(counts[c]);
    assigned += counts[c];
  }
  while (assigned < budget) {
    // Larger remainder wins; ties go to the larger class, then to label 1.
    int pick;
    if (remainders[0] != remainders[1])
      pick = remainders[0] > remainders[1] ? 0 : 1;
    else if (members[0].size() != members[1].size())
      pick = members[0].size() > members[1].size() ? 0 : 1;
    else
      pick = 1;
    ++counts[pick];
    remainders[pick] = -1.0;
    ++assigned;
  }
  for (int c = 0; c < 2; ++c) counts[c] = std::min(counts[c], members[c].size());

  SelectionResult res;
  res.scheme = "stratk";
  res.budget = budget;
  res.seed = seed;
  std::mt19937_64 rng(seed);
  for (int c = 1; c >= 0; --c) {  // malware class first
    auto& idx = members[c];
    // Partial Fisher-Yates with an explicit modulo draw: reproducible
    // across standard libraries, unlike std::shuffle.
    for (std::size_t i = 0; i < counts[c]; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
      std::swap(idx[i], idx[j]);
      res.selected_ids.push_back(pool[idx[i]].first);
    }
  }
  return res;
}

std::map<std::string, std::size_t> contiguous_folds(
    const std::vector<std::pair<std::string, double>>& pool, std::size_t k) {
  if (k == 0) throw InputError("fold count must be positive");
  std::map<std::string, std::size_t> folds;
  for (std::size_t i = 0; i < pool.size(); ++i)
    folds[pool[i].first] = i * k / std::max<std::size_t>(pool.size(), 1);
  return folds;
}

SelectionResult uncertainty_fold_sample(
    const std::vector<std::pair<std::string, double>>& pool, std::size_t budget,
    std::size_t k, const std::map<std::string, std::size_t>& fold_assignment) {
  if (k == 0) throw InputError("fold count must be positive");
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto it = fold_assignment.find(pool[i].first);
    if (it == fold_assignment.end())
      throw InputError("BadFoldAssignment: no fold for '" + pool[i].first + "'");
    if (it->second >= k)
      throw InputError("BadFoldAssignment: fold " + std::to_string(it->second) +
                       " out of range for k=" + std::to_string(k));
    folds[it->second].push_back(i);
  }

  // Shares sum to budget; the +1 shares go to the lowest fold indices.
  std::size_t base = budget / k, extra = budget % k;
  SelectionResult res;
  res.scheme = "uncertainty-folds";
  res.budget = budget;
  for (std::size_t f = 0; f < k; ++f) {
    std::size_t share = base + (f < extra ? 1 : 0);
    if (folds[f].size() < share)
      throw InputError("FoldTooSmall: fold " + std::to_string(f) + " has " +
                       std::to_string(folds[f].size()) + " samples, needs " +
                       std::to_string(share));
    auto& idx = folds[f];
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return pool[a].second > pool[b].second;
    });
    for (std::size_t i = 0; i < share; ++i)
      res.selected_ids.push_back(pool[idx[i]].first);
  }
  return res;
}

}  // namespace sceval
