#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sceval/errors.hpp"
#include "sceval/scorers.hpp"
#include "sceval/stream.hpp"

namespace sceval {

struct SelectionResult {
  std::vector<std::string> selected_ids;  // ordered, no duplicates
  std::string scheme;                     // "top-uncertain" | "stratk" | "uncertainty-folds"
  std::size_t budget = 0;
  std::uint64_t seed = 0;
};

/// The B most-uncertain records under the canonical orientation;
/// ties broken by original batch order.
SelectionResult select_uncertain(const MonthBatch& batch,
                                 const std::string& score_name, std::size_t budget,
                                 const OrientationRegistry& orientations);

/// Stratified draw preserving the class ratio: per-class counts come from
/// largest-remainder apportionment, identities from a seeded mt19937_64
/// Fisher-Yates draw without replacement within each class.
SelectionResult stratk_sample(const std::vector<std::pair<std::string, int>>& pool,
                              std::size_t budget, std::uint64_t seed);

/// From each fold, take the top-uncertainty share (ceil(B0/k) for the lowest
/// fold indices, floor for the rest, summing to B0); concatenate in fold order.
SelectionResult uncertainty_fold_sample(
    const std::vector<std::pair<std::string, double>>& pool, std::size_t budget,
    std::size_t k, const std::map<std::string, std::size_t>& fold_assignment);

/// Unstratified contiguous fold partition by input order.
std::map<std::string, std::size_t> contiguous_folds(
    const std::vector<std::pair<std::string, double>>& pool, std::size_t k);

}  // namespace sceval
