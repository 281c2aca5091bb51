#pragma once

#include <random>
#include <string>
#include <vector>

#include "sceval/stream.hpp"

namespace sceval::testing {

struct Rec {
  int y_true;
  int y_pred;
  double score;
};

// Builds a stream with one score column "u" (uncertainty-oriented) from
// per-month record tuples; ids are generated m<month>_s<index>.
inline TemporalStream make_stream(const std::vector<std::vector<Rec>>& months,
                                  const std::string& score_name = "u") {
  TemporalStream stream;
  stream.dataset_name = "synthetic";
  for (std::size_t m = 0; m < months.size(); ++m) {
    MonthBatch batch;
    batch.month_index = static_cast<int>(m);
    for (std::size_t i = 0; i < months[m].size(); ++i) {
      SampleRecord r;
      r.sample_id = "m" + std::to_string(m) + "_s" + std::to_string(i);
      r.month_index = batch.month_index;
      r.y_true = months[m][i].y_true;
      r.y_pred = months[m][i].y_pred;
      r.scores[score_name] = months[m][i].score;
      batch.records.push_back(std::move(r));
    }
    stream.batches.push_back(std::move(batch));
  }
  return stream;
}

// Months where only score values matter; labels fixed to a correct positive.
inline TemporalStream make_score_stream(
    const std::vector<std::vector<double>>& months) {
  std::vector<std::vector<Rec>> recs;
  for (const auto& m : months) {
    std::vector<Rec> month;
    for (double s : m) month.push_back({1, 1, s});
    recs.push_back(std::move(month));
  }
  return make_stream(recs);
}

}  // namespace sceval::testing
