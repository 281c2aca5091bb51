#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sceval/errors.hpp"

namespace sceval {

/// One prediction event in the temporal stream.
struct SampleRecord {
  std::string sample_id;
  int month_index = 0;
  int y_true = 0;  // 1 = malware
  int y_pred = 0;
  std::optional<double> prob_positive;
  std::map<std::string, double> scores;
  std::optional<std::string> embedding_id;
};

struct MonthBatch {
  int month_index = 0;
  std::vector<SampleRecord> records;  // file order, preserved
};

/// Ordered sequence of monthly batches. Immutable after construction;
/// safe to share across concurrent readers.
struct TemporalStream {
  std::string dataset_name;
  std::vector<MonthBatch> batches;  // strictly increasing month_index
  std::map<std::string, std::string> metadata;

  std::size_t total_records() const;
  const MonthBatch* find_month(int month_index) const;
};

struct EmbeddingTable {
  std::size_t dimension = 0;
  std::map<std::string, std::vector<double>> rows;
};

enum class StreamFormat { Csv, JsonLines };

/// Parses a line-oriented stream source. Rejects on the first malformed
/// record with its line number; months must appear in non-decreasing order.
TemporalStream parse_stream(std::istream& in, StreamFormat format);

/// Convenience: format chosen by extension (.jsonl/.ndjson -> JSON-lines,
/// anything else -> CSV).
TemporalStream parse_stream_file(const std::string& path);

/// Serializes in the CSV schema; parse(write(s)) == s on all fields.
void write_stream_csv(const TemporalStream& stream, std::ostream& out);

/// Embedding CSV: first line "dim=<d>", then "sample_id,v1,...,vd".
EmbeddingTable parse_embeddings(std::istream& in);
EmbeddingTable parse_embeddings_file(const std::string& path);

struct ValidationReport {
  // (sample_id, missing score name)
  std::vector<std::pair<std::string, std::string>> missing;
  bool passed() const { return missing.empty(); }
};

ValidationReport validate_stream(const TemporalStream& stream,
                                 const std::vector<std::string>& required_scores);

}  // namespace sceval
