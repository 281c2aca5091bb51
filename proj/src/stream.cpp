#include "sceval/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sceval {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_double(const std::string& s, std::size_t line_no, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad numeric value for " + what + ": '" + s + "'");
  }
}

double parse_finite(const std::string& s, std::size_t line_no, const std::string& what) {
  double v = parse_double(s, line_no, what);
  if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value for " + what);
  return v;
}

int parse_int(const std::string& s, std::size_t line_no, const std::string& what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(line_no, "bad integer for " + what + ": '" + s + "'");
  return v;
}

void check_record(SampleRecord& r, std::size_t line_no) {
  if (r.sample_id.empty()) throw ParseError(line_no, "empty sample_id");
  if (r.month_index < 0) throw ParseError(line_no, "negative month_index");
  if (r.y_true != 0 && r.y_true != 1)
    throw ParseError(line_no, "y_true must be 0 or 1");
  if (r.y_pred != 0 && r.y_pred != 1)
    throw ParseError(line_no, "y_pred must be 0 or 1");
  if (r.prob_positive && (*r.prob_positive < 0.0 || *r.prob_positive > 1.0))
    throw ParseError(line_no, "prob_positive outside [0,1]");
  for (const auto& [name, v] : r.scores)
    if (!std::isfinite(v))
      throw ParseError(line_no, "non-finite score '" + name + "'");
}

TemporalStream assemble(std::vector<std::pair<SampleRecord, std::size_t>>&& records) {
  if (records.empty()) throw InputError("EmptyStream: no records");
  TemporalStream stream;
  std::set<std::string> seen_in_month;
  int last_month = -1;
  for (auto& [rec, line_no] : records) {
    if (stream.batches.empty() || rec.month_index != last_month) {
      if (rec.month_index < last_month)
        throw ParseError(line_no, "NonMonotoneMonths: month " +
                                      std::to_string(rec.month_index) +
                                      " after month " + std::to_string(last_month));
      stream.batches.push_back(MonthBatch{rec.month_index, {}});
      seen_in_month.clear();
      last_month = rec.month_index;
    }
    if (!seen_in_month.insert(rec.sample_id).second)
      throw ParseError(line_no, "DuplicateSampleId '" + rec.sample_id +
                                    "' in month " + std::to_string(rec.month_index));
    stream.batches.back().records.push_back(std::move(rec));
  }
  return stream;
}

TemporalStream parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("EmptyStream: no header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv(line);
  const std::vector<std::string> fixed = {"sample_id", "month_index", "y_true",
                                          "y_pred", "prob_positive"};
  if (header.size() < fixed.size())
    throw ParseError(1, "header missing required columns");
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (header[i] != fixed[i])
      throw ParseError(1, "expected column '" + fixed[i] + "', got '" + header[i] + "'");
  std::size_t col = fixed.size();
  bool has_embedding_id = false;
  if (col < header.size() && header[col] == "embedding_id") {
    has_embedding_id = true;
    ++col;
  }
  std::vector<std::string> score_names;
  for (; col < header.size(); ++col) {
    const std::string& h = header[col];
    if (h.rfind("score:", 0) != 0)
      throw ParseError(1, "unexpected column '" + h + "'");
    score_names.push_back(h.substr(6));
  }

  std::vector<std::pair<SampleRecord, std::size_t>> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw ParseError(line_no, "expected " + std::to_string(header.size()) +
                                    " cells, got " + std::to_string(cells.size()));
    SampleRecord r;
    r.sample_id = cells[0];
    r.month_index = parse_int(cells[1], line_no, "month_index");
    r.y_true = parse_int(cells[2], line_no, "y_true");
    r.y_pred = parse_int(cells[3], line_no, "y_pred");
    if (!cells[4].empty())
      r.prob_positive = parse_finite(cells[4], line_no, "prob_positive");
    std::size_t c = 5;
    if (has_embedding_id) {
      if (!cells[c].empty()) r.embedding_id = cells[c];
      ++c;
    }
    for (std::size_t s = 0; s < score_names.size(); ++s, ++c)
      if (!cells[c].empty())
        r.scores[score_names[s]] =
            parse_finite(cells[c], line_no, "score:" + score_names[s]);
    check_record(r, line_no);
    records.emplace_back(std::move(r), line_no);
  }
  return assemble(std::move(records));
}

TemporalStream parse_jsonl(std::istream& in) {
  std::vector<std::pair<SampleRecord, std::size_t>> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError(line_no, "not a JSON object");
    SampleRecord r;
    try {
      r.sample_id = j.at("sample_id").get<std::string>();
      r.month_index = j.at("month_index").get<int>();
      r.y_true = j.at("y_true").get<int>();
      r.y_pred = j.at("y_pred").get<int>();
      if (j.contains("prob_positive"))
        r.prob_positive = j["prob_positive"].get<double>();
      if (j.contains("embedding_id"))
        r.embedding_id = j["embedding_id"].get<std::string>();
      if (j.contains("scores"))
        for (auto& [k, v] : j["scores"].items())
          r.scores[k] = v.get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    check_record(r, line_no);
    records.emplace_back(std::move(r), line_no);
  }
  return assemble(std::move(records));
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::size_t TemporalStream::total_records() const {
  std::size_t n = 0;
  for (const auto& b : batches) n += b.records.size();
  return n;
}

const MonthBatch* TemporalStream::find_month(int month_index) const {
  for (const auto& b : batches)
    if (b.month_index == month_index) return &b;
  return nullptr;
}

TemporalStream parse_stream(std::istream& in, StreamFormat format) {
  return format == StreamFormat::Csv ? parse_csv(in) : parse_jsonl(in);
}

TemporalStream parse_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  auto fmt = StreamFormat::Csv;
  if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0)
    fmt = StreamFormat::JsonLines;
  else if (path.size() >= 7 && path.compare(path.size() - 7, 7, ".ndjson") == 0)
    fmt = StreamFormat::JsonLines;
  auto stream = parse_stream(in, fmt);
  stream.dataset_name = std::filesystem::path(path).stem().string();
  return stream;
}

void write_stream_csv(const TemporalStream& stream, std::ostream& out) {
  std::set<std::string> score_names;
  bool any_embedding = false;
  for (const auto& b : stream.batches)
    for (const auto& r : b.records) {
      for (const auto& [k, v] : r.scores) score_names.insert(k);
      if (r.embedding_id) any_embedding = true;
    }
  out << "sample_id,month_index,y_true,y_pred,prob_positive";
  if (any_embedding) out << ",embedding_id";
  for (const auto& s : score_names) out << ",score:" << s;
  out << "\n";
  for (const auto& b : stream.batches)
    for (const auto& r : b.records) {
      out << r.sample_id << ',' << r.month_index << ',' << r.y_true << ','
          << r.y_pred << ',';
      if (r.prob_positive) out << fmt_double(*r.prob_positive);
      if (any_embedding) {
        out << ',';
        if (r.embedding_id) out << *r.embedding_id;
      }
      for (const auto& s : score_names) {
        out << ',';
        auto it = r.scores.find(s);
        if (it != r.scores.end()) out << fmt_double(it->second);
      }
      out << "\n";
    }
}

EmbeddingTable parse_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty embedding file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("dim=", 0) != 0)
    throw ParseError(1, "expected header 'dim=<d>'");
  EmbeddingTable table;
  int d = parse_int(line.substr(4), 1, "dimension");
  if (d <= 0) throw ParseError(1, "dimension must be positive");
  table.dimension = static_cast<std::size_t>(d);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != table.dimension + 1)
      throw ParseError(line_no, "DimensionMismatch: expected " +
                                    std::to_string(table.dimension) +
                                    " values, got " +
                                    std::to_string(cells.size() - 1));
    std::vector<double> vec(table.dimension);
    for (std::size_t i = 0; i < table.dimension; ++i) {
      double v = parse_double(cells[i + 1], line_no, "embedding value");
      if (!std::isfinite(v)) throw ParseError(line_no, "NonFiniteValue");
      vec[i] = v;
    }
    if (!table.rows.emplace(cells[0], std::move(vec)).second)
      throw ParseError(line_no, "duplicate sample_id '" + cells[0] + "'");
  }
  return table;
}

EmbeddingTable parse_embeddings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_embeddings(in);
}

ValidationReport validate_stream(const TemporalStream& stream,
                                 const std::vector<std::string>& required_scores) {
  ValidationReport report;
  for (const auto& b : stream.batches)
    for (const auto& r : b.records)
      for (const auto& name : required_scores)
        if (!r.scores.count(name)) report.missing.emplace_back(r.sample_id, name);
  return report;
}

}  // namespace sceval
