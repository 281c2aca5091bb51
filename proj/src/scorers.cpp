#include "sceval/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sceval {

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Mean of the two middle order statistics for even length.
double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

OrientationRegistry OrientationRegistry::with_defaults() {
  OrientationRegistry reg;
  reg.register_score("msp_u", true);
  reg.register_score("cade_ood", true);
  reg.register_score("margin", false);
  return reg;
}

void OrientationRegistry::register_score(const std::string& name,
                                         bool higher_means_more_uncertain) {
  table_[name] = higher_means_more_uncertain;
}

bool OrientationRegistry::higher_means_more_uncertain(const std::string& name) const {
  auto it = table_.find(name);
  if (it == table_.end())
    throw InputError("UnknownScoreName: no orientation registered for '" + name + "'");
  return it->second;
}

double OrientationRegistry::to_uncertainty(const std::string& name, double score) const {
  return higher_means_more_uncertain(name) ? score : -score;
}

double msp_uncertainty(double prob_positive) {
  if (!(prob_positive >= 0.0 && prob_positive <= 1.0))
    throw InputError("OutOfRange: prob_positive must be in [0,1]");
  double kappa = std::max(prob_positive, 1.0 - prob_positive);
  return 1.0 - (kappa - 0.5) / 0.5;
}

double margin_confidence(const Hyperplane& h, std::span<const double> x) {
  if (h.weights.size() != x.size())
    throw InputError("DimensionMismatch: hyperplane dim " +
                     std::to_string(h.weights.size()) + " vs input dim " +
                     std::to_string(x.size()));
  double norm_sq = 0.0, f = h.bias;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f += h.weights[i] * x[i];
    norm_sq += h.weights[i] * h.weights[i];
  }
  if (norm_sq == 0.0) throw InputError("hyperplane has zero weight vector");
  return f / std::sqrt(norm_sq);
}

std::vector<CadeClassStats> fit_cade_stats(
    const EmbeddingTable& embeddings,
    const std::vector<std::pair<std::string, int>>& labeled_ids,
    double mad_scale) {
  std::map<int, std::vector<const std::vector<double>*>> by_class;
  for (const auto& [id, label] : labeled_ids) {
    auto it = embeddings.rows.find(id);
    if (it == embeddings.rows.end())
      throw InputError("no embedding for sample '" + id + "'");
    by_class[label].push_back(&it->second);
  }

  std::vector<CadeClassStats> out;
  for (const auto& [label, members] : by_class) {
    if (members.size() < 2)
      throw InputError("ClassTooSmall: class " + std::to_string(label) +
                       " has " + std::to_string(members.size()) + " samples");
    CadeClassStats s;
    s.class_label = label;
    s.centroid.assign(embeddings.dimension, 0.0);
    for (const auto* v : members)
      for (std::size_t i = 0; i < embeddings.dimension; ++i)
        s.centroid[i] += (*v)[i];
    for (auto& c : s.centroid) c /= static_cast<double>(members.size());

    std::vector<double> dists;
    dists.reserve(members.size());
    for (const auto* v : members) dists.push_back(euclidean(*v, s.centroid));
    s.median_distance = median(dists);

    std::vector<double> abs_dev;
    abs_dev.reserve(dists.size());
    for (double d : dists) abs_dev.push_back(std::abs(d - s.median_distance));
    s.mad = mad_scale * median(std::move(abs_dev));
    if (s.mad == 0.0)
      throw InputError("DegenerateMad: class " + std::to_string(label) +
                       " has identical centroid distances");
    out.push_back(std::move(s));
  }
  return out;
}

double cade_ood_score(std::span<const double> x_embedding,
                      const std::vector<CadeClassStats>& stats) {
  if (stats.empty()) throw InputError("cade_ood_score: empty stats");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : stats) {
    if (s.centroid.size() != x_embedding.size())
      throw InputError("DimensionMismatch: centroid dim " +
                       std::to_string(s.centroid.size()) + " vs embedding dim " +
                       std::to_string(x_embedding.size()));
    double d = euclidean(x_embedding, s.centroid);
    best = std::min(best, std::abs(d - s.median_distance) / s.mad);
  }
  return best;
}

}  // namespace sceval
