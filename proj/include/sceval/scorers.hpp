#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sceval/errors.hpp"
#include "sceval/stream.hpp"

namespace sceval {

// OOD cutoff on the min class deviation.
inline constexpr double kOodThreshold = 3.5;
// Normal-consistency factor for the scaled MAD.
inline constexpr double kMadScale = 1.4826;

/// Per-class centroid/spread statistics in latent space.
struct CadeClassStats {
  int class_label = 0;
  std::vector<double> centroid;
  double median_distance = 0.0;  // median intra-class distance
  double mad = 0.0;              // scaled median absolute deviation, > 0
};

struct Hyperplane {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Maps raw score values onto the canonical "higher = more uncertain" axis.
/// Every score name used by the simulator needs exactly one orientation.
class OrientationRegistry {
 public:
  // msp_u and cade_ood are uncertainty-oriented; margin is confidence-oriented.
  static OrientationRegistry with_defaults();

  void register_score(const std::string& name, bool higher_means_more_uncertain);
  bool higher_means_more_uncertain(const std::string& name) const;

  /// Identity if higher-is-more-uncertain, negation otherwise.
  double to_uncertainty(const std::string& name, double score) const;

 private:
  std::map<std::string, bool> table_;
};

/// Uncertainty as proximity to the binary decision boundary:
/// 1 - |max(p, 1-p) - 0.5| / 0.5. Maximal (=1) at p = 0.5.
double msp_uncertainty(double prob_positive);

/// Signed Euclidean distance to the hyperplane, (w.x + b) / ||w||.
double margin_confidence(const Hyperplane& h, std::span<const double> x);

/// Fits centroid, median distance and scaled MAD per class from the
/// labeled training embeddings. Throws on classes with < 2 samples or a
/// zero MAD (all distances identical).
std::vector<CadeClassStats> fit_cade_stats(
    const EmbeddingTable& embeddings,
    const std::vector<std::pair<std::string, int>>& labeled_ids,
    double mad_scale = kMadScale);

/// min over classes of |d_i(x) - median_i| / MAD_i.
double cade_ood_score(std::span<const double> x_embedding,
                      const std::vector<CadeClassStats>& stats);

inline bool is_ood(double score) { return score > kOodThreshold; }

}  // namespace sceval
