#pragma once

#include <string>
#include <vector>

#include "shapaudit/shap.hpp"
#include "shapaudit/types.hpp"

namespace shapaudit {

// Models x features table of importance ranks, rank 1 = most important.
// Ties carry fractional average ranks, so every row sums to d(d+1)/2.
struct RankMatrix {
  std::vector<std::string> model_names;
  std::vector<std::string> feature_names;
  Matrix ranks;
};

// Descending ranks of the importance scores; exact ties get the average of
// the tied positions.
Vector rank_features(const GlobalImportance& importance);
Vector rank_descending(const Vector& scores);

RankMatrix build_rank_matrix(
    const std::vector<std::pair<std::string, GlobalImportance>>& importances);

struct ClassifyThresholds {
  double robust_max_sigma = 0.25;
  double dependent_min_sigma = 0.75;
};

struct FeatureReliability {
  std::string feature;
  double mean_rank = 0.0;
  double std_rank = 0.0;  // population convention (divide by M) by default
  std::string label;      // robust | moderate | model-dependent
};

std::string classify_sigma(double sigma, const ClassifyThresholds& thresholds);

// Per-feature mean and standard deviation of the rank column plus the
// robustness label. population_std=false switches to the sample convention.
std::vector<FeatureReliability> rank_stats(
    const RankMatrix& rm, const ClassifyThresholds& thresholds = {},
    bool population_std = true);

// Pearson correlation of two rank vectors (tie-robust). Returns NaN when
// either vector has zero variance (full tie).
double spearman(const Vector& rank_a, const Vector& rank_b);

struct TopKStat {
  int k = 0;
  double mean = 0.0;
  double std = 0.0;     // population convention over model pairs
  double modal = 0.0;   // fraction of models matching the modal top-k set
  bool boundary_tie = false;  // some model had a rank tie at the k boundary
};

struct AgreementStats {
  Matrix pairwise_spearman;  // M x M, unit diagonal
  double mean_spearman = 0.0;
  std::vector<TopKStat> topk;
  std::vector<std::string> warnings;
};

// Mean pairwise Spearman over the M(M-1)/2 unordered pairs and top-k set
// overlap per pair (ties at the boundary break toward the lower feature
// index). Degenerate rank rows are excluded from the mean with a warning.
AgreementStats pairwise_agreement(const RankMatrix& rm,
                                  const std::vector<int>& ks);

// Top-k feature index set of one rank row under the deterministic
// tie-break (rank ascending, then feature index ascending).
std::vector<int> topk_set(const Vector& rank_row, int k);

}  // namespace shapaudit
