#include "shapaudit/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "shapaudit/errors.hpp"

namespace shapaudit {

Vector rank_descending(const Vector& scores) {
  const Index d = scores.size();
  if (d < 1) throw UsageError("cannot rank an empty score vector");
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return scores(a) > scores(b);
  });
  Vector ranks(d);
  Index pos = 0;
  while (pos < d) {
    Index end = pos;
    while (end < d &&
           scores(order[static_cast<std::size_t>(end)]) ==
               scores(order[static_cast<std::size_t>(pos)]))
      ++end;
    const double avg = 0.5 * static_cast<double>(pos + 1 + end);
    for (Index i = pos; i < end; ++i)
      ranks(order[static_cast<std::size_t>(i)]) = avg;
    pos = end;
  }
  return ranks;
}

Vector rank_features(const GlobalImportance& importance) {
  return rank_descending(importance.phi_bar);
}

RankMatrix build_rank_matrix(
    const std::vector<std::pair<std::string, GlobalImportance>>& importances) {
  if (importances.size() < 2)
    throw UsageError("rank matrix needs at least 2 models");
  const auto& names = importances.front().second.feature_names;
  RankMatrix rm;
  rm.feature_names = names;
  rm.ranks.resize(static_cast<Index>(importances.size()),
                  static_cast<Index>(names.size()));
  for (std::size_t i = 0; i < importances.size(); ++i) {
    const auto& [model, gi] = importances[i];
    if (gi.feature_names != names)
      throw UsageError("feature names differ across importances (model " +
                       model + ")");
    rm.model_names.push_back(model);
    rm.ranks.row(static_cast<Index>(i)) = rank_features(gi).transpose();
  }
  return rm;
}

std::string classify_sigma(double sigma, const ClassifyThresholds& t) {
  if (!(t.robust_max_sigma < t.dependent_min_sigma))
    throw ConfigError("classification thresholds must satisfy robust < dependent");
  if (sigma <= t.robust_max_sigma) return "robust";
  if (sigma >= t.dependent_min_sigma) return "model-dependent";
  return "moderate";
}

std::vector<FeatureReliability> rank_stats(const RankMatrix& rm,
                                           const ClassifyThresholds& thresholds,
                                           bool population_std) {
  const Index M = rm.ranks.rows();
  const Index d = rm.ranks.cols();
  if (M < 1) throw UsageError("rank matrix has no rows");
  std::vector<FeatureReliability> stats;
  for (Index j = 0; j < d; ++j) {
    FeatureReliability fr;
    fr.feature = rm.feature_names[static_cast<std::size_t>(j)];
    fr.mean_rank = rm.ranks.col(j).mean();
    const double sq = (rm.ranks.col(j).array() - fr.mean_rank).square().sum();
    const double denom =
        population_std ? static_cast<double>(M) : static_cast<double>(M - 1);
    fr.std_rank = (M > 1 || population_std) ? std::sqrt(sq / denom) : 0.0;
    fr.label = classify_sigma(fr.std_rank, thresholds);
    stats.push_back(std::move(fr));
  }
  return stats;
}

double spearman(const Vector& rank_a, const Vector& rank_b) {
  if (rank_a.size() != rank_b.size())
    throw UsageError("spearman length mismatch");
  if (rank_a.size() < 2) throw UsageError("spearman requires length >= 2");
  const double ma = rank_a.mean();
  const double mb = rank_b.mean();
  const Eigen::ArrayXd da = rank_a.array() - ma;
  const Eigen::ArrayXd db = rank_b.array() - mb;
  const double va = (da * da).sum();
  const double vb = (db * db).sum();
  if (va == 0.0 || vb == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return (da * db).sum() / std::sqrt(va * vb);
}

std::vector<int> topk_set(const Vector& rank_row, int k) {
  const Index d = rank_row.size();
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (rank_row(a) != rank_row(b)) return rank_row(a) < rank_row(b);
    return a < b;
  });
  order.resize(static_cast<std::size_t>(std::min<Index>(k, d)));
  std::sort(order.begin(), order.end());
  return order;
}

AgreementStats pairwise_agreement(const RankMatrix& rm,
                                  const std::vector<int>& ks) {
  const Index M = rm.ranks.rows();
  const Index d = rm.ranks.cols();
  if (M < 2) throw UsageError("pairwise agreement needs at least 2 models");
  for (int k : ks)
    if (k < 1 || static_cast<Index>(k) > d)
      throw ConfigError("top-k parameter k=" + std::to_string(k) +
                        " outside 1..d");

  AgreementStats out;
  out.pairwise_spearman = Matrix::Identity(M, M);
  double sum = 0.0;
  int counted = 0;
  for (Index a = 0; a < M; ++a) {
    for (Index b = a + 1; b < M; ++b) {
      const double rho =
          spearman(rm.ranks.row(a).transpose(), rm.ranks.row(b).transpose());
      out.pairwise_spearman(a, b) = rho;
      out.pairwise_spearman(b, a) = rho;
      if (std::isnan(rho)) {
        out.warnings.push_back("degenerate rank rows (" +
                               rm.model_names[static_cast<std::size_t>(a)] +
                               ", " +
                               rm.model_names[static_cast<std::size_t>(b)] +
                               "): pair excluded from the mean");
      } else {
        sum += rho;
        ++counted;
      }
    }
  }
  out.mean_spearman =
      counted > 0 ? sum / counted : std::numeric_limits<double>::quiet_NaN();
  if (counted == 0)
    out.warnings.push_back("all model pairs degenerate; mean undefined");

  for (int k : ks) {
    TopKStat stat;
    stat.k = k;
    std::vector<std::vector<int>> sets;
    sets.reserve(static_cast<std::size_t>(M));
    for (Index a = 0; a < M; ++a) {
      const Vector row = rm.ranks.row(a).transpose();
      sets.push_back(topk_set(row, k));
      // A tie across the selection boundary means the printed set depended
      // on the index tie-break.
      std::vector<double> sorted(row.data(), row.data() + row.size());
      std::sort(sorted.begin(), sorted.end());
      if (static_cast<Index>(k) < d &&
          sorted[static_cast<std::size_t>(k - 1)] ==
              sorted[static_cast<std::size_t>(k)])
        stat.boundary_tie = true;
    }
    std::vector<double> overlaps;
    for (Index a = 0; a < M; ++a) {
      for (Index b = a + 1; b < M; ++b) {
        std::vector<int> inter;
        std::set_intersection(sets[static_cast<std::size_t>(a)].begin(),
                              sets[static_cast<std::size_t>(a)].end(),
                              sets[static_cast<std::size_t>(b)].begin(),
                              sets[static_cast<std::size_t>(b)].end(),
                              std::back_inserter(inter));
        overlaps.push_back(static_cast<double>(inter.size()) / k);
      }
    }
    const double mean =
        std::accumulate(overlaps.begin(), overlaps.end(), 0.0) /
        static_cast<double>(overlaps.size());
    double sq = 0.0;
    for (double v : overlaps) sq += (v - mean) * (v - mean);
    stat.mean = mean;
    stat.std = std::sqrt(sq / static_cast<double>(overlaps.size()));

    // Secondary view: fraction of models whose top-k set equals the most
    // common one.
    std::map<std::vector<int>, int> counts;
    for (const auto& s : sets) ++counts[s];
    int best = 0;
    for (const auto& [s, c] : counts) best = std::max(best, c);
    stat.modal = static_cast<double>(best) / static_cast<double>(M);
    out.topk.push_back(stat);
  }
  return out;
}

}  // namespace shapaudit
