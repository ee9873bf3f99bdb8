#include "shapaudit/models/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {
namespace {

std::vector<int> all_indices(Index n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

TreeEnsemble fit_random_forest(const Matrix& X, const Vector& y,
                               const ForestParams& p, Rng& rng) {
  if (p.n_trees < 1) throw ConfigError("random forest needs >= 1 tree");
  const Index n = X.rows();
  const int d = static_cast<int>(X.cols());
  TreeGrowParams grow;
  grow.max_depth = p.max_depth;
  grow.min_leaf = p.min_leaf;
  if (p.mtry == 0)
    grow.mtry = std::max(1, (d + 2) / 3);  // ceil(d/3)
  else if (p.mtry > 0)
    grow.mtry = std::min(p.mtry, d);
  else
    grow.mtry = 0;  // all features

  TreeEnsemble ens;
  ens.base = 0.0;
  for (int t = 0; t < p.n_trees; ++t) {
    std::vector<int> boot(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
      boot[static_cast<std::size_t>(i)] =
          static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    ens.trees.push_back(grow_tree(X, y, boot, grow, &rng));
    ens.weights.push_back(1.0 / static_cast<double>(p.n_trees));
  }
  return ens;
}

TreeEnsemble fit_gradient_boosting(const Matrix& X, const Vector& y,
                                   const BoostParams& p) {
  if (p.rounds < 1) throw ConfigError("boosting needs >= 1 round");
  std::vector<std::vector<double>> grid;
  TreeGrowParams grow;
  grow.max_depth = p.max_depth;
  grow.min_leaf = p.min_leaf;
  if (p.bins > 0) {
    grid = quantile_bin_edges(X, p.bins);
    grow.threshold_grid = &grid;
  }

  TreeEnsemble ens;
  ens.base = y.mean();
  Vector residual = y.array() - ens.base;
  const auto idx = all_indices(X.rows());
  for (int m = 0; m < p.rounds; ++m) {
    Tree tree = grow_tree(X, residual, idx, grow);
    residual -= p.learning_rate * predict(tree, X);
    ens.trees.push_back(std::move(tree));
    ens.weights.push_back(p.learning_rate);
  }
  return ens;
}

TreeEnsemble fit_xgb_style(const Matrix& X, const Vector& y,
                           const XgbParams& p) {
  if (p.rounds < 1) throw ConfigError("boosting needs >= 1 round");
  TreeGrowParams grow;
  grow.max_depth = p.max_depth;
  grow.min_leaf = p.min_leaf;
  grow.lambda = p.lambda;
  grow.gamma = p.gamma;

  TreeEnsemble ens;
  ens.base = y.mean();
  // Squared loss: g = F - y, h = 1, so the leaf value -G/(H+lambda) equals
  // growing on the residual with the shared shrunk-leaf engine.
  Vector residual = y.array() - ens.base;
  const auto idx = all_indices(X.rows());
  for (int m = 0; m < p.rounds; ++m) {
    Tree tree = grow_tree(X, residual, idx, grow);
    residual -= p.learning_rate * predict(tree, X);
    ens.trees.push_back(std::move(tree));
    ens.weights.push_back(p.learning_rate);
  }
  return ens;
}

TreeEnsemble fit_lgbm_style(const Matrix& X, const Vector& y,
                            const LgbmParams& p) {
  if (p.rounds < 1) throw ConfigError("boosting needs >= 1 round");
  TreeGrowParams grow;
  grow.max_leaves = p.max_leaves;
  grow.min_leaf = p.min_leaf;
  grow.lambda = p.lambda;
  grow.leafwise = true;

  TreeEnsemble ens;
  ens.base = y.mean();
  Vector residual = y.array() - ens.base;
  const auto idx = all_indices(X.rows());
  for (int m = 0; m < p.rounds; ++m) {
    Tree tree = grow_tree(X, residual, idx, grow);
    residual -= p.learning_rate * predict(tree, X);
    ens.trees.push_back(std::move(tree));
    ens.weights.push_back(p.learning_rate);
  }
  return ens;
}

TreeEnsemble fit_adaboost_r2(const Matrix& X, const Vector& y,
                             const AdaBoostParams& p, Rng& rng) {
  if (p.rounds < 1) throw ConfigError("boosting needs >= 1 round");
  const Index n = X.rows();
  const double nn = static_cast<double>(n);
  Vector w = Vector::Constant(n, 1.0 / nn);

  TreeGrowParams grow;
  grow.max_depth = p.weak_depth;
  grow.min_leaf = p.min_leaf;

  TreeEnsemble ens;
  ens.base = 0.0;
  for (int m = 0; m < p.rounds; ++m) {
    // Resample by weight via inverse-CDF on the cumulative distribution.
    std::vector<double> cdf(static_cast<std::size_t>(n));
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
      acc += w(i);
      cdf[static_cast<std::size_t>(i)] = acc;
    }
    std::vector<int> sample(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      const double u = rng.uniform() * acc;
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      sample[static_cast<std::size_t>(i)] =
          static_cast<int>(it - cdf.begin()) < n
              ? static_cast<int>(it - cdf.begin())
              : static_cast<int>(n - 1);
    }

    Tree tree = grow_tree(X, y, sample, grow);
    const Vector pred = predict(tree, X);
    const Vector abs_err = (pred - y).cwiseAbs();
    const double emax = abs_err.maxCoeff();
    if (emax <= 0.0) {
      // Perfect stage; keep it with a dominant vote and stop.
      ens.trees.push_back(std::move(tree));
      ens.weights.push_back(std::log(1.0 / 1e-12));
      break;
    }
    const Vector loss = abs_err / emax;  // linear loss in [0, 1]
    const double avg_loss = w.dot(loss);
    if (avg_loss >= 0.5) {
      if (ens.trees.empty()) {
        ens.trees.push_back(std::move(tree));
        ens.weights.push_back(std::log(1.0 / 0.999));
      }
      break;
    }
    const double beta = std::max(avg_loss / (1.0 - avg_loss), 1e-12);
    for (Index i = 0; i < n; ++i) w(i) *= std::pow(beta, 1.0 - loss(i));
    w /= w.sum();
    ens.trees.push_back(std::move(tree));
    ens.weights.push_back(std::log(1.0 / beta));
  }
  return ens;
}

double predict_weighted_median_row(const TreeEnsemble& ens,
                                   const RowVector& x) {
  const std::size_t m = ens.trees.size();
  std::vector<std::pair<double, double>> pw(m);  // (prediction, weight)
  double total = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    pw[t] = {predict_row(ens.trees[t], x), ens.weights[t]};
    total += ens.weights[t];
  }
  std::sort(pw.begin(), pw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double acc = 0.0;
  for (const auto& [pred, weight] : pw) {
    acc += weight;
    if (acc >= 0.5 * total) return pred;
  }
  return pw.back().first;
}

Vector predict_weighted_median(const TreeEnsemble& ens, const Matrix& X) {
  Vector out(X.rows());
  for (Index i = 0; i < X.rows(); ++i)
    out(i) = predict_weighted_median_row(ens, X.row(i));
  return out;
}

}  // namespace shapaudit
