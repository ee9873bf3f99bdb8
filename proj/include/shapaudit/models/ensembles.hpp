#pragma once

#include "shapaudit/models/tree.hpp"
#include "shapaudit/types.hpp"

namespace shapaudit {

class Rng;

struct ForestParams {
  int n_trees = 200;
  int max_depth = 0;
  int min_leaf = 1;
  int mtry = 0;  // 0 = ceil(d/3), -1 = all features
};

// Bootstrap bagging with per-split feature subsampling; prediction is the
// plain mean of the trees (base 0, weights 1/M).
TreeEnsemble fit_random_forest(const Matrix& X, const Vector& y,
                               const ForestParams& p, Rng& rng);

struct BoostParams {
  int rounds = 300;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_leaf = 1;
  int bins = 0;  // > 0 restricts thresholds to that many quantile bins
};

// Squared-loss boosting on residuals; base = mean(y), per-tree weight =
// learning rate.
TreeEnsemble fit_gradient_boosting(const Matrix& X, const Vector& y,
                                   const BoostParams& p);

struct XgbParams {
  int rounds = 300;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_leaf = 1;
  double lambda = 1.0;
  double gamma = 0.0;
};

// Second-order leaf objective (squared loss, unit hessian): leaf value
// -G/(H+lambda), gain with lambda/gamma penalties, depth-wise growth.
TreeEnsemble fit_xgb_style(const Matrix& X, const Vector& y,
                           const XgbParams& p);

struct LgbmParams {
  int rounds = 300;
  double learning_rate = 0.1;
  int max_leaves = 15;
  int min_leaf = 3;
  double lambda = 1.0;
};

// Same leaf objective as the depth-wise variant but leaf-wise (best-first)
// growth under a leaf budget.
TreeEnsemble fit_lgbm_style(const Matrix& X, const Vector& y,
                            const LgbmParams& p);

struct AdaBoostParams {
  int rounds = 100;
  int weak_depth = 3;
  int min_leaf = 1;
};

// Boosting by weighted resampling with linear loss. The returned ensemble
// stores per-stage weights log(1/beta); prediction must combine stages by
// weighted median (see predict_weighted_median), not additively.
TreeEnsemble fit_adaboost_r2(const Matrix& X, const Vector& y,
                             const AdaBoostParams& p, Rng& rng);

double predict_weighted_median_row(const TreeEnsemble& ens, const RowVector& x);
Vector predict_weighted_median(const TreeEnsemble& ens, const Matrix& X);

}  // namespace shapaudit
