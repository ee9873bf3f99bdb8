#include "shapaudit/models/zoo.hpp"

#include <algorithm>
#include <cmath>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {
namespace {

double param(const ModelSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.hyper.find(key);
  return it == spec.hyper.end() ? fallback : it->second;
}

int iparam(const ModelSpec& spec, const std::string& key, int fallback) {
  return static_cast<int>(param(spec, key, fallback));
}

ModelSpec make_spec(std::string name, Family family, Algo algo,
                    std::map<std::string, double> hyper, bool variant = false) {
  ModelSpec s;
  s.name = std::move(name);
  s.family = family;
  s.algo = algo;
  s.hyper = std::move(hyper);
  s.variant = variant;
  return s;
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::kLinear: return "linear";
    case Family::kTree: return "tree";
    case Family::kKernel: return "kernel";
    case Family::kNeural: return "neural";
    case Family::kInstance: return "instance";
  }
  return "unknown";
}

std::vector<ModelSpec> default_zoo() {
  std::vector<ModelSpec> zoo;
  zoo.push_back(make_spec("linear_regression", Family::kLinear, Algo::kOls, {}));
  zoo.push_back(make_spec("ridge", Family::kLinear, Algo::kRidge,
                          {{"lambda", 1.0}}));
  zoo.push_back(make_spec("lasso", Family::kLinear, Algo::kElasticNet,
                          {{"lambda", 1.0}, {"l1_ratio", 1.0}}));
  zoo.push_back(make_spec("elastic_net", Family::kLinear, Algo::kElasticNet,
                          {{"lambda", 1.0}, {"l1_ratio", 0.5}}));
  zoo.push_back(make_spec("decision_tree", Family::kTree, Algo::kCart,
                          {{"max_depth", 0.0}, {"min_leaf", 1.0}}));
  zoo.push_back(make_spec("random_forest", Family::kTree, Algo::kRandomForest,
                          {{"trees", 200.0}, {"max_depth", 0.0},
                           {"min_leaf", 1.0}, {"mtry", 0.0}}));
  zoo.push_back(make_spec("gradient_boosting", Family::kTree,
                          Algo::kGradientBoosting,
                          {{"rounds", 300.0}, {"learning_rate", 0.1},
                           {"max_depth", 3.0}, {"min_leaf", 1.0}}));
  zoo.push_back(make_spec("hist_gradient_boosting", Family::kTree,
                          Algo::kGradientBoosting,
                          {{"rounds", 300.0}, {"learning_rate", 0.1},
                           {"max_depth", 3.0}, {"min_leaf", 1.0},
                           {"bins", 32.0}}));
  zoo.push_back(make_spec("xgb_style", Family::kTree, Algo::kXgbStyle,
                          {{"rounds", 300.0}, {"learning_rate", 0.1},
                           {"max_depth", 3.0}, {"min_leaf", 1.0},
                           {"lambda", 1.0}, {"gamma", 0.0}}));
  zoo.push_back(make_spec("lgbm_style", Family::kTree, Algo::kLgbmStyle,
                          {{"rounds", 300.0}, {"learning_rate", 0.1},
                           {"max_leaves", 15.0}, {"min_leaf", 3.0},
                           {"lambda", 1.0}}));
  zoo.push_back(make_spec("adaboost_r2", Family::kTree, Algo::kAdaBoostR2,
                          {{"rounds", 100.0}, {"weak_depth", 3.0},
                           {"min_leaf", 1.0}}));
  zoo.push_back(make_spec("svr_rbf", Family::kKernel, Algo::kSvr,
                          {{"C", 1.0}, {"epsilon", 0.1}, {"gamma", 0.0},
                           {"degree", 0.0}}));
  zoo.push_back(make_spec("svr_poly", Family::kKernel, Algo::kSvr,
                          {{"C", 1.0}, {"epsilon", 0.1}, {"gamma", 0.0},
                           {"degree", 3.0}, {"coef0", 1.0}}));
  zoo.push_back(make_spec("mlp_128x64", Family::kNeural, Algo::kMlp,
                          {{"hidden1", 128.0}, {"hidden2", 64.0},
                           {"learning_rate", 1e-3}, {"batch", 16.0},
                           {"epochs", 2000.0}}));
  zoo.push_back(make_spec("mlp_64x32", Family::kNeural, Algo::kMlp,
                          {{"hidden1", 64.0}, {"hidden2", 32.0},
                           {"learning_rate", 1e-3}, {"batch", 16.0},
                           {"epochs", 2000.0}}));
  zoo.push_back(make_spec("knn", Family::kInstance, Algo::kKnn, {{"k", 5.0}}));
  // Documented variants filling the zoo out to 21 entries.
  zoo.push_back(make_spec("random_forest_deep", Family::kTree,
                          Algo::kRandomForest,
                          {{"trees", 300.0}, {"max_depth", 0.0},
                           {"min_leaf", 1.0}, {"mtry", -1.0}},
                          true));
  zoo.push_back(make_spec("gradient_boosting_slow", Family::kTree,
                          Algo::kGradientBoosting,
                          {{"rounds", 600.0}, {"learning_rate", 0.02},
                           {"max_depth", 3.0}, {"min_leaf", 1.0}},
                          true));
  zoo.push_back(make_spec("knn_k3", Family::kInstance, Algo::kKnn,
                          {{"k", 3.0}}, true));
  zoo.push_back(make_spec("knn_k9", Family::kInstance, Algo::kKnn,
                          {{"k", 9.0}}, true));
  zoo.push_back(make_spec("ridge_strong", Family::kLinear, Algo::kRidge,
                          {{"lambda", 100.0}}, true));
  for (std::size_t i = 0; i < zoo.size(); ++i)
    zoo[i].seed_salt = static_cast<std::uint64_t>(i);
  return zoo;
}

const ModelSpec& find_spec(const std::vector<ModelSpec>& zoo,
                           const std::string& name) {
  for (const auto& spec : zoo)
    if (spec.name == name) return spec;
  throw ConfigError("unknown model: " + name);
}

TrainedModel fit(const ModelSpec& spec, const Matrix& X, const Vector& y,
                 std::uint64_t master_seed) {
  if (X.rows() != y.size()) throw UsageError("X and y row counts differ");
  if (X.rows() < 2) throw UsageError("fit requires n >= 2");
  Rng rng(Rng::mix({master_seed, spec.seed_salt, Rng::hash_name(spec.name)}));

  TrainedModel model;
  model.spec = spec;
  model.train_d = X.cols();

  switch (spec.algo) {
    case Algo::kOls:
      model.impl = fit_ols(X, y);
      break;
    case Algo::kRidge:
      model.impl = fit_ridge(X, y, param(spec, "lambda", 1.0));
      break;
    case Algo::kElasticNet: {
      auto res = fit_elastic_net(X, y, param(spec, "lambda", 1.0),
                                 param(spec, "l1_ratio", 0.5),
                                 param(spec, "tol", 1e-8),
                                 iparam(spec, "max_sweeps", 10000));
      model.convergence_warning = !res.converged;
      model.impl = std::move(res.fit);
      break;
    }
    case Algo::kCart: {
      TreeGrowParams p;
      p.max_depth = iparam(spec, "max_depth", 0);
      p.min_leaf = iparam(spec, "min_leaf", 1);
      std::vector<int> idx(static_cast<std::size_t>(X.rows()));
      for (Index i = 0; i < X.rows(); ++i) idx[static_cast<std::size_t>(i)] = static_cast<int>(i);
      TreeModel tm;
      tm.ensemble.base = 0.0;
      tm.ensemble.trees.push_back(grow_tree(X, y, idx, p));
      tm.ensemble.weights.push_back(1.0);
      model.impl = std::move(tm);
      break;
    }
    case Algo::kRandomForest: {
      ForestParams p;
      p.n_trees = iparam(spec, "trees", 200);
      p.max_depth = iparam(spec, "max_depth", 0);
      p.min_leaf = iparam(spec, "min_leaf", 1);
      p.mtry = iparam(spec, "mtry", 0);
      TreeModel tm;
      tm.ensemble = fit_random_forest(X, y, p, rng);
      model.impl = std::move(tm);
      break;
    }
    case Algo::kGradientBoosting: {
      BoostParams p;
      p.rounds = iparam(spec, "rounds", 300);
      p.learning_rate = param(spec, "learning_rate", 0.1);
      p.max_depth = iparam(spec, "max_depth", 3);
      p.min_leaf = iparam(spec, "min_leaf", 1);
      p.bins = iparam(spec, "bins", 0);
      TreeModel tm;
      tm.ensemble = fit_gradient_boosting(X, y, p);
      model.impl = std::move(tm);
      break;
    }
    case Algo::kXgbStyle: {
      XgbParams p;
      p.rounds = iparam(spec, "rounds", 300);
      p.learning_rate = param(spec, "learning_rate", 0.1);
      p.max_depth = iparam(spec, "max_depth", 3);
      p.min_leaf = iparam(spec, "min_leaf", 1);
      p.lambda = param(spec, "lambda", 1.0);
      p.gamma = param(spec, "gamma", 0.0);
      TreeModel tm;
      tm.ensemble = fit_xgb_style(X, y, p);
      model.impl = std::move(tm);
      break;
    }
    case Algo::kLgbmStyle: {
      LgbmParams p;
      p.rounds = iparam(spec, "rounds", 300);
      p.learning_rate = param(spec, "learning_rate", 0.1);
      p.max_leaves = iparam(spec, "max_leaves", 15);
      p.min_leaf = iparam(spec, "min_leaf", 3);
      p.lambda = param(spec, "lambda", 1.0);
      TreeModel tm;
      tm.ensemble = fit_lgbm_style(X, y, p);
      model.impl = std::move(tm);
      break;
    }
    case Algo::kAdaBoostR2: {
      AdaBoostParams p;
      p.rounds = iparam(spec, "rounds", 100);
      p.weak_depth = iparam(spec, "weak_depth", 3);
      p.min_leaf = iparam(spec, "min_leaf", 1);
      TreeModel tm;
      tm.ensemble = fit_adaboost_r2(X, y, p, rng);
      tm.median_combine = true;
      model.impl = std::move(tm);
      break;
    }
    case Algo::kSvr: {
      SvrParams p;
      p.C = param(spec, "C", 1.0);
      p.epsilon = param(spec, "epsilon", 0.1);
      p.gamma = param(spec, "gamma", 0.0);
      p.degree = iparam(spec, "degree", 0);
      p.coef0 = param(spec, "coef0", 1.0);
      p.tol = param(spec, "tol", 1e-6);
      p.max_passes = iparam(spec, "max_passes", 50000);
      SvrModel svr = fit_svr(X, y, p);
      model.convergence_warning = !svr.converged;
      model.impl = std::move(svr);
      break;
    }
    case Algo::kMlp: {
      MlpParams p;
      p.hidden1 = iparam(spec, "hidden1", 128);
      p.hidden2 = iparam(spec, "hidden2", 64);
      p.learning_rate = param(spec, "learning_rate", 1e-3);
      p.batch = iparam(spec, "batch", 16);
      p.epochs = iparam(spec, "epochs", 2000);
      MlpModel mlp = fit_mlp(X, y, p, rng);
      model.convergence_warning = !mlp.converged;
      model.impl = std::move(mlp);
      break;
    }
    case Algo::kKnn: {
      KnnModel knn;
      knn.train_X = X;
      knn.train_y = y;
      knn.k = std::min<int>(iparam(spec, "k", 5), static_cast<int>(X.rows()));
      if (knn.k < 1) throw ConfigError("knn k must be >= 1");
      model.impl = std::move(knn);
      break;
    }
  }
  return model;
}

Vector knn_predict(const KnnModel& m, const Matrix& X) {
  const Index n = m.train_X.rows();
  Vector out(X.rows());
  std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index t = 0; t < n; ++t)
      dist[static_cast<std::size_t>(t)] = {
          (m.train_X.row(t) - X.row(i)).squaredNorm(), t};
    // Ties on distance resolve to the lower training index.
    std::sort(dist.begin(), dist.end());
    double sum = 0.0;
    for (int j = 0; j < m.k; ++j) sum += m.train_y(dist[static_cast<std::size_t>(j)].second);
    out(i) = sum / static_cast<double>(m.k);
  }
  return out;
}

Vector predict(const TrainedModel& model, const Matrix& X) {
  if (X.cols() != model.train_d)
    throw UsageError("predict dimension mismatch: model trained on d=" +
                     std::to_string(model.train_d) + ", got d=" +
                     std::to_string(X.cols()));
  return std::visit(
      [&](const auto& impl) -> Vector {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, LinearFit>) {
          return predict_linear(impl, X);
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          return impl.median_combine ? predict_weighted_median(impl.ensemble, X)
                                     : predict(impl.ensemble, X);
        } else if constexpr (std::is_same_v<T, SvrModel>) {
          return predict_svr(impl, X);
        } else if constexpr (std::is_same_v<T, MlpModel>) {
          return mlp_forward(impl, X);
        } else {
          return knn_predict(impl, X);
        }
      },
      model.impl);
}

double predict_row(const TrainedModel& model, const RowVector& x) {
  Matrix one(1, x.size());
  one.row(0) = x;
  return predict(model, one)(0);
}

const TreeEnsemble* additive_ensemble(const TrainedModel& model) {
  const auto* tm = std::get_if<TreeModel>(&model.impl);
  if (tm == nullptr || tm->median_combine) return nullptr;
  return &tm->ensemble;
}

const LinearFit* linear_coefficients(const TrainedModel& model) {
  return std::get_if<LinearFit>(&model.impl);
}

}  // namespace shapaudit
