#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "shapaudit/models/ensembles.hpp"
#include "shapaudit/models/linear.hpp"
#include "shapaudit/models/mlp.hpp"
#include "shapaudit/models/svr.hpp"
#include "shapaudit/models/tree.hpp"
#include "shapaudit/types.hpp"

namespace shapaudit {

enum class Family { kLinear, kTree, kKernel, kNeural, kInstance };

enum class Algo {
  kOls,
  kRidge,
  kElasticNet,
  kCart,
  kRandomForest,
  kGradientBoosting,
  kXgbStyle,
  kLgbmStyle,
  kAdaBoostR2,
  kSvr,
  kMlp,
  kKnn,
};

const char* family_name(Family f);

// Declarative model configuration. Hyperparameters are a flat name->value
// map; the algorithm decides which keys it reads. seed_salt feeds the
// per-model RNG stream so models never share randomness.
struct ModelSpec {
  std::string name;
  Family family = Family::kLinear;
  Algo algo = Algo::kOls;
  std::map<std::string, double> hyper;
  std::uint64_t seed_salt = 0;
  bool variant = false;  // filler configuration beyond the core set
};

struct TreeModel {
  TreeEnsemble ensemble;
  bool median_combine = false;  // weighted-median stage combination
};

struct KnnModel {
  Matrix train_X;
  Vector train_y;
  int k = 5;
};

using ModelImpl = std::variant<LinearFit, TreeModel, SvrModel, MlpModel, KnnModel>;

struct TrainedModel {
  ModelSpec spec;
  ModelImpl impl;
  bool convergence_warning = false;
  Index train_d = 0;
};

// The fixed 21-entry zoo: 16 core configurations across five families plus
// 5 flagged variants. Names are unique; hyperparameters are pinned here so
// runs are reproducible.
std::vector<ModelSpec> default_zoo();

const ModelSpec& find_spec(const std::vector<ModelSpec>& zoo,
                           const std::string& name);

TrainedModel fit(const ModelSpec& spec, const Matrix& X, const Vector& y,
                 std::uint64_t master_seed);

Vector predict(const TrainedModel& model, const Matrix& X);
double predict_row(const TrainedModel& model, const RowVector& x);

// Non-null only for tree models whose stages combine additively.
const TreeEnsemble* additive_ensemble(const TrainedModel& model);

// Non-null for linear-family models.
const LinearFit* linear_coefficients(const TrainedModel& model);

Vector knn_predict(const KnnModel& m, const Matrix& X);

}  // namespace shapaudit
