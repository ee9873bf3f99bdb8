#include "shapaudit/evaluation.hpp"

#include <cmath>
#include <limits>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {

double r2_score(const Vector& y, const Vector& y_hat) {
  if (y.size() != y_hat.size()) throw UsageError("r2_score length mismatch");
  if (y.size() < 2) throw UsageError("r2_score requires length >= 2");
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  if (ss_tot == 0.0)
    throw DataError("r2_score undefined for a constant target");
  const double ss_res = (y - y_hat).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

CvResult cross_validate(const ModelSpec& spec, const Dataset& ds, int k,
                        std::uint64_t seed, bool shuffle) {
  validate(ds);
  const auto folds = kfold_split(ds.n(), k, seed, shuffle);

  CvResult res;
  res.model_name = spec.name;
  double sum = 0.0;
  int counted = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& fold = folds[f];
    Matrix Xtr(static_cast<Index>(fold.train_indices.size()), ds.d());
    Vector ytr(static_cast<Index>(fold.train_indices.size()));
    for (std::size_t i = 0; i < fold.train_indices.size(); ++i) {
      Xtr.row(static_cast<Index>(i)) = ds.X.row(fold.train_indices[i]);
      ytr(static_cast<Index>(i)) = ds.y(fold.train_indices[i]);
    }
    Matrix Xte(static_cast<Index>(fold.test_indices.size()), ds.d());
    Vector yte(static_cast<Index>(fold.test_indices.size()));
    for (std::size_t i = 0; i < fold.test_indices.size(); ++i) {
      Xte.row(static_cast<Index>(i)) = ds.X.row(fold.test_indices[i]);
      yte(static_cast<Index>(i)) = ds.y(fold.test_indices[i]);
    }

    const TrainedModel model =
        fit(spec, Xtr, ytr, Rng::mix({seed, static_cast<std::uint64_t>(f)}));
    res.any_convergence_warning |= model.convergence_warning;

    const double tot = (yte.array() - yte.mean()).square().sum();
    if (tot == 0.0) {
      res.per_fold_r2.push_back(std::numeric_limits<double>::quiet_NaN());
      res.warnings.push_back("fold " + std::to_string(f) +
                             ": constant test target, fold excluded");
      continue;
    }
    const double r2 = r2_score(yte, predict(model, Xte));
    res.per_fold_r2.push_back(r2);
    sum += r2;
    ++counted;
  }
  if (counted == 0)
    throw DataError("all folds had constant test targets for model " +
                    spec.name);
  res.mean_r2 = sum / counted;
  double sq = 0.0;
  for (double v : res.per_fold_r2)
    if (!std::isnan(v)) sq += (v - res.mean_r2) * (v - res.mean_r2);
  res.std_r2 = counted > 1 ? std::sqrt(sq / (counted - 1)) : 0.0;
  return res;
}

}  // namespace shapaudit
