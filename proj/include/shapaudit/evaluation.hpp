#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapaudit/dataset.hpp"
#include "shapaudit/models/zoo.hpp"
#include "shapaudit/types.hpp"

namespace shapaudit {

// Coefficient of determination 1 - SS_res / SS_tot. At most 1, unbounded
// below. Throws DataError when y is constant.
double r2_score(const Vector& y, const Vector& y_hat);

struct CvResult {
  std::string model_name;
  std::vector<double> per_fold_r2;  // NaN marks a skipped (degenerate) fold
  double mean_r2 = 0.0;             // over non-missing folds
  double std_r2 = 0.0;              // sample convention over non-missing folds
  std::vector<std::string> warnings;
  bool any_convergence_warning = false;
};

// Seeded k-fold cross-validation of one spec on a standardized dataset.
// A fold whose test target is constant is recorded as missing and excluded
// from the mean, with a warning.
CvResult cross_validate(const ModelSpec& spec, const Dataset& ds, int k,
                        std::uint64_t seed, bool shuffle = true);

}  // namespace shapaudit
