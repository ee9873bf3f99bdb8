#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shapaudit/types.hpp"

namespace shapaudit {

// Tabular regression data: X holds one column per named feature, y the
// target. `standardized` flags whether columns have been rescaled.
struct Dataset {
  std::vector<std::string> feature_names;
  Matrix X;
  Vector y;
  std::vector<std::string> units;  // empty, or one entry per feature
  bool standardized = false;

  Index n() const { return X.rows(); }
  Index d() const { return X.cols(); }
};

// Throws DataError unless: X and y are finite, names are unique and match
// the column count, n >= 2 and d >= 1.
void validate(const Dataset& ds);

Dataset load_csv(const std::string& path, const std::string& target_column);
void write_csv(const Dataset& ds, const std::string& path,
               const std::string& target_column = "target");

struct ScalerParams {
  Vector means;
  Vector stds;  // strictly positive
};

// Column-wise (x - mean) / std with the sample (n-1) std convention.
// y is left untouched. Throws DataError on a zero-variance column.
std::pair<Dataset, ScalerParams> standardize(const Dataset& ds);
Matrix apply_scaler(const Matrix& X, const ScalerParams& p);
Matrix invert_scaler(const Matrix& X, const ScalerParams& p);

struct FoldSplit {
  std::vector<Index> train_indices;
  std::vector<Index> test_indices;
};

// Seeded k-fold partition of 0..n-1; test sets are disjoint, cover all
// indices, and sizes differ by at most one. shuffle=false keeps identity
// order (deterministic regardless).
std::vector<FoldSplit> kfold_split(Index n, int k, std::uint64_t seed,
                                   bool shuffle = true);

struct TargetSummary {
  double mean;
  double std;  // sample convention (n-1)
  double min;
  double max;
};

TargetSummary describe_target(const Dataset& ds);

double sample_std(const Vector& v);

// Four-factor, four-level experimental design used to sanity-check the
// reference dataset against its documented level grid.
struct RsmFactor {
  std::string name;
  std::string unit;
  std::array<double, 4> levels;
};

struct RsmDesign {
  std::array<RsmFactor, 4> factors;
};

// Level grid of the public 96-run PVA electrospinning design.
RsmDesign pva_reference_design();

// Expected CSV schema of the reference dataset (feature columns + target).
const std::vector<std::string>& pva_reference_features();
const std::string& pva_reference_target();

struct DesignCheck {
  std::string factor;
  std::vector<double> off_design_values;  // distinct observed values outside the grid
  bool ok = true;
};

// Non-fatal: reports which observed values per factor fall outside the
// design levels. Requires raw (unstandardized) data and matching d.
std::vector<DesignCheck> validate_against_design(const Dataset& ds,
                                                 const RsmDesign& design);

}  // namespace shapaudit
