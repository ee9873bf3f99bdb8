#pragma once

#include <vector>

#include "shapaudit/types.hpp"

namespace shapaudit {

class Rng;

// Binary regression tree in a flat node array, root at index 0.
// feature == -1 marks a leaf. A sample goes left when x <= threshold.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;
};

// Additive combination: base + sum_t weights[t] * trees[t](x).
struct TreeEnsemble {
  double base = 0.0;
  std::vector<Tree> trees;
  std::vector<double> weights;
};

struct TreeGrowParams {
  int max_depth = 0;   // 0 = unlimited
  int max_leaves = 0;  // 0 = unlimited; enforced by best-first growth
  int min_leaf = 1;
  int mtry = 0;        // features tried per split; 0 = all
  double lambda = 0.0; // L2 on leaf values (leaf = sum / (count + lambda))
  double gamma = 0.0;  // per-split gain penalty
  const std::vector<std::vector<double>>* threshold_grid = nullptr;
  bool leafwise = false;  // best-first growth instead of depth-first
};

// Greedy growth on per-sample targets. Split gain is
//   1/2 [ TL^2/(nL+lambda) + TR^2/(nR+lambda) - T^2/(n+lambda) ] - gamma
// which for lambda = gamma = 0 reduces to half the variance-reduction
// criterion. Thresholds are midpoints of adjacent distinct sorted values,
// or restricted to the per-feature grid when one is given. Gain ties are
// broken toward the lowest feature index, then the lowest threshold.
// rng is consulted only when mtry is in effect.
Tree grow_tree(const Matrix& X, const Vector& target,
               const std::vector<int>& indices, const TreeGrowParams& params,
               Rng* rng = nullptr);

// Interior edges of `bins` equal-frequency bins per feature, deduplicated.
std::vector<std::vector<double>> quantile_bin_edges(const Matrix& X, int bins);

double predict_row(const Tree& tree, const RowVector& x);
Vector predict(const Tree& tree, const Matrix& X);
double predict_row(const TreeEnsemble& ens, const RowVector& x);
Vector predict(const TreeEnsemble& ens, const Matrix& X);

int leaf_count(const Tree& tree);
int max_feature_index(const TreeEnsemble& ens);

}  // namespace shapaudit
