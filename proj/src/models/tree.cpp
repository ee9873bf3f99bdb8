#include "shapaudit/models/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {
namespace {

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  bool valid = false;
};

double leaf_objective(double sum, double count, double lambda) {
  return sum * sum / (count + lambda);
}

// Scans one feature of a node's samples; keeps the strictly best gain so the
// first candidate wins ties (features ascending, thresholds ascending).
void scan_feature(const Matrix& X, const Vector& target,
                  const std::vector<int>& indices, int feature,
                  const TreeGrowParams& p, SplitCandidate& best) {
  const std::size_t n = indices.size();
  std::vector<std::pair<double, double>> vals(n);  // (x, t) sorted by x
  for (std::size_t i = 0; i < n; ++i)
    vals[i] = {X(indices[i], feature), target(indices[i])};
  std::sort(vals.begin(), vals.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double total = 0.0;
  for (const auto& v : vals) total += v.second;
  const double nn = static_cast<double>(n);
  const double parent = leaf_objective(total, nn, p.lambda);

  auto consider = [&](double thr, std::size_t n_left, double sum_left) {
    const double n_right = nn - static_cast<double>(n_left);
    if (static_cast<int>(n_left) < p.min_leaf ||
        static_cast<int>(n_right) < p.min_leaf)
      return;
    const double gain =
        0.5 * (leaf_objective(sum_left, static_cast<double>(n_left), p.lambda) +
               leaf_objective(total - sum_left, n_right, p.lambda) - parent) -
        p.gamma;
    if (gain > best.gain || !best.valid) {
      if (gain <= 0.0) return;
      best = {feature, thr, gain, true};
    }
  };

  if (p.threshold_grid != nullptr) {
    const auto& grid = (*p.threshold_grid)[static_cast<std::size_t>(feature)];
    std::size_t pos = 0;
    double cum = 0.0;
    for (double edge : grid) {
      while (pos < n && vals[pos].first <= edge) cum += vals[pos++].second;
      if (pos == 0 || pos == n) continue;
      consider(edge, pos, cum);
    }
    return;
  }

  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cum += vals[i].second;
    const double lo = vals[i].first;
    const double hi = vals[i + 1].first;
    if (lo == hi) continue;
    double thr = lo + 0.5 * (hi - lo);
    if (!(lo < thr && thr < hi)) thr = lo;  // rounding pushed it onto a value
    consider(thr, i + 1, cum);
  }
}

class Grower {
 public:
  Grower(const Matrix& X, const Vector& target, const TreeGrowParams& p,
         Rng* rng)
      : X_(X), target_(target), p_(p), rng_(rng) {}

  Tree grow(const std::vector<int>& indices) {
    tree_.nodes.clear();
    if (p_.leafwise)
      grow_leafwise(indices);
    else
      build_depthwise(indices, 0);
    return std::move(tree_);
  }

 private:
  const Matrix& X_;
  const Vector& target_;
  const TreeGrowParams& p_;
  Rng* rng_;
  Tree tree_;

  double leaf_value(const std::vector<int>& indices) const {
    double sum = 0.0;
    for (int i : indices) sum += target_(i);
    return sum / (static_cast<double>(indices.size()) + p_.lambda);
  }

  std::vector<int> candidate_features() {
    const int d = static_cast<int>(X_.cols());
    std::vector<int> feats(static_cast<std::size_t>(d));
    std::iota(feats.begin(), feats.end(), 0);
    if (p_.mtry > 0 && p_.mtry < d && rng_ != nullptr) {
      for (int i = 0; i < p_.mtry; ++i) {
        const int j =
            i + static_cast<int>(rng_->uniform_int(static_cast<std::uint64_t>(d - i)));
        std::swap(feats[static_cast<std::size_t>(i)],
                  feats[static_cast<std::size_t>(j)]);
      }
      feats.resize(static_cast<std::size_t>(p_.mtry));
      std::sort(feats.begin(), feats.end());
    }
    return feats;
  }

  SplitCandidate best_split(const std::vector<int>& indices) {
    SplitCandidate best;
    if (static_cast<int>(indices.size()) < 2 * p_.min_leaf) return best;
    for (int f : candidate_features())
      scan_feature(X_, target_, indices, f, p_, best);
    return best;
  }

  void partition(const std::vector<int>& indices, const SplitCandidate& s,
                 std::vector<int>& left, std::vector<int>& right) const {
    for (int i : indices) {
      if (X_(i, s.feature) <= s.threshold)
        left.push_back(i);
      else
        right.push_back(i);
    }
  }

  int build_depthwise(const std::vector<int>& indices, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    if (p_.max_depth > 0 && depth >= p_.max_depth) {
      tree_.nodes[id].value = leaf_value(indices);
      return id;
    }
    const SplitCandidate s = best_split(indices);
    if (!s.valid) {
      tree_.nodes[id].value = leaf_value(indices);
      return id;
    }
    std::vector<int> left, right;
    partition(indices, s, left, right);
    tree_.nodes[id].feature = s.feature;
    tree_.nodes[id].threshold = s.threshold;
    const int l = build_depthwise(left, depth + 1);
    const int r = build_depthwise(right, depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  struct OpenLeaf {
    int node_id;
    int depth;
    std::vector<int> indices;
    SplitCandidate split;
  };

  void grow_leafwise(const std::vector<int>& indices) {
    tree_.nodes.emplace_back();
    tree_.nodes[0].value = leaf_value(indices);
    std::vector<OpenLeaf> open;
    open.push_back({0, 0, indices, best_split(indices)});
    int leaves = 1;
    while (p_.max_leaves <= 0 || leaves < p_.max_leaves) {
      // Best positive gain; ties go to the earliest-created node.
      int pick = -1;
      for (std::size_t i = 0; i < open.size(); ++i) {
        const auto& cand = open[i];
        if (!cand.split.valid) continue;
        if (p_.max_depth > 0 && cand.depth >= p_.max_depth) continue;
        if (pick < 0 ||
            cand.split.gain > open[static_cast<std::size_t>(pick)].split.gain)
          pick = static_cast<int>(i);
      }
      if (pick < 0) break;

      OpenLeaf leaf = std::move(open[static_cast<std::size_t>(pick)]);
      open.erase(open.begin() + pick);

      std::vector<int> left, right;
      partition(leaf.indices, leaf.split, left, right);
      const int l = static_cast<int>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes[static_cast<std::size_t>(l)].value = leaf_value(left);
      const int r = static_cast<int>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes[static_cast<std::size_t>(r)].value = leaf_value(right);

      auto& node = tree_.nodes[static_cast<std::size_t>(leaf.node_id)];
      node.feature = leaf.split.feature;
      node.threshold = leaf.split.threshold;
      node.left = l;
      node.right = r;
      node.value = 0.0;

      open.push_back({l, leaf.depth + 1, std::move(left), {}});
      open.back().split = best_split(open.back().indices);
      open.push_back({r, leaf.depth + 1, std::move(right), {}});
      open.back().split = best_split(open.back().indices);
      ++leaves;
    }
  }
};

}  // namespace

Tree grow_tree(const Matrix& X, const Vector& target,
               const std::vector<int>& indices, const TreeGrowParams& params,
               Rng* rng) {
  if (indices.empty()) throw UsageError("cannot grow a tree on zero samples");
  Grower grower(X, target, params, rng);
  return grower.grow(indices);
}

std::vector<std::vector<double>> quantile_bin_edges(const Matrix& X, int bins) {
  if (bins < 2) throw ConfigError("binning requires at least 2 bins");
  const Index n = X.rows();
  std::vector<std::vector<double>> edges(static_cast<std::size_t>(X.cols()));
  for (Index j = 0; j < X.cols(); ++j) {
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = X(i, j);
    std::sort(col.begin(), col.end());
    auto& out = edges[static_cast<std::size_t>(j)];
    for (int b = 1; b < bins; ++b) {
      const Index pos = static_cast<Index>(b) * n / bins;
      if (pos <= 0 || pos >= n) continue;
      const double lo = col[static_cast<std::size_t>(pos - 1)];
      const double hi = col[static_cast<std::size_t>(pos)];
      if (lo == hi) continue;
      double edge = lo + 0.5 * (hi - lo);
      if (!(lo < edge && edge < hi)) edge = lo;
      if (out.empty() || edge > out.back()) out.push_back(edge);
    }
  }
  return edges;
}

double predict_row(const Tree& tree, const RowVector& x) {
  int id = 0;
  while (tree.nodes[static_cast<std::size_t>(id)].feature >= 0) {
    const auto& node = tree.nodes[static_cast<std::size_t>(id)];
    id = (x(node.feature) <= node.threshold) ? node.left : node.right;
  }
  return tree.nodes[static_cast<std::size_t>(id)].value;
}

Vector predict(const Tree& tree, const Matrix& X) {
  Vector out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) out(i) = predict_row(tree, X.row(i));
  return out;
}

double predict_row(const TreeEnsemble& ens, const RowVector& x) {
  double v = ens.base;
  for (std::size_t t = 0; t < ens.trees.size(); ++t)
    v += ens.weights[t] * predict_row(ens.trees[t], x);
  return v;
}

Vector predict(const TreeEnsemble& ens, const Matrix& X) {
  Vector out = Vector::Constant(X.rows(), ens.base);
  for (std::size_t t = 0; t < ens.trees.size(); ++t)
    out += ens.weights[t] * predict(ens.trees[t], X);
  return out;
}

int leaf_count(const Tree& tree) {
  int count = 0;
  for (const auto& node : tree.nodes)
    if (node.feature < 0) ++count;
  return count;
}

int max_feature_index(const TreeEnsemble& ens) {
  int mx = -1;
  for (const auto& tree : ens.trees)
    for (const auto& node : tree.nodes)
      if (node.feature > mx) mx = node.feature;
  return mx;
}

}  // namespace shapaudit
