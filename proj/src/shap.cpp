#include "shapaudit/shap.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {
namespace {

constexpr int kExactDimLimit = 20;
constexpr int kAutoExactDim = 12;
constexpr Index kPredictChunk = 8192;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i)
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Mean model output per coalition mask over all background rows, with the
// hybrid rows evaluated in chunked batches.
Vector coalition_values_batch(const TrainedModel& model, const RowVector& x,
                              const Background& bg,
                              const std::vector<std::uint32_t>& masks) {
  const Index m = bg.B.rows();
  const Index d = bg.B.cols();
  const std::size_t n_masks = masks.size();
  Vector values(static_cast<Index>(n_masks));

  const std::size_t masks_per_chunk = std::max<std::size_t>(
      1, static_cast<std::size_t>(kPredictChunk / std::max<Index>(m, 1)));
  Matrix hybrid(static_cast<Index>(masks_per_chunk) * m, d);

  std::size_t done = 0;
  while (done < n_masks) {
    const std::size_t count = std::min(masks_per_chunk, n_masks - done);
    for (std::size_t s = 0; s < count; ++s) {
      const std::uint32_t mask = masks[done + s];
      Eigen::Block<Matrix> block =
          hybrid.middleRows(static_cast<Index>(s) * m, m);
      block = bg.B;
      for (Index j = 0; j < d; ++j)
        if (mask & (1u << j)) block.col(j).setConstant(x(j));
    }
    const Vector pred =
        predict(model, hybrid.topRows(static_cast<Index>(count) * m));
    for (std::size_t s = 0; s < count; ++s)
      values(static_cast<Index>(done + s)) =
          pred.segment(static_cast<Index>(s) * m, m).mean();
    done += count;
  }
  return values;
}

std::uint32_t full_mask(Index d) {
  return d >= 32 ? ~0u : ((1u << d) - 1u);
}

// Constrained Shapley-kernel weighted least squares. Eliminates the last
// feature's coefficient via sum(phi) = v(full) - v(empty), so the
// efficiency constraints hold exactly.
Vector solve_kernel_system(Index d, const std::vector<std::uint32_t>& masks,
                           const Vector& values, double v_empty, double v_full,
                           int min_budget) {
  const double delta = v_full - v_empty;
  const Index rows = static_cast<Index>(masks.size());
  Matrix A(rows, d - 1);
  Vector t(rows);
  for (Index r = 0; r < rows; ++r) {
    const std::uint32_t mask = masks[static_cast<std::size_t>(r)];
    const int size = std::popcount(mask);
    const double w =
        (static_cast<double>(d) - 1.0) /
        (binomial(static_cast<int>(d), size) * size * (static_cast<int>(d) - size));
    const double sw = std::sqrt(w);
    const bool has_last = (mask >> (d - 1)) & 1u;
    for (Index j = 0; j + 1 < d; ++j) {
      const double zj = (mask >> j) & 1u ? 1.0 : 0.0;
      A(r, j) = sw * (zj - (has_last ? 1.0 : 0.0));
    }
    t(r) = sw * (values(r) - v_empty - (has_last ? delta : 0.0));
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  if (qr.rank() < d - 1)
    throw NumericError(
        "kernel regression system is rank deficient; at least d+2 = " +
        std::to_string(min_budget) + " distinct coalition evaluations needed");
  const Vector head = qr.solve(t);

  Vector phi(d);
  phi.head(d - 1) = head;
  phi(d - 1) = delta - head.sum();
  return phi;
}

struct TreeWalker {
  const Tree* tree;
  const double* x;
  const double* z;
  std::vector<int> x_viol;
  std::vector<int> z_viol;
  std::vector<int> path_count;
  std::vector<int> path_features;
  double* phi;  // accumulated output, scaled by caller's weight

  double scale = 1.0;

  void run(double weight) {
    scale = weight;
    walk(0);
  }

  void walk(int id) {
    const TreeNode& node = (*tree).nodes[static_cast<std::size_t>(id)];
    if (node.feature < 0) {
      at_leaf(node.value);
      return;
    }
    const int j = node.feature;
    const bool x_left = x[j] <= node.threshold;
    const bool z_left = z[j] <= node.threshold;

    descend(node.left, j, !x_left, !z_left);
    descend(node.right, j, x_left, z_left);
  }

  void descend(int child, int j, bool x_violates, bool z_violates) {
    x_viol[j] += x_violates;
    z_viol[j] += z_violates;
    const bool added = path_count[j]++ == 0;
    if (added) path_features.push_back(j);
    if (x_viol[j] == 0 || z_viol[j] == 0) walk(child);  // else unreachable
    if (--path_count[j] == 0) path_features.pop_back();
    x_viol[j] -= x_violates;
    z_viol[j] -= z_violates;
  }

  // Leaf game: reached iff every "present" feature follows x's side and
  // every "absent" one follows z's side. With p features needing presence
  // and q needing absence, the Shapley value of the indicator is
  //   +1/(p * C(p+q, p)) for the p features, -1/(q * C(p+q, q)) for the q.
  void at_leaf(double value) {
    int p = 0, q = 0;
    for (int j : path_features) {
      const bool xo = x_viol[j] == 0;
      const bool zo = z_viol[j] == 0;
      if (xo && !zo)
        ++p;
      else if (!xo && zo)
        ++q;
    }
    if (p == 0 && q == 0) return;
    const double contrib = value * scale;
    if (p > 0) {
      const double cp = 1.0 / (p * binomial(p + q, p));
      for (int j : path_features)
        if (x_viol[j] == 0 && z_viol[j] > 0) phi[j] += contrib * cp;
    }
    if (q > 0) {
      const double cq = 1.0 / (q * binomial(p + q, q));
      for (int j : path_features)
        if (x_viol[j] > 0 && z_viol[j] == 0) phi[j] -= contrib * cq;
    }
  }
};

}  // namespace

Background make_background(const Dataset& ds, const BackgroundPolicy& policy,
                           std::uint64_t seed) {
  if (policy.mode == "all") return Background{ds.X};
  if (policy.mode != "sample")
    throw ConfigError("unknown background policy: " + policy.mode);
  if (policy.size < 1) throw ConfigError("background sample size must be >= 1");
  const Index m = std::min<Index>(policy.size, ds.n());
  std::vector<Index> order(static_cast<std::size_t>(ds.n()));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(Rng::mix({seed, 0x6267ULL}));
  rng.shuffle(order);
  Background bg;
  bg.B.resize(m, ds.d());
  for (Index i = 0; i < m; ++i) bg.B.row(i) = ds.X.row(order[static_cast<std::size_t>(i)]);
  return bg;
}

double coalition_value(const TrainedModel& model, const RowVector& x,
                       const std::vector<int>& coalition,
                       const Background& bg) {
  std::uint32_t mask = 0;
  for (int j : coalition) {
    if (j < 0 || j >= static_cast<int>(bg.B.cols()))
      throw UsageError("coalition feature index out of range");
    mask |= 1u << j;
  }
  return coalition_values_batch(model, x, bg, {mask})(0);
}

Vector shapley_exact(const TrainedModel& model, const RowVector& x,
                     const Background& bg) {
  const Index d = bg.B.cols();
  if (d > kExactDimLimit)
    throw ConfigError("exact enumeration supports d <= " +
                      std::to_string(kExactDimLimit) +
                      "; use the kernel engine for d = " + std::to_string(d));
  const std::uint32_t n_masks = 1u << d;
  std::vector<std::uint32_t> masks(n_masks);
  std::iota(masks.begin(), masks.end(), 0u);
  const Vector v = coalition_values_batch(model, x, bg, masks);

  // Marginal-contribution weight for |S| = s: s!(d-1-s)!/d! = 1/(d*C(d-1,s)).
  std::vector<double> weight(static_cast<std::size_t>(d));
  for (Index s = 0; s < d; ++s)
    weight[static_cast<std::size_t>(s)] =
        1.0 / (static_cast<double>(d) *
               binomial(static_cast<int>(d) - 1, static_cast<int>(s)));

  Vector phi = Vector::Zero(d);
  for (Index j = 0; j < d; ++j) {
    const std::uint32_t bit = 1u << j;
    double acc = 0.0;
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      acc += weight[static_cast<std::size_t>(std::popcount(mask))] *
             (v(static_cast<Index>(mask | bit)) - v(static_cast<Index>(mask)));
    }
    phi(j) = acc;
  }
  return phi;
}

Vector kernel_shap(const TrainedModel& model, const RowVector& x,
                   const Background& bg, int budget, std::uint64_t seed) {
  const Index d = bg.B.cols();
  if (d < 2) throw ConfigError("kernel engine requires d >= 2");
  const int min_budget = static_cast<int>(d) + 2;

  const double total_nontrivial =
      d < 31 ? std::ldexp(1.0, static_cast<int>(d)) - 2.0 : 1e18;
  const bool full =
      budget == kFullEnumeration || static_cast<double>(budget) >= total_nontrivial;
  if (!full && budget < min_budget)
    throw NumericError("kernel budget " + std::to_string(budget) +
                       " too small; at least d+2 = " +
                       std::to_string(min_budget) +
                       " coalition evaluations needed");

  std::vector<std::uint32_t> masks;
  if (full) {
    const std::uint32_t all = full_mask(d);
    masks.reserve(static_cast<std::size_t>(total_nontrivial));
    for (std::uint32_t mask = 1; mask < all; ++mask) masks.push_back(mask);
  } else {
    // Singletons and their complements pin the system's rank, the rest of
    // the budget is paired size-weighted sampling.
    const std::uint32_t all = full_mask(d);
    for (Index j = 0; j < d && static_cast<int>(masks.size()) < budget; ++j)
      masks.push_back(1u << j);
    for (Index j = 0; j < d && static_cast<int>(masks.size()) < budget; ++j)
      masks.push_back(all ^ (1u << j));

    std::vector<double> size_cdf(static_cast<std::size_t>(d - 1));
    double acc = 0.0;
    for (int s = 1; s < d; ++s) {
      acc += (static_cast<double>(d) - 1.0) / (static_cast<double>(s) * (d - s));
      size_cdf[static_cast<std::size_t>(s - 1)] = acc;
    }
    Rng rng(Rng::mix({seed, 0x6b73686170ULL}));
    std::vector<int> pool(static_cast<std::size_t>(d));
    while (static_cast<int>(masks.size()) < budget) {
      const double u = rng.uniform() * acc;
      int s = 1;
      while (s < d - 1 && size_cdf[static_cast<std::size_t>(s - 1)] < u) ++s;
      std::iota(pool.begin(), pool.end(), 0);
      std::uint32_t mask = 0;
      for (int i = 0; i < s; ++i) {
        const int j =
            i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        mask |= 1u << pool[static_cast<std::size_t>(i)];
      }
      masks.push_back(mask);
      if (static_cast<int>(masks.size()) < budget) masks.push_back(all ^ mask);
    }
  }

  std::vector<std::uint32_t> eval_masks = masks;
  eval_masks.push_back(0u);
  eval_masks.push_back(full_mask(d));
  const Vector values = coalition_values_batch(model, x, bg, eval_masks);
  const double v_empty = values(static_cast<Index>(masks.size()));
  const double v_full = values(static_cast<Index>(masks.size()) + 1);

  return solve_kernel_system(d, masks, values.head(static_cast<Index>(masks.size())),
                             v_empty, v_full, min_budget);
}

Vector tree_shap(const TreeEnsemble& ensemble, const RowVector& x,
                 const Background& bg) {
  const Index d = bg.B.cols();
  const Index m = bg.B.rows();
  if (max_feature_index(ensemble) >= d)
    throw UsageError("ensemble references features beyond the background d");

  Vector phi = Vector::Zero(d);
  std::vector<double> x_buf(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) x_buf[static_cast<std::size_t>(j)] = x(j);

  TreeWalker walker;
  walker.x = x_buf.data();
  walker.x_viol.assign(static_cast<std::size_t>(d), 0);
  walker.z_viol.assign(static_cast<std::size_t>(d), 0);
  walker.path_count.assign(static_cast<std::size_t>(d), 0);
  walker.phi = phi.data();

  std::vector<double> z_buf(static_cast<std::size_t>(d));
  const double inv_m = 1.0 / static_cast<double>(m);
  for (Index r = 0; r < m; ++r) {
    for (Index j = 0; j < d; ++j) z_buf[static_cast<std::size_t>(j)] = bg.B(r, j);
    walker.z = z_buf.data();
    for (std::size_t t = 0; t < ensemble.trees.size(); ++t) {
      walker.tree = &ensemble.trees[t];
      walker.run(ensemble.weights[t] * inv_m);
    }
  }
  return phi;
}

GlobalImportance global_importance(const Attribution& attr,
                                   const std::vector<std::string>& names) {
  if (attr.phi.rows() < 1) throw UsageError("attribution has no rows");
  GlobalImportance gi;
  gi.phi_bar = attr.phi.cwiseAbs().colwise().mean();
  gi.feature_names = names;
  return gi;
}

ShapEngine resolve_engine(const TrainedModel& model, Index d,
                          ShapEngine requested) {
  if (requested != ShapEngine::kAuto) return requested;
  if (additive_ensemble(model) != nullptr) return ShapEngine::kTree;
  return d <= kAutoExactDim ? ShapEngine::kExact : ShapEngine::kKernel;
}

const char* engine_name(ShapEngine e) {
  switch (e) {
    case ShapEngine::kAuto: return "auto";
    case ShapEngine::kExact: return "exact";
    case ShapEngine::kKernel: return "kernel";
    case ShapEngine::kTree: return "tree";
  }
  return "unknown";
}

std::pair<Attribution, GlobalImportance> explain_model(
    const TrainedModel& model, const Dataset& ds, ShapEngine engine,
    const Background& bg, std::uint64_t seed) {
  if (ds.d() != model.train_d)
    throw UsageError("model was trained on a different feature space");
  if (bg.B.cols() != ds.d())
    throw UsageError("background feature count mismatch");

  const ShapEngine resolved = resolve_engine(model, ds.d(), engine);
  const TreeEnsemble* ens = additive_ensemble(model);
  if (resolved == ShapEngine::kTree && ens == nullptr)
    throw UsageError("tree engine requested for a non-additive-tree model");

  Attribution attr;
  attr.foreground = ds.X;
  attr.phi.resize(ds.n(), ds.d());
  attr.baseline = predict(model, bg.B).mean();

  for (Index i = 0; i < ds.n(); ++i) {
    switch (resolved) {
      case ShapEngine::kTree:
        attr.phi.row(i) = tree_shap(*ens, ds.X.row(i), bg);
        break;
      case ShapEngine::kExact:
        attr.phi.row(i) = shapley_exact(model, ds.X.row(i), bg);
        break;
      case ShapEngine::kKernel:
        attr.phi.row(i) =
            kernel_shap(model, ds.X.row(i), bg, kFullEnumeration, seed);
        break;
      case ShapEngine::kAuto:
        break;  // unreachable
    }
  }

  // Efficiency: baseline + sum_j phi_ij must reproduce f(x_i).
  const Vector fx = predict(model, ds.X);
  const double scale =
      std::max({1.0, std::abs(attr.baseline), fx.cwiseAbs().maxCoeff()});
  const double tol =
      (resolved == ShapEngine::kKernel ? 1e-6 : 1e-10) * scale;
  for (Index i = 0; i < ds.n(); ++i) {
    const double gap =
        std::abs(attr.baseline + attr.phi.row(i).sum() - fx(i));
    if (gap > tol)
      throw NumericError("attribution efficiency violated for model " +
                         model.spec.name + " at row " + std::to_string(i) +
                         " (gap " + std::to_string(gap) + ")");
  }

  GlobalImportance gi = global_importance(attr, ds.feature_names);
  return {std::move(attr), std::move(gi)};
}

void write_attribution_csv(const Attribution& attr,
                           const std::vector<std::string>& names,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& name : names) out << name << ',';
  out << "baseline\n";
  char buf[32];
  auto fmt = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (Index i = 0; i < attr.phi.rows(); ++i) {
    for (Index j = 0; j < attr.phi.cols(); ++j) out << fmt(attr.phi(i, j)) << ',';
    out << fmt(attr.baseline) << '\n';
  }
  if (!out) throw DataError("failed writing file: " + path);
}

}  // namespace shapaudit
