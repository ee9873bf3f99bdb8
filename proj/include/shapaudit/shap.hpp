#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shapaudit/dataset.hpp"
#include "shapaudit/models/zoo.hpp"
#include "shapaudit/types.hpp"

namespace shapaudit {

// Reference rows defining the expectation against which contributions are
// measured (interventional marginalization).
struct Background {
  Matrix B;
};

struct BackgroundPolicy {
  std::string mode = "all";  // "all" or "sample"
  int size = 20;             // used by "sample"
};

Background make_background(const Dataset& ds, const BackgroundPolicy& policy,
                           std::uint64_t seed);

// Per-sample Shapley values. For every row i of foreground,
// baseline + sum_j phi(i, j) equals the model prediction at that row
// within the engine tolerance.
struct Attribution {
  Matrix phi;       // n x d
  double baseline;  // mean model output over the background
  Matrix foreground;
};

struct GlobalImportance {
  Vector phi_bar;  // mean |phi| per feature, all entries >= 0
  std::vector<std::string> feature_names;
};

enum class ShapEngine { kAuto, kExact, kKernel, kTree };

// Budget sentinel: evaluate every non-trivial coalition.
inline constexpr int kFullEnumeration = 0;

// v(S) = mean over background rows z of f(hybrid), where the hybrid takes
// features in S from x and the rest from z.
double coalition_value(const TrainedModel& model, const RowVector& x,
                       const std::vector<int>& coalition, const Background& bg);

// Exact Shapley values by full coalition enumeration (d <= 20).
Vector shapley_exact(const TrainedModel& model, const RowVector& x,
                     const Background& bg);

// Shapley-kernel weighted least squares over enumerated or sampled
// coalitions, with the empty/full efficiency constraints eliminated
// exactly. budget = kFullEnumeration (or >= 2^d - 2) reproduces
// shapley_exact; otherwise at least d + 2 coalition evaluations are
// required.
Vector kernel_shap(const TrainedModel& model, const RowVector& x,
                   const Background& bg, int budget = kFullEnumeration,
                   std::uint64_t seed = 0);

// Interventional Shapley values for additive tree ensembles, computed per
// background row from the leaves reachable by hybrids and averaged.
Vector tree_shap(const TreeEnsemble& ensemble, const RowVector& x,
                 const Background& bg);

GlobalImportance global_importance(const Attribution& attr,
                                   const std::vector<std::string>& names);

// Attributes every row of ds. kAuto picks tree_shap for additive tree
// models, exact enumeration for d <= 12, and the kernel engine beyond.
std::pair<Attribution, GlobalImportance> explain_model(
    const TrainedModel& model, const Dataset& ds, ShapEngine engine,
    const Background& bg, std::uint64_t seed = 0);

// Engine actually selected by kAuto for this model/dimension.
ShapEngine resolve_engine(const TrainedModel& model, Index d,
                          ShapEngine requested);
const char* engine_name(ShapEngine e);

void write_attribution_csv(const Attribution& attr,
                           const std::vector<std::string>& names,
                           const std::string& path);

}  // namespace shapaudit
