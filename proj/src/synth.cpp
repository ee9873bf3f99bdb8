#include "shapaudit/synth.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {

Dataset make_synthetic(const SynthSpec& spec) {
  const Index d = spec.weights.size();
  if (d < 1) throw ConfigError("synthetic spec needs at least one weight");
  if (spec.n < 2) throw ConfigError("synthetic spec needs n >= 2");
  if (spec.noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
  for (const auto& it : spec.interactions) {
    if (it.a < 0 || it.b < 0 || it.a >= d || it.b >= d)
      throw ConfigError("interaction index out of range");
  }

  Rng rng(Rng::mix({spec.seed, 0x73796e7468ULL}));
  Dataset ds;
  ds.X.resize(spec.n, d);
  ds.y.resize(spec.n);
  for (Index i = 0; i < spec.n; ++i)
    for (Index j = 0; j < d; ++j) ds.X(i, j) = rng.uniform(-1.0, 1.0);
  for (Index i = 0; i < spec.n; ++i) {
    double v = ds.X.row(i).dot(spec.weights.transpose());
    for (const auto& it : spec.interactions)
      v += it.weight * ds.X(i, it.a) * ds.X(i, it.b);
    if (spec.noise_std > 0.0) v += spec.noise_std * rng.normal();
    ds.y(i) = v;
  }
  for (Index j = 0; j < d; ++j)
    ds.feature_names.push_back("x" + std::to_string(j));
  ds.standardized = false;
  return ds;
}

Vector ground_truth_ranking(const SynthSpec& spec) {
  if (!spec.interactions.empty())
    throw UsageError(
        "ground-truth ranking is defined only for additive specs");
  const Index d = spec.weights.size();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(spec.weights(a)) > std::abs(spec.weights(b));
  });
  Vector ranks(d);
  Index pos = 0;
  while (pos < d) {
    Index end = pos;
    const double mag = std::abs(spec.weights(order[static_cast<std::size_t>(pos)]));
    while (end < d &&
           std::abs(spec.weights(order[static_cast<std::size_t>(end)])) == mag)
      ++end;
    const double avg = 0.5 * static_cast<double>(pos + 1 + end);  // mean of pos+1..end
    for (Index i = pos; i < end; ++i)
      ranks(order[static_cast<std::size_t>(i)]) = avg;
    pos = end;
  }
  return ranks;
}

}  // namespace shapaudit
