#pragma once

#include <cstdint>
#include <vector>

#include "shapaudit/dataset.hpp"
#include "shapaudit/types.hpp"

namespace shapaudit {

struct Interaction {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

// Synthetic regression data with known importance structure. Features are
// sampled i.i.d. uniform on [-1, 1]; the target is
//   y = sum_j w_j x_j + sum_(a,b) w_ab x_a x_b + gaussian(0, noise_std).
struct SynthSpec {
  Index n = 0;
  Vector weights;
  std::vector<Interaction> interactions;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

Dataset make_synthetic(const SynthSpec& spec);

// True importance order for additive specs: under uniform sampling every
// feature has the same mean absolute deviation, so ordering is by |w_j|.
// Fractional average ranks on ties; rank 1 = most important.
// Throws UsageError when interactions are present.
Vector ground_truth_ranking(const SynthSpec& spec);

}  // namespace shapaudit
