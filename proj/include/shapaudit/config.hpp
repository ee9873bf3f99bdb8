#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shapaudit/reliability.hpp"
#include "shapaudit/shap.hpp"
#include "shapaudit/synth.hpp"

namespace shapaudit {

// Fully-resolved run configuration. Exactly one of dataset_path / synth
// feeds the pipeline. The resolved form (minus execution details such as
// the thread count) is echoed into every report for provenance.
struct PipelineConfig {
  std::string dataset_path;
  std::string target_column = "diameter";
  std::optional<SynthSpec> synth;

  std::vector<std::string> zoo_include;  // empty = whole default zoo
  std::map<std::string, std::map<std::string, double>> overrides;

  std::uint64_t seed = 42;
  int folds = 5;
  bool shuffle_folds = true;

  std::string engine = "auto";  // auto | exact | kernel | tree
  BackgroundPolicy background;

  ClassifyThresholds thresholds;
  bool population_rank_std = true;
  std::vector<int> top_k = {1, 2, 3};

  std::string out_dir = "out";
  int threads = 1;
};

PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_json(const nlohmann::json& j);

// Canonical echo of the configuration; deterministic key order. Execution
// details that cannot affect the analysis (thread count, output directory)
// are omitted so reports are schedule- and placement-independent.
nlohmann::ordered_json resolved_config_json(const PipelineConfig& cfg);

ShapEngine parse_engine(const std::string& name);

// Validates model names, fold counts, thresholds, top-k range against the
// default zoo; throws ConfigError.
void validate_config(const PipelineConfig& cfg);

}  // namespace shapaudit
