#pragma once

#include <string>

#include "shapaudit/config.hpp"
#include "shapaudit/report.hpp"

namespace shapaudit {

struct AuditResult {
  AuditReport report;
  std::vector<Attribution> attributions;  // parallel to report.models
  Vector target_raw;
};

// Full audit: load/generate -> validate -> standardize -> cross-validate
// the zoo -> refit on all rows -> attribute -> rank-reliability analysis.
// Deterministic for a fixed config; independent of the thread count.
AuditResult run_audit(const PipelineConfig& cfg);

// Writes report.json, report.md, the three SVG figures, and one
// attribution CSV per model under cfg.out_dir.
void write_outputs(const AuditResult& result, const PipelineConfig& cfg);

// Fits one model on the full standardized data and writes its per-sample
// attribution CSV; returns the path written.
std::string explain_to_csv(const PipelineConfig& cfg,
                           const std::string& model_name);

// Resolved model list for this config (selection + overrides applied).
std::vector<ModelSpec> configured_zoo(const PipelineConfig& cfg);

// Loads the CSV or generates the synthetic dataset named by the config.
Dataset load_input(const PipelineConfig& cfg);

}  // namespace shapaudit
