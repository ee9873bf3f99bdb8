#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shapaudit/config.hpp"
#include "shapaudit/dataset.hpp"
#include "shapaudit/evaluation.hpp"
#include "shapaudit/reliability.hpp"
#include "shapaudit/shap.hpp"

namespace shapaudit {

struct ModelReport {
  std::string name;
  std::string family;
  bool variant = false;
  std::map<std::string, double> hyper;
  CvResult cv;
  Vector phi_bar;
  Vector rank_row;
  std::string shap_engine;
  bool convergence_warning = false;
};

struct ExcludedModel {
  std::string name;
  std::string reason;
};

struct AuditReport {
  std::string generated_at;  // the only field excluded from determinism checks
  std::uint64_t seed = 0;
  std::string config_hash;  // FNV-1a of the canonical config dump
  PipelineConfig config;

  Index n = 0;
  Index d = 0;
  std::vector<std::string> feature_names;
  TargetSummary target;
  std::vector<DesignCheck> design_checks;  // reference-schema datasets only
  std::string standardization = "global (full dataset, before modeling)";

  std::vector<ModelReport> models;
  std::vector<ExcludedModel> excluded;

  RankMatrix rank_matrix;
  std::vector<FeatureReliability> features;
  AgreementStats agreement;

  std::vector<std::string> notes;
};

nlohmann::ordered_json report_to_json(const AuditReport& report);
std::string report_to_markdown(const AuditReport& report);

std::string iso_utc_now();
std::string fnv1a_hex(const std::string& bytes);

// Shortest decimal form that round-trips; used everywhere numbers are
// printed so identical runs produce identical bytes.
std::string format_double(double v);
std::string format_fixed(double v, int decimals);

}  // namespace shapaudit
