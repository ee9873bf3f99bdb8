#include "shapaudit/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "shapaudit/errors.hpp"
#include "shapaudit/svg.hpp"

namespace shapaudit {

namespace fs = std::filesystem;

std::vector<ModelSpec> configured_zoo(const PipelineConfig& cfg) {
  std::vector<ModelSpec> zoo = default_zoo();
  if (!cfg.zoo_include.empty()) {
    const std::set<std::string> keep(cfg.zoo_include.begin(),
                                     cfg.zoo_include.end());
    std::vector<ModelSpec> filtered;
    for (auto& spec : zoo)
      if (keep.count(spec.name)) filtered.push_back(std::move(spec));
    zoo = std::move(filtered);
  }
  for (auto& spec : zoo) {
    const auto it = cfg.overrides.find(spec.name);
    if (it == cfg.overrides.end()) continue;
    for (const auto& [key, value] : it->second) spec.hyper[key] = value;
  }
  return zoo;
}

Dataset load_input(const PipelineConfig& cfg) {
  if (cfg.synth.has_value()) return make_synthetic(*cfg.synth);
  return load_csv(cfg.dataset_path, cfg.target_column);
}

namespace {

struct PerModelOutcome {
  std::optional<ModelReport> report;
  std::optional<Attribution> attribution;
  std::string failure;
};

PerModelOutcome process_model(const ModelSpec& spec, const Dataset& sds,
                              const Background& bg,
                              const PipelineConfig& cfg) {
  PerModelOutcome out;
  try {
    ModelReport mr;
    mr.name = spec.name;
    mr.family = family_name(spec.family);
    mr.variant = spec.variant;
    mr.hyper = spec.hyper;
    mr.cv = cross_validate(spec, sds, cfg.folds, cfg.seed, cfg.shuffle_folds);

    TrainedModel model = fit(spec, sds.X, sds.y, cfg.seed);
    mr.convergence_warning =
        model.convergence_warning || mr.cv.any_convergence_warning;

    const ShapEngine requested = parse_engine(cfg.engine);
    const ShapEngine resolved = resolve_engine(model, sds.d(), requested);
    auto [attr, gi] = explain_model(model, sds, resolved, bg, cfg.seed);
    mr.shap_engine = engine_name(resolved);
    mr.phi_bar = gi.phi_bar;
    mr.rank_row = rank_features(gi);

    out.report = std::move(mr);
    out.attribution = std::move(attr);
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  return out;
}

}  // namespace

AuditResult run_audit(const PipelineConfig& cfg) {
  validate_config(cfg);
  const Dataset raw = load_input(cfg);
  validate(raw);

  AuditResult result;
  AuditReport& report = result.report;
  result.target_raw = raw.y;
  report.config = cfg;
  report.seed = cfg.seed;
  report.generated_at = iso_utc_now();
  report.config_hash = fnv1a_hex(resolved_config_json(cfg).dump());
  report.n = raw.n();
  report.d = raw.d();
  report.feature_names = raw.feature_names;
  report.target = describe_target(raw);

  for (int k : cfg.top_k)
    if (static_cast<Index>(k) > raw.d())
      throw ConfigError("top_k entry " + std::to_string(k) +
                        " exceeds feature count d=" + std::to_string(raw.d()));

  if (raw.feature_names == pva_reference_features())
    report.design_checks = validate_against_design(raw, pva_reference_design());

  const auto [sds, scaler] = standardize(raw);
  (void)scaler;
  const Background bg = make_background(sds, cfg.background, cfg.seed);

  const std::vector<ModelSpec> zoo = configured_zoo(cfg);
  if (zoo.empty()) throw ConfigError("model selection is empty");

  std::vector<PerModelOutcome> outcomes(zoo.size());
  if (cfg.threads <= 1) {
    for (std::size_t i = 0; i < zoo.size(); ++i)
      outcomes[i] = process_model(zoo[i], sds, bg, cfg);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= zoo.size()) break;
        outcomes[i] = process_model(zoo[i], sds, bg, cfg);
      }
    };
    std::vector<std::thread> pool;
    const int nthreads =
        std::min<int>(cfg.threads, static_cast<int>(zoo.size()));
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<std::pair<std::string, GlobalImportance>> importances;
  for (std::size_t i = 0; i < zoo.size(); ++i) {
    auto& outcome = outcomes[i];
    if (!outcome.report.has_value()) {
      report.excluded.push_back({zoo[i].name, outcome.failure});
      continue;
    }
    GlobalImportance gi;
    gi.phi_bar = outcome.report->phi_bar;
    gi.feature_names = sds.feature_names;
    importances.emplace_back(zoo[i].name, std::move(gi));
    result.attributions.push_back(std::move(*outcome.attribution));
    report.models.push_back(std::move(*outcome.report));
  }
  if (report.models.size() < 2)
    throw NumericError("fewer than 2 models survived fitting; cannot run "
                       "the reliability analysis");

  report.rank_matrix = build_rank_matrix(importances);
  report.features = rank_stats(report.rank_matrix, cfg.thresholds,
                               cfg.population_rank_std);
  report.agreement = pairwise_agreement(report.rank_matrix, cfg.top_k);

  report.notes.push_back(
      "standardization fitted once on the full dataset before modeling");
  report.notes.push_back(
      "rank sigma uses the " +
      std::string(cfg.population_rank_std ? "population" : "sample") +
      " convention; target summary uses the sample convention");
  report.notes.push_back("background policy: " + cfg.background.mode +
                         (cfg.background.mode == "sample"
                              ? " (m=" + std::to_string(cfg.background.size) + ")"
                              : "") +
                         "; kernel engine enumerates all coalitions at d <= 12");
  report.notes.push_back(
      "top-k agreement is pairwise set overlap; the modal-set fraction is "
      "reported alongside");
  report.notes.push_back(
      "rank heatmap colors: 4-anchor scale #1a9850 #91cf60 #fee08b #d73027, "
      "interpolated across ranks 1..d");

  return result;
}

void write_outputs(const AuditResult& result, const PipelineConfig& cfg) {
  const AuditReport& report = result.report;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir / "attributions");

  {
    std::ofstream out(dir / "report.json");
    if (!out) throw DataError("cannot write report.json in " + cfg.out_dir);
    out << report_to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "report.md");
    out << report_to_markdown(report);
  }
  {
    std::ofstream out(dir / "rank_matrix.svg");
    out << render_rank_heatmap(report.rank_matrix);
  }
  {
    std::ofstream out(dir / "r2_bars.svg");
    out << render_r2_bars(report.models);
  }
  {
    std::ofstream out(dir / "target_hist.svg");
    out << render_target_hist(result.target_raw, report.target);
  }
  for (std::size_t i = 0; i < report.models.size(); ++i) {
    const std::string path =
        (dir / "attributions" / (report.models[i].name + ".csv")).string();
    write_attribution_csv(result.attributions[i], report.feature_names, path);
  }
}

std::string explain_to_csv(const PipelineConfig& cfg,
                           const std::string& model_name) {
  validate_config(cfg);
  const std::vector<ModelSpec> zoo = configured_zoo(cfg);
  const ModelSpec& spec = find_spec(zoo, model_name);

  const Dataset raw = load_input(cfg);
  const auto [sds, scaler] = standardize(raw);
  (void)scaler;
  const Background bg = make_background(sds, cfg.background, cfg.seed);
  TrainedModel model = fit(spec, sds.X, sds.y, cfg.seed);
  const ShapEngine resolved =
      resolve_engine(model, sds.d(), parse_engine(cfg.engine));
  auto [attr, gi] = explain_model(model, sds, resolved, bg, cfg.seed);
  (void)gi;

  const fs::path dir = fs::path(cfg.out_dir) / "attributions";
  fs::create_directories(dir);
  const std::string path = (dir / (model_name + ".csv")).string();
  write_attribution_csv(attr, sds.feature_names, path);
  return path;
}

}  // namespace shapaudit
