#include "shapaudit/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <nlohmann/json.hpp>

namespace shapaudit {

using nlohmann::ordered_json;

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

namespace {

ordered_json vec_json(const Vector& v) {
  ordered_json arr = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::isnan(v(i)))
      arr.push_back(nullptr);
    else
      arr.push_back(v(i));
  }
  return arr;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i)
    rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

ordered_json nan_safe(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

ordered_json report_to_json(const AuditReport& report) {
  ordered_json j;
  j["generated_at"] = report.generated_at;
  j["seed"] = report.seed;
  j["config_hash"] = report.config_hash;
  j["config"] = resolved_config_json(report.config);

  ordered_json ds;
  ds["n"] = report.n;
  ds["d"] = report.d;
  ds["feature_names"] = report.feature_names;
  ds["target"] = {{"mean", report.target.mean},
                  {"std", report.target.std},
                  {"min", report.target.min},
                  {"max", report.target.max}};
  ds["standardization"] = report.standardization;
  if (!report.design_checks.empty()) {
    ordered_json checks = ordered_json::array();
    for (const auto& chk : report.design_checks) {
      checks.push_back({{"factor", chk.factor},
                        {"ok", chk.ok},
                        {"off_design_values", chk.off_design_values}});
    }
    ds["design_checks"] = checks;
  }
  j["dataset"] = ds;

  ordered_json models = ordered_json::array();
  for (const auto& m : report.models) {
    ordered_json mj;
    mj["name"] = m.name;
    mj["family"] = m.family;
    mj["variant"] = m.variant;
    ordered_json hyper = ordered_json::object();
    for (const auto& [key, value] : m.hyper) hyper[key] = value;
    mj["hyperparameters"] = hyper;
    ordered_json cv;
    cv["mean_r2"] = nan_safe(m.cv.mean_r2);
    cv["std_r2"] = nan_safe(m.cv.std_r2);
    ordered_json folds = ordered_json::array();
    for (double v : m.cv.per_fold_r2) folds.push_back(nan_safe(v));
    cv["per_fold_r2"] = folds;
    cv["warnings"] = m.cv.warnings;
    mj["cv"] = cv;
    mj["phi_bar"] = vec_json(m.phi_bar);
    mj["rank_row"] = vec_json(m.rank_row);
    mj["shap_engine"] = m.shap_engine;
    mj["convergence_warning"] = m.convergence_warning;
    models.push_back(mj);
  }
  j["models"] = models;

  ordered_json excluded = ordered_json::array();
  for (const auto& e : report.excluded)
    excluded.push_back({{"name", e.name}, {"reason", e.reason}});
  j["excluded_models"] = excluded;

  ordered_json rel;
  rel["rank_matrix"] = {{"model_names", report.rank_matrix.model_names},
                        {"feature_names", report.rank_matrix.feature_names},
                        {"ranks", matrix_json(report.rank_matrix.ranks)}};
  ordered_json feats = ordered_json::array();
  for (const auto& f : report.features) {
    feats.push_back({{"feature", f.feature},
                     {"mean_rank", f.mean_rank},
                     {"sigma_rank", f.std_rank},
                     {"label", f.label}});
  }
  rel["features"] = feats;
  ordered_json agr;
  agr["mean_spearman"] = nan_safe(report.agreement.mean_spearman);
  agr["pairwise_spearman"] = matrix_json(report.agreement.pairwise_spearman);
  ordered_json topk = ordered_json::array();
  for (const auto& t : report.agreement.topk) {
    topk.push_back({{"k", t.k},
                    {"mean", t.mean},
                    {"std", t.std},
                    {"modal_agreement", t.modal},
                    {"boundary_tie", t.boundary_tie}});
  }
  agr["top_k"] = topk;
  agr["warnings"] = report.agreement.warnings;
  rel["agreement"] = agr;
  j["reliability"] = rel;

  j["notes"] = report.notes;
  return j;
}

std::string report_to_markdown(const AuditReport& report) {
  std::ostringstream md;
  md << "# Feature importance reliability report\n\n";
  md << "- generated: " << report.generated_at << "\n";
  md << "- seed: " << report.seed << "\n";
  md << "- config hash: " << report.config_hash << "\n";
  md << "- dataset: n=" << report.n << ", d=" << report.d
     << ", target mean=" << format_fixed(report.target.mean, 3)
     << ", sd=" << format_fixed(report.target.std, 3) << "\n";
  md << "- standardization: " << report.standardization << "\n\n";

  md << "## Rank reliability\n\n";
  md << "| Feature | Mean Rank | Std. Dev. | Label |\n";
  md << "|---|---|---|---|\n";
  for (const auto& f : report.features) {
    md << "| " << f.feature << " | " << format_fixed(f.mean_rank, 3) << " | "
       << format_fixed(f.std_rank, 3) << " | " << f.label << " |\n";
  }
  md << "\n## Agreement\n\n";
  md << "- mean pairwise Spearman: "
     << format_fixed(report.agreement.mean_spearman, 3) << "\n";
  for (const auto& t : report.agreement.topk) {
    md << "- top-" << t.k << " agreement: " << format_fixed(t.mean, 3)
       << " (+/- " << format_fixed(t.std, 3)
       << "), modal " << format_fixed(t.modal, 3) << "\n";
  }

  md << "\n## Models (5-fold CV)\n\n";
  md << "| Model | Family | Mean R2 | Std R2 | Engine | Warnings |\n";
  md << "|---|---|---|---|---|---|\n";
  for (const auto& m : report.models) {
    md << "| " << m.name << (m.variant ? " (variant)" : "") << " | "
       << m.family << " | " << format_fixed(m.cv.mean_r2, 3) << " | "
       << format_fixed(m.cv.std_r2, 3) << " | " << m.shap_engine << " | "
       << (m.convergence_warning ? "convergence" : "") << " |\n";
  }
  if (!report.excluded.empty()) {
    md << "\n## Excluded models\n\n";
    for (const auto& e : report.excluded)
      md << "- " << e.name << ": " << e.reason << "\n";
  }
  if (!report.notes.empty()) {
    md << "\n## Notes\n\n";
    for (const auto& note : report.notes) md << "- " << note << "\n";
  }
  return md.str();
}

}  // namespace shapaudit
