#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapaudit/errors.hpp"
#include "shapaudit/pipeline.hpp"
#include "shapaudit/report.hpp"

namespace {

using namespace shapaudit;

std::vector<double> parse_weight_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad weight value: " + item);
    }
  }
  if (out.empty()) throw ConfigError("empty weight list");
  return out;
}

int cmd_run(const std::string& config_path, std::int64_t seed_override,
            const std::string& out_override, int threads_override) {
  PipelineConfig cfg = load_config(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (threads_override > 0) cfg.threads = threads_override;

  const AuditResult result = run_audit(cfg);
  write_outputs(result, cfg);

  const auto& report = result.report;
  std::cout << "audit complete: " << report.models.size() << " models, "
            << report.excluded.size() << " excluded\n";
  for (const auto& f : report.features)
    std::cout << "  " << f.feature << ": mean rank "
              << format_fixed(f.mean_rank, 3) << ", sigma "
              << format_fixed(f.std_rank, 3) << " (" << f.label << ")\n";
  std::cout << "  mean pairwise spearman: "
            << format_fixed(report.agreement.mean_spearman, 3) << "\n";
  std::cout << "outputs in " << cfg.out_dir << "\n";
  return kExitOk;
}

int cmd_zoo_list() {
  const auto zoo = default_zoo();
  std::cout << "name                      family     variant  hyperparameters\n";
  for (const auto& spec : zoo) {
    std::ostringstream hyper;
    bool first = true;
    for (const auto& [key, value] : spec.hyper) {
      if (!first) hyper << ", ";
      hyper << key << "=" << format_double(value);
      first = false;
    }
    std::printf("%-25s %-10s %-8s %s\n", spec.name.c_str(),
                family_name(spec.family), spec.variant ? "yes" : "no",
                hyper.str().c_str());
  }
  std::cout << zoo.size() << " models\n";
  return kExitOk;
}

int cmd_explain(const std::string& config_path, const std::string& model,
                const std::string& out_override) {
  PipelineConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  const std::string path = explain_to_csv(cfg, model);
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_synth(int n, const std::string& weights, double noise,
              std::uint64_t seed, const std::string& interactions,
              const std::string& out_path) {
  SynthSpec spec;
  spec.n = n;
  const auto w = parse_weight_list(weights);
  spec.weights = Eigen::Map<const Vector>(w.data(), static_cast<Index>(w.size()));
  spec.noise_std = noise;
  spec.seed = seed;
  if (!interactions.empty()) {
    std::stringstream ss(interactions);
    std::string term;
    while (std::getline(ss, term, ',')) {
      Interaction in;
      if (std::sscanf(term.c_str(), "%d:%d:%lf", &in.a, &in.b, &in.weight) != 3)
        throw ConfigError("bad interaction term (want a:b:weight): " + term);
      spec.interactions.push_back(in);
    }
  }
  const Dataset ds = make_synthetic(spec);
  write_csv(ds, out_path, "y");
  std::cout << "wrote " << out_path << " (" << ds.n() << " rows, " << ds.d()
            << " features)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-model feature-importance reliability auditor"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the full audit pipeline");
  std::string run_config;
  std::int64_t run_seed = -1;
  std::string run_out;
  int run_threads = 0;
  run->add_option("--config", run_config, "config file (JSON)")->required();
  run->add_option("--seed", run_seed, "override the config seed");
  run->add_option("--out", run_out, "override the output directory");
  run->add_option("--threads", run_threads, "override the worker thread count");

  auto* zoo = app.add_subcommand("zoo", "model zoo utilities");
  zoo->require_subcommand(1);
  zoo->add_subcommand("list", "list the default model zoo");

  auto* explain = app.add_subcommand("explain",
                                     "per-sample attribution CSV for one model");
  std::string explain_config, explain_model, explain_out;
  explain->add_option("--config", explain_config, "config file (JSON)")->required();
  explain->add_option("--model", explain_model, "model name")->required();
  explain->add_option("--out", explain_out, "override the output directory");

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset CSV");
  int synth_n = 96;
  std::string synth_weights;
  double synth_noise = 0.0;
  std::uint64_t synth_seed = 0;
  std::string synth_interactions, synth_out;
  synth->add_option("--n", synth_n, "row count");
  synth->add_option("--weights", synth_weights, "comma-separated linear weights")
      ->required();
  synth->add_option("--noise", synth_noise, "gaussian noise std");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--interactions", synth_interactions,
                    "comma-separated a:b:weight terms");
  synth->add_option("--out", synth_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : shapaudit::kExitConfig;
  }

  try {
    if (run->parsed())
      return cmd_run(run_config, run_seed, run_out, run_threads);
    if (zoo->parsed()) return cmd_zoo_list();
    if (explain->parsed())
      return cmd_explain(explain_config, explain_model, explain_out);
    if (synth->parsed())
      return cmd_synth(synth_n, synth_weights, synth_noise, synth_seed,
                       synth_interactions, synth_out);
  } catch (const shapaudit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return shapaudit::kExitConfig;
  } catch (const shapaudit::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return shapaudit::kExitConfig;
  } catch (const shapaudit::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return shapaudit::kExitData;
  } catch (const shapaudit::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return shapaudit::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return shapaudit::kExitNumeric;
  }
  return shapaudit::kExitConfig;
}
