#include "shapaudit/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "shapaudit/errors.hpp"
#include "shapaudit/models/zoo.hpp"

namespace shapaudit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void expect_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be an object");
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

PipelineConfig config_from_json(const json& j) {
  expect_object(j, "config");
  PipelineConfig cfg;
  try {
    if (j.contains("dataset")) {
      const auto& ds = j.at("dataset");
      expect_object(ds, "dataset");
      cfg.dataset_path = ds.value("path", std::string{});
      cfg.target_column = ds.value("target", std::string{"diameter"});
    }
    if (j.contains("synth")) {
      const auto& sj = j.at("synth");
      expect_object(sj, "synth");
      SynthSpec spec;
      spec.n = sj.value("n", 96);
      const auto w = sj.value("weights", std::vector<double>{});
      if (w.empty()) throw ConfigError("synth.weights must be non-empty");
      spec.weights = Eigen::Map<const Vector>(w.data(), static_cast<Index>(w.size()));
      if (sj.contains("interactions")) {
        for (const auto& it : sj.at("interactions")) {
          Interaction in;
          in.a = it.at(0).get<int>();
          in.b = it.at(1).get<int>();
          in.weight = it.at(2).get<double>();
          spec.interactions.push_back(in);
        }
      }
      spec.noise_std = sj.value("noise", 0.0);
      spec.seed = sj.value("seed", 0ULL);
      cfg.synth = spec;
    }
    if (j.contains("zoo")) {
      const auto& z = j.at("zoo");
      if (z.is_string()) {
        if (z.get<std::string>() != "default")
          throw ConfigError("zoo must be \"default\" or an object");
      } else {
        expect_object(z, "zoo");
        if (z.contains("include"))
          cfg.zoo_include = z.at("include").get<std::vector<std::string>>();
        if (z.contains("overrides")) {
          expect_object(z.at("overrides"), "zoo.overrides");
          for (const auto& [name, params] : z.at("overrides").items()) {
            expect_object(params, "zoo.overrides." + name);
            for (const auto& [key, value] : params.items())
              cfg.overrides[name][key] = value.get<double>();
          }
        }
      }
    }
    cfg.seed = j.value("seed", 42ULL);
    cfg.folds = j.value("folds", 5);
    cfg.shuffle_folds = j.value("shuffle_folds", true);
    if (j.contains("shap")) {
      const auto& s = j.at("shap");
      expect_object(s, "shap");
      cfg.engine = s.value("engine", std::string{"auto"});
      if (s.contains("background")) {
        const auto& b = s.at("background");
        expect_object(b, "shap.background");
        cfg.background.mode = b.value("policy", std::string{"all"});
        cfg.background.size = b.value("size", 20);
      }
    }
    if (j.contains("classify")) {
      const auto& c = j.at("classify");
      expect_object(c, "classify");
      cfg.thresholds.robust_max_sigma = c.value("robust_max_sigma", 0.25);
      cfg.thresholds.dependent_min_sigma = c.value("dependent_min_sigma", 0.75);
      cfg.population_rank_std = c.value("population_std", true);
    }
    if (j.contains("top_k")) cfg.top_k = j.at("top_k").get<std::vector<int>>();
    cfg.out_dir = j.value("out_dir", std::string{"out"});
    cfg.threads = j.value("threads", 1);
  } catch (const json::exception& e) {
    throw ConfigError(std::string{"config field error: "} + e.what());
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const PipelineConfig& cfg) {
  if (cfg.dataset_path.empty() == !cfg.synth.has_value())
    throw ConfigError("config needs exactly one of dataset.path or synth");
  if (cfg.folds < 2) throw ConfigError("folds must be >= 2");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (!(cfg.thresholds.robust_max_sigma < cfg.thresholds.dependent_min_sigma))
    throw ConfigError("classify thresholds must satisfy robust < dependent");
  if (cfg.top_k.empty()) throw ConfigError("top_k must be non-empty");
  for (int k : cfg.top_k)
    if (k < 1) throw ConfigError("top_k entries must be >= 1");
  parse_engine(cfg.engine);
  if (cfg.background.mode != "all" && cfg.background.mode != "sample")
    throw ConfigError("background policy must be all or sample");
  if (cfg.background.mode == "sample" && cfg.background.size < 1)
    throw ConfigError("background sample size must be >= 1");

  const auto zoo = default_zoo();
  std::set<std::string> known;
  for (const auto& spec : zoo) known.insert(spec.name);
  for (const auto& name : cfg.zoo_include)
    if (!known.count(name)) throw ConfigError("unknown model: " + name);
  for (const auto& [name, params] : cfg.overrides) {
    (void)params;
    if (!known.count(name))
      throw ConfigError("override for unknown model: " + name);
  }
}

ShapEngine parse_engine(const std::string& name) {
  if (name == "auto") return ShapEngine::kAuto;
  if (name == "exact") return ShapEngine::kExact;
  if (name == "kernel") return ShapEngine::kKernel;
  if (name == "tree") return ShapEngine::kTree;
  throw ConfigError("unknown shap engine: " + name);
}

ordered_json resolved_config_json(const PipelineConfig& cfg) {
  ordered_json j;
  if (cfg.synth.has_value()) {
    ordered_json sj;
    sj["n"] = cfg.synth->n;
    sj["weights"] = std::vector<double>(
        cfg.synth->weights.data(),
        cfg.synth->weights.data() + cfg.synth->weights.size());
    ordered_json inter = ordered_json::array();
    for (const auto& it : cfg.synth->interactions)
      inter.push_back({it.a, it.b, it.weight});
    sj["interactions"] = inter;
    sj["noise"] = cfg.synth->noise_std;
    sj["seed"] = cfg.synth->seed;
    j["synth"] = sj;
  } else {
    j["dataset"] = {{"path", cfg.dataset_path}, {"target", cfg.target_column}};
  }
  ordered_json zj;
  zj["include"] = cfg.zoo_include;
  ordered_json ov = ordered_json::object();
  for (const auto& [name, params] : cfg.overrides) {
    ordered_json pj = ordered_json::object();
    for (const auto& [key, value] : params) pj[key] = value;
    ov[name] = pj;
  }
  zj["overrides"] = ov;
  j["zoo"] = zj;
  j["seed"] = cfg.seed;
  j["folds"] = cfg.folds;
  j["shuffle_folds"] = cfg.shuffle_folds;
  j["shap"] = {{"engine", cfg.engine},
               {"background",
                {{"policy", cfg.background.mode},
                 {"size", cfg.background.size}}}};
  j["classify"] = {{"robust_max_sigma", cfg.thresholds.robust_max_sigma},
                   {"dependent_min_sigma", cfg.thresholds.dependent_min_sigma},
                   {"population_std", cfg.population_rank_std}};
  j["top_k"] = cfg.top_k;
  return j;
}

}  // namespace shapaudit
