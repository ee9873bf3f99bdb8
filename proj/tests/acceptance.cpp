// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one [PASS]/[FAIL]/[SKIP] line per criterion. Exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapaudit/errors.hpp"
#include "shapaudit/pipeline.hpp"
#include "shapaudit/rng.hpp"

using namespace shapaudit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kPass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Matrix random_matrix(Index n, Index d, Rng& rng, double lo = -2.0,
                     double hi = 2.0) {
  Matrix X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = rng.uniform(lo, hi);
  return X;
}

TrainedModel wrap_ensemble(TreeEnsemble ens, Index d) {
  TrainedModel m;
  m.spec.name = "case_tree";
  m.spec.family = Family::kTree;
  m.train_d = d;
  TreeModel tm;
  tm.ensemble = std::move(ens);
  m.impl = std::move(tm);
  return m;
}

TreeEnsemble random_ensemble(Index d, int trees, int depth, Rng& rng) {
  const Index n = 30;
  const Matrix X = random_matrix(n, d, rng);
  Vector y(n);
  for (Index i = 0; i < n; ++i)
    y(i) = std::sin(2.0 * X(i, 0)) + X(i, d - 1) * rng.uniform(0.5, 1.5) +
           rng.normal();
  TreeGrowParams p;
  p.max_depth = depth;
  TreeEnsemble ens;
  ens.base = rng.uniform(-1.0, 1.0);
  for (int t = 0; t < trees; ++t) {
    std::vector<int> boot(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
      boot[static_cast<std::size_t>(i)] =
          static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    ens.trees.push_back(grow_tree(X, y, boot, p, &rng));
    ens.weights.push_back(rng.uniform(0.2, 1.0));
  }
  return ens;
}

TrainedModel random_mlp(Index d, Rng& rng) {
  MlpModel m;
  const std::vector<Index> dims = {d, 8, 5, 1};
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l], dims[l + 1]);
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) w(i, j) = 0.8 * rng.normal();
    m.W.push_back(std::move(w));
    Vector b(dims[l + 1]);
    for (Index i = 0; i < b.size(); ++i) b(i) = 0.4 * rng.normal();
    m.b.push_back(std::move(b));
  }
  TrainedModel tm;
  tm.spec.name = "case_mlp";
  tm.spec.family = Family::kNeural;
  tm.train_d = d;
  tm.impl = std::move(m);
  return tm;
}

PipelineConfig reference_synth_config(const std::string& out_dir) {
  nlohmann::json j = {
      {"synth",
       {{"n", 96},
        {"weights", {5.0, 0.5, 0.25, 0.1}},
        {"noise", 0.1},
        {"seed", 7}}},
      {"seed", 42},
      {"out_dir", out_dir},
  };
  return config_from_json(j);
}

std::string strip_timestamp(std::string text) {
  const std::size_t pos = text.find("\"generated_at\"");
  if (pos == std::string::npos) return text;
  const std::size_t end = text.find('\n', pos);
  return text.erase(pos, end - pos);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// C1: kernel(full) and tree engines against exact enumeration, >= 50 cases.
Outcome c1_engine_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  const Index bg_sizes[3] = {1, 5, 20};
  double worst_kernel = 0.0, worst_tree = 0.0;
  int cases = 0;
  for (int rep = 0; rep < 30; ++rep) {
    const Index d = 2 + static_cast<Index>(rng.uniform_int(5));
    const Index m = bg_sizes[rep % 3];
    const Background bg{random_matrix(m, d, rng)};
    const RowVector x = random_matrix(1, d, rng).row(0);

    TreeEnsemble ens = random_ensemble(d, 3, 3, rng);
    const TrainedModel tree_model = wrap_ensemble(ens, d);
    const Vector exact_t = shapley_exact(tree_model, x, bg);
    worst_tree = std::max(
        worst_tree, (tree_shap(ens, x, bg) - exact_t).cwiseAbs().maxCoeff());
    worst_kernel = std::max(worst_kernel, (kernel_shap(tree_model, x, bg) -
                                           exact_t).cwiseAbs().maxCoeff());
    ++cases;

    const TrainedModel mlp = random_mlp(d, rng);
    const Vector exact_m = shapley_exact(mlp, x, bg);
    worst_kernel = std::max(worst_kernel, (kernel_shap(mlp, x, bg) - exact_m)
                                              .cwiseAbs().maxCoeff());
    ++cases;
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream msg;
  msg << cases << " cases, max |kernel-exact| = " << worst_kernel
      << ", max |tree-exact| = " << worst_tree << ", " << elapsed << "s";
  Outcome out;
  out.detail = msg.str();
  if (cases < 50 || worst_kernel > 1e-6 || worst_tree > 1e-9 || elapsed >= 30.0)
    out.status = Outcome::kFail;
  return out;
}

// ---------------------------------------------------------------------------
// C2: efficiency / dummy / symmetry / linearity across 100 randomized cases.
Outcome c2_axioms() {
  Rng rng(102);
  double worst_eff = 0.0, worst_sym = 0.0, worst_lin = 0.0, worst_dummy = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Index d = 2 + static_cast<Index>(rng.uniform_int(4));
    const Index m = 1 + static_cast<Index>(rng.uniform_int(6));
    const Background bg{random_matrix(m, d, rng)};
    const RowVector x = random_matrix(1, d, rng).row(0);

    // Efficiency on both exact-path engines.
    TreeEnsemble f = random_ensemble(d, 3, 3, rng);
    const TrainedModel fm = wrap_ensemble(f, d);
    Matrix one(1, d);
    one.row(0) = x;
    const double fx = predict(fm, one)(0);
    const double baseline = predict(fm, bg.B).mean();
    const Vector phi_exact = shapley_exact(fm, x, bg);
    const Vector phi_tree = tree_shap(f, x, bg);
    worst_eff = std::max(worst_eff,
                         std::abs(baseline + phi_exact.sum() - fx));
    worst_eff = std::max(worst_eff, std::abs(baseline + phi_tree.sum() - fx));

    // Dummy: an extra feature the model never touches must get exact zero.
    {
      Matrix wide_bg(m, d + 1);
      wide_bg.leftCols(d) = bg.B;
      wide_bg.col(d) = random_matrix(m, 1, rng).col(0);
      RowVector wide_x(d + 1);
      wide_x.head(d) = x;
      wide_x(d) = rng.uniform(-2.0, 2.0);
      const TrainedModel wide_model = wrap_ensemble(f, d + 1);
      const Background wbg{wide_bg};
      worst_dummy = std::max(
          worst_dummy,
          std::abs(shapley_exact(wide_model, wide_x, wbg)(d)));
      worst_dummy =
          std::max(worst_dummy, std::abs(tree_shap(f, wide_x, wbg)(d)));
    }

    // Linearity: attribution of f+g is the sum of the attributions.
    TreeEnsemble g = random_ensemble(d, 2, 2, rng);
    TreeEnsemble sum = f;
    sum.base += g.base;
    for (std::size_t t = 0; t < g.trees.size(); ++t) {
      sum.trees.push_back(g.trees[t]);
      sum.weights.push_back(g.weights[t]);
    }
    const Vector phi_g = shapley_exact(wrap_ensemble(g, d), x, bg);
    const Vector phi_sum = shapley_exact(wrap_ensemble(sum, d), x, bg);
    worst_lin = std::max(
        worst_lin, (phi_sum - phi_exact - phi_g).cwiseAbs().maxCoeff());

    // Symmetry: symmetrize a 2-feature model and evaluate at a symmetric
    // point with a symmetric background.
    {
      TreeEnsemble base2 = random_ensemble(2, 2, 3, rng);
      TreeEnsemble sym = base2;
      for (const auto& tree : base2.trees) {
        Tree swapped = tree;
        for (auto& node : swapped.nodes)
          if (node.feature >= 0) node.feature = 1 - node.feature;
        sym.trees.push_back(swapped);
        sym.weights.push_back(
            base2.weights[static_cast<std::size_t>(&tree - &base2.trees[0])]);
      }
      Matrix sb(m, 2);
      for (Index i = 0; i < m; ++i) {
        const double v = rng.uniform(-2.0, 2.0);
        sb(i, 0) = v;
        sb(i, 1) = v;
      }
      RowVector sx(2);
      const double xv = rng.uniform(-2.0, 2.0);
      sx << xv, xv;
      const Vector phi_sym =
          shapley_exact(wrap_ensemble(sym, 2), sx, Background{sb});
      worst_sym = std::max(worst_sym, std::abs(phi_sym(0) - phi_sym(1)));
    }
  }
  std::ostringstream msg;
  msg << "efficiency " << worst_eff << ", dummy " << worst_dummy
      << ", symmetry " << worst_sym << ", linearity " << worst_lin;
  Outcome out;
  out.detail = msg.str();
  if (worst_eff > 1e-10 || worst_dummy != 0.0 || worst_sym > 1e-8 ||
      worst_lin > 1e-8)
    out.status = Outcome::kFail;
  return out;
}

// ---------------------------------------------------------------------------
// C3: linear-family attributions equal w_j (x_ij - mean(bg_j)).
Outcome c3_analytic_linear() {
  SynthSpec spec;
  spec.n = 60;
  spec.weights = Vector(4);
  spec.weights << 5.0, 0.5, 0.25, 0.1;
  spec.noise_std = 0.05;
  spec.seed = 31;
  auto [sds, scaler] = standardize(make_synthetic(spec));
  (void)scaler;
  const Background bg{sds.X};
  const Vector bg_mean = bg.B.colwise().mean();

  double worst = 0.0;
  bool rankings_ok = true;
  const auto zoo = default_zoo();
  for (const auto& ms : zoo) {
    if (ms.family != Family::kLinear) continue;
    const TrainedModel model = fit(ms, sds.X, sds.y, 42);
    const LinearFit* lf = linear_coefficients(model);
    if (lf == nullptr) return {Outcome::kFail, "missing coefficients"};
    const auto [attr, gi] = explain_model(model, sds, ShapEngine::kExact, bg);
    for (Index i = 0; i < sds.n(); ++i)
      for (Index j = 0; j < sds.d(); ++j)
        worst = std::max(worst,
                         std::abs(attr.phi(i, j) -
                                  lf->coef(j) * (sds.X(i, j) - bg_mean(j))));
    // Ranking equals the |w_j|-scaled ordering (per-column mean absolute
    // deviation is the exact scale factor).
    Vector scaled(sds.d());
    for (Index j = 0; j < sds.d(); ++j)
      scaled(j) = std::abs(lf->coef(j)) *
                  (sds.X.col(j).array() - bg_mean(j)).abs().mean();
    if (rank_features(gi) != rank_descending(scaled)) rankings_ok = false;
  }
  std::ostringstream msg;
  msg << "max |phi - analytic| = " << worst
      << (rankings_ok ? ", rankings match" : ", RANKING MISMATCH");
  Outcome out;
  out.detail = msg.str();
  if (worst > 1e-8 || !rankings_ok) out.status = Outcome::kFail;
  return out;
}

// ---------------------------------------------------------------------------
// C4: rank conservation, pigeonhole bounds, top-1 unanimity.
Outcome c4_rank_conservation() {
  Rng rng(104);
  double worst_sum_gap = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Index M = 2 + static_cast<Index>(rng.uniform_int(12));
    const Index d = 2 + static_cast<Index>(rng.uniform_int(7));
    std::vector<std::pair<std::string, GlobalImportance>> imps;
    for (Index m = 0; m < M; ++m) {
      GlobalImportance gi;
      gi.phi_bar.resize(d);
      for (Index j = 0; j < d; ++j)
        gi.phi_bar(j) = rng.uniform() < 0.15
                            ? 0.5  // deliberate ties
                            : rng.uniform(0.0, 1.0);
      for (Index j = 0; j < d; ++j)
        gi.feature_names.push_back("f" + std::to_string(j));
      imps.emplace_back("m" + std::to_string(m), gi);
    }
    const RankMatrix rm = build_rank_matrix(imps);
    const double expected = static_cast<double>(d * (d + 1)) / 2.0;
    const auto stats = rank_stats(rm);
    double mean_sum = 0.0;
    for (const auto& s : stats) mean_sum += s.mean_rank;
    worst_sum_gap = std::max(worst_sum_gap, std::abs(mean_sum - expected));
    for (Index m = 0; m < M; ++m)
      worst_sum_gap =
          std::max(worst_sum_gap, std::abs(rm.ranks.row(m).sum() - expected));

    std::vector<int> ks;
    for (int k = 1; k <= static_cast<int>(d); ++k) ks.push_back(k);
    const AgreementStats agr = pairwise_agreement(rm, ks);
    for (const auto& t : agr.topk) {
      const double bound =
          std::max(0.0, (2.0 * t.k - static_cast<double>(d)) / t.k);
      if (t.mean < bound - 1e-12)
        return {Outcome::kFail, "pigeonhole bound violated"};
    }

    // Top-1 agreement is 1 exactly when every model shares the argmax
    // (under the deterministic tie-break).
    bool same_argmax = true;
    const auto first_top = topk_set(rm.ranks.row(0).transpose(), 1);
    for (Index m = 1; m < M; ++m)
      if (topk_set(rm.ranks.row(m).transpose(), 1) != first_top)
        same_argmax = false;
    const bool top1_unanimous = agr.topk[0].mean == 1.0;
    if (top1_unanimous != same_argmax)
      return {Outcome::kFail, "top-1 unanimity mismatch"};
  }
  std::ostringstream msg;
  msg << "50 matrices, max |sum - d(d+1)/2| = " << worst_sum_gap;
  Outcome out;
  out.detail = msg.str();
  if (worst_sum_gap > 1e-9) out.status = Outcome::kFail;
  return out;
}

// ---------------------------------------------------------------------------
// C5: spearman vs the classical formula on 1000 tie-free permutations.
Outcome c5_spearman() {
  Rng rng(105);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 3 + static_cast<Index>(rng.uniform_int(12));
    std::vector<double> pa(static_cast<std::size_t>(n)), pb;
    std::iota(pa.begin(), pa.end(), 1.0);
    pb = pa;
    rng.shuffle(pa);
    rng.shuffle(pb);
    Vector a(n), b(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = pa[static_cast<std::size_t>(i)];
      b(i) = pb[static_cast<std::size_t>(i)];
    }
    double d2 = 0.0;
    for (Index i = 0; i < n; ++i) d2 += (a(i) - b(i)) * (a(i) - b(i));
    const double classical =
        1.0 - 6.0 * d2 / (static_cast<double>(n) * (n * n - 1.0));
    worst = std::max(worst, std::abs(spearman(a, b) - classical));
  }
  Vector id(5), rev(5);
  id << 1, 2, 3, 4, 5;
  rev << 5, 4, 3, 2, 1;
  const double s_id = spearman(id, id);
  const double s_rev = spearman(id, rev);
  std::ostringstream msg;
  msg << "1000 permutations, max gap = " << worst << ", identity " << s_id
      << ", reversal " << s_rev;
  Outcome out;
  out.detail = msg.str();
  if (worst > 1e-12 || std::abs(s_id - 1.0) > 1e-12 ||
      std::abs(s_rev + 1.0) > 1e-12)
    out.status = Outcome::kFail;
  return out;
}

// ---------------------------------------------------------------------------
// C6: the full default zoo on the dominant-feature synthetic dataset.
Outcome c6_synthetic_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  const PipelineConfig cfg = reference_synth_config("/tmp/acceptance_c6");
  const AuditResult result = run_audit(cfg);
  const AuditReport& report = result.report;
  const double elapsed = seconds_since(t0);

  std::ostringstream msg;
  Outcome out;
  if (report.models.size() != 21) {
    out.status = Outcome::kFail;
    msg << "expected 21 surviving models, got " << report.models.size();
    out.detail = msg.str();
    return out;
  }
  bool all_rank1 = true;
  for (Index m = 0; m < report.rank_matrix.ranks.rows(); ++m)
    if (report.rank_matrix.ranks(m, 0) != 1.0) {
      all_rank1 = false;
      msg << report.rank_matrix.model_names[static_cast<std::size_t>(m)]
          << " ranks x0 at " << report.rank_matrix.ranks(m, 0) << "; ";
    }
  const auto& x0 = report.features[0];
  const double rho = report.agreement.mean_spearman;
  msg << "x0 mean rank " << x0.mean_rank << ", sigma " << x0.std_rank << " ("
      << x0.label << "), mean spearman " << rho << ", " << elapsed << "s";
  out.detail = msg.str();
  if (!all_rank1 || x0.mean_rank != 1.0 || x0.std_rank != 0.0 ||
      x0.label != "robust" || !(rho >= 0.7) || elapsed >= 300.0)
    out.status = Outcome::kFail;
  return out;
}

// ---------------------------------------------------------------------------
// C7: reproduction on the public PVA dataset when the file is available.
Outcome c7_pva_reproduction() {
  const char* env = std::getenv("PVA_CSV");
  const std::string path = env != nullptr ? env : "data/pva_electrospinning.csv";
  if (!fs::exists(path))
    return {Outcome::kSkip,
            "reference dataset not present at " + path +
                " (place the public 96-run PVA CSV there to enable)"};

  nlohmann::json j = {
      {"dataset", {{"path", path}, {"target", "diameter"}}},
      {"seed", 42},
      {"out_dir", "/tmp/acceptance_c7"},
  };
  const PipelineConfig cfg = config_from_json(j);
  const AuditResult result = run_audit(cfg);
  const AuditReport& report = result.report;

  std::ostringstream msg;
  bool ok = true;

  // (a) concentration: mean rank 1.000, sigma 0.000, exact.
  const auto* conc = &report.features[0];
  for (const auto& f : report.features)
    if (f.feature == "concentration") conc = &f;
  if (conc->feature != "concentration" || conc->mean_rank != 1.0 ||
      conc->std_rank != 0.0) {
    ok = false;
    msg << "(a) concentration " << conc->mean_rank << "/" << conc->std_rank
        << " ";
  }
  // (b) distance has strictly the smallest sigma of the remaining three.
  double sigma_distance = -1.0, min_other = 1e9;
  for (const auto& f : report.features) {
    if (f.feature == "distance")
      sigma_distance = f.std_rank;
    else if (f.feature != "concentration")
      min_other = std::min(min_other, f.std_rank);
  }
  if (!(sigma_distance >= 0.0 && sigma_distance < min_other)) {
    ok = false;
    msg << "(b) sigma(distance)=" << sigma_distance << " vs min other "
        << min_other << " ";
  }
  // (c) top-1 agreement 1.000.
  if (report.agreement.topk.empty() || report.agreement.topk[0].k != 1 ||
      report.agreement.topk[0].mean != 1.0) {
    ok = false;
    msg << "(c) top-1 != 1 ";
  }
  // (d) mean pairwise spearman within 0.584 +/- 0.25.
  const double rho = report.agreement.mean_spearman;
  if (!(rho >= 0.584 - 0.25 && rho <= 0.584 + 0.25)) {
    ok = false;
    msg << "(d) spearman " << rho << " ";
  }
  // (e) some tree-family model reaches mean CV R^2 >= 0.80.
  double best_tree = -1e9;
  for (const auto& m : report.models)
    if (m.family == std::string("tree")) best_tree = std::max(best_tree, m.cv.mean_r2);
  if (!(best_tree >= 0.80)) {
    ok = false;
    msg << "(e) best tree R2 " << best_tree << " ";
  }
  // (f) target summary.
  if (!(std::abs(report.target.mean - 259.0) <= 1.0 &&
        std::abs(report.target.std - 34.5) <= 1.0)) {
    ok = false;
    msg << "(f) target " << report.target.mean << "/" << report.target.std
        << " ";
  }
  msg << "[spearman " << rho << ", best tree R2 " << best_tree << "]";
  return {ok ? Outcome::kPass : Outcome::kFail, msg.str()};
}

// ---------------------------------------------------------------------------
// C8: byte-identical reports across reruns and thread counts.
Outcome c8_determinism() {
  nlohmann::json j = {
      {"synth",
       {{"n", 96},
        {"weights", {5.0, 0.5, 0.25, 0.1}},
        {"noise", 0.1},
        {"seed", 7}}},
      {"seed", 42},
      {"zoo",
       {{"overrides",
         {{"mlp_128x64", {{"epochs", 200}}},
          {"mlp_64x32", {{"epochs", 200}}},
          {"random_forest", {{"trees", 60}}},
          {"random_forest_deep", {{"trees", 80}}},
          {"gradient_boosting", {{"rounds", 100}}},
          {"hist_gradient_boosting", {{"rounds", 100}}},
          {"gradient_boosting_slow", {{"rounds", 150}}},
          {"xgb_style", {{"rounds", 100}}},
          {"lgbm_style", {{"rounds", 100}}},
          {"adaboost_r2", {{"rounds", 40}}}}}}},
      {"out_dir", "unset"},
  };

  auto run_to_dir = [&](const std::string& dir, int threads) {
    nlohmann::json jj = j;
    jj["out_dir"] = dir;
    jj["threads"] = threads;
    fs::remove_all(dir);
    const PipelineConfig cfg = config_from_json(jj);
    write_outputs(run_audit(cfg), cfg);
    return strip_timestamp(slurp(fs::path(dir) / "report.json"));
  };

  const std::string a = run_to_dir("/tmp/acceptance_c8_a", 1);
  const std::string b = run_to_dir("/tmp/acceptance_c8_b", 1);
  const std::string c = run_to_dir("/tmp/acceptance_c8_c", 4);

  std::ostringstream msg;
  bool ok = true;
  if (a != b) {
    ok = false;
    msg << "rerun mismatch ";
  }
  if (a != c) {
    ok = false;
    msg << "4-thread mismatch ";
  }
  if (ok)
    msg << "rerun and 4-thread reports byte-identical ("
        << a.size() << " bytes compared)";
  return {ok ? Outcome::kPass : Outcome::kFail, msg.str()};
}

// ---------------------------------------------------------------------------
// C9: training-dynamics properties on randomized instances.
Outcome c9_training_properties() {
  Rng rng(109);
  std::ostringstream msg;

  // Boosting loss monotonicity.
  for (int rep = 0; rep < 5; ++rep) {
    const Index n = 30 + static_cast<Index>(rng.uniform_int(30));
    const Index d = 2 + static_cast<Index>(rng.uniform_int(4));
    const Matrix X = random_matrix(n, d, rng);
    Vector y(n);
    for (Index i = 0; i < n; ++i)
      y(i) = std::sin(X(i, 0)) + 0.5 * X(i, d - 1) + 0.3 * rng.normal();

    auto check_monotone = [&](const TreeEnsemble& ens) {
      Vector f = Vector::Constant(n, ens.base);
      double prev = (y - f).squaredNorm();
      for (std::size_t m = 0; m < ens.trees.size(); ++m) {
        f += ens.weights[m] * predict(ens.trees[m], X);
        const double loss = (y - f).squaredNorm();
        if (loss > prev + 1e-9 * std::max(1.0, prev)) return false;
        prev = loss;
      }
      return true;
    };
    BoostParams gb;
    gb.rounds = 60;
    XgbParams xgb;
    xgb.rounds = 60;
    LgbmParams lgbm;
    lgbm.rounds = 60;
    if (!check_monotone(fit_gradient_boosting(X, y, gb)) ||
        !check_monotone(fit_xgb_style(X, y, xgb)) ||
        !check_monotone(fit_lgbm_style(X, y, lgbm)))
      return {Outcome::kFail, "boosting loss increased"};
  }
  msg << "boosting monotone; ";

  // Lasso / elastic net objective descent.
  for (int rep = 0; rep < 5; ++rep) {
    const Index n = 20 + static_cast<Index>(rng.uniform_int(30));
    const Index d = 2 + static_cast<Index>(rng.uniform_int(6));
    const Matrix X = random_matrix(n, d, rng);
    Vector y(n);
    for (Index i = 0; i < n; ++i) y(i) = rng.uniform(-3.0, 3.0);
    const double lambda = rng.uniform(0.01, 1.0);
    const double l1_ratio = rep % 2 == 0 ? 1.0 : rng.uniform(0.0, 1.0);
    LinearFit fit;
    fit.coef = Vector::Zero(d);
    double prev = elastic_net_objective(X, y, fit, lambda, l1_ratio);
    for (int sweep = 0; sweep < 30; ++sweep) {
      elastic_net_sweep(X, y, fit, lambda, l1_ratio);
      const double obj = elastic_net_objective(X, y, fit, lambda, l1_ratio);
      if (obj > prev + 1e-12 * std::max(1.0, std::abs(prev)))
        return {Outcome::kFail, "coordinate descent objective increased"};
      prev = obj;
    }
  }
  msg << "cd descent; ";

  // MLP gradient check on a 5-sample toy problem.
  {
    MlpModel m;
    const std::vector<Index> dims = {3, 4, 3, 1};
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      Matrix w(dims[l], dims[l + 1]);
      for (Index i = 0; i < w.rows(); ++i)
        for (Index j = 0; j < w.cols(); ++j) w(i, j) = 0.7 * rng.normal();
      m.W.push_back(std::move(w));
      Vector b(dims[l + 1]);
      for (Index i = 0; i < b.size(); ++i) b(i) = 0.3 * rng.normal();
      m.b.push_back(std::move(b));
    }
    const Matrix X = random_matrix(5, 3, rng);
    Vector y(5);
    for (Index i = 0; i < 5; ++i) y(i) = rng.normal();
    const auto [loss, grads] = mlp_loss_grad(m, X, y);
    (void)loss;
    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t l = 0; l < m.W.size(); ++l) {
      for (Index i = 0; i < m.W[l].rows(); ++i)
        for (Index jj = 0; jj < m.W[l].cols(); ++jj) {
          MlpModel plus = m, minus = m;
          plus.W[l](i, jj) += h;
          minus.W[l](i, jj) -= h;
          const double fd =
              (mlp_loss(plus, X, y) - mlp_loss(minus, X, y)) / (2.0 * h);
          worst = std::max(worst, std::abs(fd - grads.dW[l](i, jj)) /
                                      std::max(1e-8, std::abs(fd)));
        }
      for (Index i = 0; i < m.b[l].size(); ++i) {
        MlpModel plus = m, minus = m;
        plus.b[l](i) += h;
        minus.b[l](i) -= h;
        const double fd =
            (mlp_loss(plus, X, y) - mlp_loss(minus, X, y)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - grads.db[l](i)) /
                                    std::max(1e-8, std::abs(fd)));
      }
    }
    if (worst > 1e-4) return {Outcome::kFail, "mlp gradient check failed"};
    msg << "mlp grad rel " << worst << "; ";
  }

  // SVR dual feasibility.
  for (int rep = 0; rep < 3; ++rep) {
    const Index n = 25 + static_cast<Index>(rng.uniform_int(25));
    const Matrix X = random_matrix(n, 3, rng);
    Vector y(n);
    for (Index i = 0; i < n; ++i)
      y(i) = X(i, 0) - 0.3 * X(i, 2) + 0.2 * rng.normal();
    SvrParams p;
    p.degree = rep == 1 ? 3 : 0;
    const SvrModel m = fit_svr(X, y, p);
    if (m.beta.cwiseAbs().maxCoeff() > p.C + 1e-12)
      return {Outcome::kFail, "svr dual left the box"};
  }
  msg << "svr box ok";
  return {Outcome::kPass, msg.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"C1 engine oracle equivalence", c1_engine_equivalence},
      {"C2 shapley axioms", c2_axioms},
      {"C3 analytic linear attribution", c3_analytic_linear},
      {"C4 rank statistics conservation", c4_rank_conservation},
      {"C5 spearman correctness", c5_spearman},
      {"C6 synthetic end-to-end ground truth", c6_synthetic_end_to_end},
      {"C7 reference dataset reproduction", c7_pva_reproduction},
      {"C8 determinism", c8_determinism},
      {"C9 model training properties", c9_training_properties},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    Outcome outcome;
    try {
      outcome = crit.fn();
    } catch (const std::exception& e) {
      outcome.status = Outcome::kFail;
      outcome.detail = std::string{"exception: "} + e.what();
    }
    const char* tag = outcome.status == Outcome::kPass   ? "[PASS]"
                      : outcome.status == Outcome::kSkip ? "[SKIP]"
                                                         : "[FAIL]";
    std::cout << tag << " " << crit.name << " - " << outcome.detail << "\n"
              << std::flush;
    if (outcome.status == Outcome::kFail) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed (or skipped where inputs are absent)\n";
  return 0;
}
