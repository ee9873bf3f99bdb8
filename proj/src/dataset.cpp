#include "shapaudit/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "shapaudit/errors.hpp"
#include "shapaudit/rng.hpp"

namespace shapaudit {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double_strict(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) return false;
  out = v;
  return true;
}

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void validate(const Dataset& ds) {
  if (ds.d() < 1) throw DataError("dataset must have at least one feature");
  if (ds.n() < 2) throw DataError("dataset must have at least two rows");
  if (static_cast<Index>(ds.feature_names.size()) != ds.d())
    throw DataError("feature_names length does not match column count");
  if (ds.y.size() != ds.n())
    throw DataError("target length does not match row count");
  std::unordered_set<std::string> seen;
  for (const auto& name : ds.feature_names) {
    if (!seen.insert(name).second)
      throw DataError("duplicate feature name: " + name);
  }
  if (!ds.X.allFinite()) throw DataError("non-finite value in feature matrix");
  if (!ds.y.allFinite()) throw DataError("non-finite value in target vector");
  if (!ds.units.empty() &&
      static_cast<Index>(ds.units.size()) != ds.d())
    throw DataError("units length does not match column count");
}

Dataset load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_line(line);
  if (header.empty()) throw DataError("missing header row in " + path);

  int target_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == target_column) {
      target_idx = static_cast<int>(j);
      break;
    }
  }
  if (target_idx < 0)
    throw ConfigError("target column '" + target_column + "' not found in " + path);

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError(path + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    std::vector<double> parsed(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v;
      if (!parse_double_strict(cells[j], v) || !std::isfinite(v))
        throw DataError(path + ": non-numeric cell at row " +
                        std::to_string(line_no) + ", column '" + header[j] +
                        "' (value '" + cells[j] + "')");
      parsed[j] = v;
    }
    rows.push_back(std::move(parsed));
  }

  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(header.size()) - 1;
  if (d < 1) throw DataError(path + ": no feature columns besides the target");

  Dataset ds;
  ds.X.resize(n, d);
  ds.y.resize(n);
  for (std::size_t j = 0; j < header.size(); ++j)
    if (static_cast<int>(j) != target_idx) ds.feature_names.push_back(header[j]);
  for (Index i = 0; i < n; ++i) {
    Index c = 0;
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (static_cast<int>(j) == target_idx)
        ds.y(i) = rows[i][j];
      else
        ds.X(i, c++) = rows[i][j];
    }
  }
  ds.standardized = false;
  validate(ds);
  return ds;
}

void write_csv(const Dataset& ds, const std::string& path,
               const std::string& target_column) {
  validate(ds);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (Index j = 0; j < ds.d(); ++j) out << ds.feature_names[j] << ',';
  out << target_column << '\n';
  for (Index i = 0; i < ds.n(); ++i) {
    for (Index j = 0; j < ds.d(); ++j) out << format_double(ds.X(i, j)) << ',';
    out << format_double(ds.y(i)) << '\n';
  }
  if (!out) throw DataError("failed writing file: " + path);
}

double sample_std(const Vector& v) {
  const Index n = v.size();
  if (n < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(n - 1));
}

std::pair<Dataset, ScalerParams> standardize(const Dataset& ds) {
  validate(ds);
  if (ds.standardized)
    throw UsageError("standardize called on already standardized data");
  ScalerParams p;
  p.means.resize(ds.d());
  p.stds.resize(ds.d());
  Dataset out = ds;
  for (Index j = 0; j < ds.d(); ++j) {
    const double mean = ds.X.col(j).mean();
    const double sd = sample_std(ds.X.col(j));
    if (sd <= 0.0)
      throw DataError("zero-variance column: " + ds.feature_names[j]);
    p.means(j) = mean;
    p.stds(j) = sd;
    out.X.col(j) = (ds.X.col(j).array() - mean) / sd;
  }
  out.standardized = true;
  return {std::move(out), std::move(p)};
}

Matrix apply_scaler(const Matrix& X, const ScalerParams& p) {
  if (X.cols() != p.means.size())
    throw UsageError("scaler dimension mismatch");
  return (X.rowwise() - p.means.transpose()).array().rowwise() /
         p.stds.transpose().array();
}

Matrix invert_scaler(const Matrix& X, const ScalerParams& p) {
  if (X.cols() != p.means.size())
    throw UsageError("scaler dimension mismatch");
  return (X.array().rowwise() * p.stds.transpose().array()).matrix().rowwise() +
         p.means.transpose();
}

std::vector<FoldSplit> kfold_split(Index n, int k, std::uint64_t seed,
                                   bool shuffle) {
  if (k < 2) throw ConfigError("k-fold requires k >= 2, got " + std::to_string(k));
  if (static_cast<Index>(k) > n)
    throw ConfigError("k-fold requires k <= n, got k=" + std::to_string(k) +
                      " with n=" + std::to_string(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  if (shuffle) {
    Rng rng(Rng::mix({seed, 0x6b666f6cdULL}));
    rng.shuffle(order);
  }
  const Index base = n / k;
  const Index extra = n % k;  // first `extra` folds get one more test sample
  std::vector<FoldSplit> folds(static_cast<std::size_t>(k));
  Index pos = 0;
  for (int f = 0; f < k; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    auto& fold = folds[static_cast<std::size_t>(f)];
    fold.test_indices.assign(order.begin() + pos, order.begin() + pos + size);
    fold.train_indices.reserve(static_cast<std::size_t>(n - size));
    for (Index i = 0; i < n; ++i) {
      const Index idx = order[static_cast<std::size_t>(i)];
      if (i < pos || i >= pos + size) fold.train_indices.push_back(idx);
    }
    pos += size;
  }
  return folds;
}

TargetSummary describe_target(const Dataset& ds) {
  validate(ds);
  TargetSummary s;
  s.mean = ds.y.mean();
  s.std = sample_std(ds.y);
  s.min = ds.y.minCoeff();
  s.max = ds.y.maxCoeff();
  return s;
}

RsmDesign pva_reference_design() {
  return RsmDesign{{{
      {"concentration", "wt%", {8.0, 9.0, 10.0, 12.0}},
      {"voltage", "kV", {15.0, 20.0, 22.5, 25.0}},
      {"flow_rate", "mL/h", {0.20, 0.25, 0.30, 0.40}},
      {"distance", "cm", {10.0, 12.5, 15.0, 20.0}},
  }}};
}

const std::vector<std::string>& pva_reference_features() {
  static const std::vector<std::string> names = {"concentration", "voltage",
                                                 "flow_rate", "distance"};
  return names;
}

const std::string& pva_reference_target() {
  static const std::string name = "diameter";
  return name;
}

std::vector<DesignCheck> validate_against_design(const Dataset& ds,
                                                 const RsmDesign& design) {
  if (ds.n() < 1) throw DataError("cannot check an empty dataset");
  if (ds.standardized)
    throw UsageError("design check requires raw (unstandardized) data");
  if (ds.d() != static_cast<Index>(design.factors.size()))
    throw DataError("feature count " + std::to_string(ds.d()) +
                    " does not match design factor count " +
                    std::to_string(design.factors.size()));
  constexpr double kTol = 1e-9;
  std::vector<DesignCheck> checks;
  for (Index j = 0; j < ds.d(); ++j) {
    const auto& factor = design.factors[static_cast<std::size_t>(j)];
    DesignCheck chk;
    chk.factor = factor.name;
    std::set<double> off;
    for (Index i = 0; i < ds.n(); ++i) {
      const double v = ds.X(i, j);
      bool matched = false;
      for (double level : factor.levels) {
        if (std::abs(v - level) <= kTol * std::max(1.0, std::abs(level))) {
          matched = true;
          break;
        }
      }
      if (!matched) off.insert(v);
    }
    chk.off_design_values.assign(off.begin(), off.end());
    chk.ok = chk.off_design_values.empty();
    checks.push_back(std::move(chk));
  }
  return checks;
}

}  // namespace shapaudit
