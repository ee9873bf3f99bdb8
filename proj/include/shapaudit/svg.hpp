#pragma once

#include <string>
#include <vector>

#include "shapaudit/dataset.hpp"
#include "shapaudit/report.hpp"

namespace shapaudit {

// Features x models grid with one colored cell per rank, the rank value
// printed in-cell, and a discrete legend over ranks 1..d.
std::string render_rank_heatmap(const RankMatrix& rm);

// Mean cross-validated R^2 per model with +/- std whiskers, colored by
// family.
std::string render_r2_bars(const std::vector<ModelReport>& models);

// Histogram of the target with mean/SD annotation.
std::string render_target_hist(const Vector& y, const TargetSummary& summary);

}  // namespace shapaudit
