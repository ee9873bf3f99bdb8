#include "shapaudit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "shapaudit/errors.hpp"

namespace shapaudit {
namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_double(v); }

struct Rgb {
  double r, g, b;
};

std::string rgb_hex(const Rgb& c) {
  char buf[8];
  auto clamp = [](double v) {
    return static_cast<int>(std::round(std::min(255.0, std::max(0.0, v))));
  };
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", clamp(c.r), clamp(c.g),
                clamp(c.b));
  return buf;
}

// Fixed 4-anchor scale (best rank = green, worst = red); extra rank levels
// interpolate linearly between anchors.
std::string rank_color(double rank, int d) {
  static const Rgb anchors[4] = {{0x1a, 0x98, 0x50},
                                 {0x91, 0xcf, 0x60},
                                 {0xfe, 0xe0, 0x8b},
                                 {0xd7, 0x30, 0x27}};
  const double t = d > 1 ? (rank - 1.0) / (static_cast<double>(d) - 1.0) : 0.0;
  const double pos = std::min(1.0, std::max(0.0, t)) * 3.0;
  const int lo = std::min(2, static_cast<int>(pos));
  const double f = pos - lo;
  const Rgb c = {anchors[lo].r + f * (anchors[lo + 1].r - anchors[lo].r),
                 anchors[lo].g + f * (anchors[lo + 1].g - anchors[lo].g),
                 anchors[lo].b + f * (anchors[lo + 1].b - anchors[lo].b)};
  return rgb_hex(c);
}

std::string family_color(const std::string& family) {
  static const std::map<std::string, std::string> colors = {
      {"linear", "#4878d0"},  {"tree", "#6acc64"},
      {"kernel", "#ee854a"},  {"neural", "#d65f5f"},
      {"instance", "#956cb4"}};
  const auto it = colors.find(family);
  return it == colors.end() ? "#888888" : it->second;
}

std::string format_rank(double rank) {
  if (rank == std::floor(rank)) return std::to_string(static_cast<int>(rank));
  return format_fixed(rank, 2);
}

void open_svg(std::ostringstream& out, double width, double height) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
      << " " << num(height) << "\">\n";
}

void rect(std::ostringstream& out, double x, double y, double w, double h,
          const std::string& fill, const std::string& extra = "") {
  out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
      << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"";
  if (!extra.empty()) out << ' ' << extra;
  out << "/>\n";
}

void text(std::ostringstream& out, double x, double y, const std::string& s,
          double size, const std::string& anchor = "middle",
          const std::string& extra = "") {
  out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
      << num(size) << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
      << "\"";
  if (!extra.empty()) out << ' ' << extra;
  out << '>' << escape_xml(s) << "</text>\n";
}

void line(std::ostringstream& out, double x1, double y1, double x2, double y2,
          const std::string& stroke, double width = 1.0) {
  out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
      << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke
      << "\" stroke-width=\"" << num(width) << "\"/>\n";
}

}  // namespace

std::string render_rank_heatmap(const RankMatrix& rm) {
  const Index models = rm.ranks.rows();
  const Index d = rm.ranks.cols();
  if (models < 1 || d < 1) throw UsageError("empty rank matrix");

  const double cell = 30.0;
  const double left = 150.0;
  const double top = 110.0;
  const double legend_h = 46.0;
  const double width = left + cell * static_cast<double>(models) + 20.0;
  const double height =
      top + cell * static_cast<double>(d) + legend_h + 20.0;

  std::ostringstream out;
  open_svg(out, width, height);
  rect(out, 0, 0, width, height, "#ffffff");
  text(out, width / 2.0, 24, "Feature importance ranks across models", 15,
       "middle", "font-weight=\"bold\"");

  for (Index mi = 0; mi < models; ++mi) {
    const double cx = left + cell * (static_cast<double>(mi) + 0.5);
    out << "<text x=\"" << num(cx) << "\" y=\"" << num(top - 6)
        << "\" font-size=\"9\" font-family=\"sans-serif\" text-anchor=\"start\""
        << " transform=\"rotate(-60 " << num(cx) << " " << num(top - 6)
        << ")\">"
        << escape_xml(rm.model_names[static_cast<std::size_t>(mi)])
        << "</text>\n";
  }
  for (Index j = 0; j < d; ++j) {
    const double cy = top + cell * (static_cast<double>(j) + 0.5);
    text(out, left - 8, cy + 4, rm.feature_names[static_cast<std::size_t>(j)],
         11, "end");
    for (Index mi = 0; mi < models; ++mi) {
      const double x = left + cell * static_cast<double>(mi);
      const double y = top + cell * static_cast<double>(j);
      const double rank = rm.ranks(mi, j);
      rect(out, x, y, cell - 1, cell - 1,
           rank_color(rank, static_cast<int>(d)),
           "stroke=\"#ffffff\" stroke-width=\"1\"");
      text(out, x + (cell - 1) / 2.0, y + cell / 2.0 + 3, format_rank(rank),
           10);
    }
  }

  const double ly = top + cell * static_cast<double>(d) + 18.0;
  text(out, left, ly + 11, "rank:", 11, "end");
  for (Index r = 1; r <= d; ++r) {
    const double x = left + 10 + 52.0 * static_cast<double>(r - 1);
    rect(out, x, ly, 16, 16, rank_color(static_cast<double>(r), static_cast<int>(d)),
         "stroke=\"#555555\" stroke-width=\"0.5\"");
    text(out, x + 22, ly + 12, std::to_string(r), 11, "start");
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_r2_bars(const std::vector<ModelReport>& models) {
  if (models.empty()) throw UsageError("no models to plot");
  const double bar = 26.0;
  const double left = 70.0;
  const double top = 50.0;
  const double plot_h = 260.0;
  const double width =
      left + bar * static_cast<double>(models.size()) + 170.0;
  const double height = top + plot_h + 130.0;

  double lo = 0.0, hi = 1.0;
  for (const auto& m : models) {
    lo = std::min(lo, m.cv.mean_r2 - m.cv.std_r2);
    hi = std::max(hi, m.cv.mean_r2 + m.cv.std_r2);
  }
  lo = std::max(lo, -1.0) - 0.05;
  hi += 0.05;
  const auto ypos = [&](double v) {
    return top + plot_h * (hi - v) / (hi - lo);
  };

  std::ostringstream out;
  open_svg(out, width, height);
  rect(out, 0, 0, width, height, "#ffffff");
  text(out, (left + width - 170.0) / 2.0, 24,
       "Cross-validated R2 by model", 15, "middle", "font-weight=\"bold\"");

  for (double g = std::ceil(lo * 4.0) / 4.0; g <= hi; g += 0.25) {
    line(out, left - 4, ypos(g), left + bar * static_cast<double>(models.size()),
         ypos(g), g == 0.0 ? "#555555" : "#dddddd", g == 0.0 ? 1.2 : 0.8);
    text(out, left - 8, ypos(g) + 3, format_fixed(g, 2), 9, "end");
  }

  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& m = models[i];
    const double x = left + bar * static_cast<double>(i) + 3.0;
    const double y0 = ypos(0.0);
    const double y1 = ypos(m.cv.mean_r2);
    rect(out, x, std::min(y0, y1), bar - 6, std::max(1.0, std::abs(y1 - y0)),
         family_color(m.family), "stroke=\"#444444\" stroke-width=\"0.5\"");
    const double cx = x + (bar - 6) / 2.0;
    line(out, cx, ypos(m.cv.mean_r2 - m.cv.std_r2), cx,
         ypos(m.cv.mean_r2 + m.cv.std_r2), "#333333", 1.2);
    out << "<text x=\"" << num(cx) << "\" y=\"" << num(top + plot_h + 12)
        << "\" font-size=\"9\" font-family=\"sans-serif\" text-anchor=\"end\""
        << " transform=\"rotate(-60 " << num(cx) << " "
        << num(top + plot_h + 12) << ")\">" << escape_xml(m.name)
        << "</text>\n";
  }

  double lx = left + bar * static_cast<double>(models.size()) + 24.0;
  double ly = top + 10.0;
  for (const char* fam : {"linear", "tree", "kernel", "neural", "instance"}) {
    rect(out, lx, ly, 14, 14, family_color(fam));
    text(out, lx + 20, ly + 11, fam, 11, "start");
    ly += 22.0;
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_target_hist(const Vector& y, const TargetSummary& summary) {
  if (y.size() < 1) throw UsageError("empty target vector");
  const int bins = 12;
  const double lo = summary.min;
  const double hi = summary.max;
  const double span = hi > lo ? hi - lo : 1.0;
  std::vector<int> counts(bins, 0);
  for (Index i = 0; i < y.size(); ++i) {
    int b = static_cast<int>((y(i) - lo) / span * bins);
    b = std::min(bins - 1, std::max(0, b));
    ++counts[static_cast<std::size_t>(b)];
  }
  const int peak = *std::max_element(counts.begin(), counts.end());

  const double left = 60.0, top = 50.0, plot_w = 420.0, plot_h = 240.0;
  const double width = left + plot_w + 30.0;
  const double height = top + plot_h + 60.0;

  std::ostringstream out;
  open_svg(out, width, height);
  rect(out, 0, 0, width, height, "#ffffff");
  text(out, left + plot_w / 2.0, 24, "Target distribution", 15, "middle",
       "font-weight=\"bold\"");
  text(out, left + plot_w / 2.0, 40,
       "mean = " + format_fixed(summary.mean, 1) +
           ", SD = " + format_fixed(summary.std, 1),
       11);

  const double bw = plot_w / bins;
  for (int b = 0; b < bins; ++b) {
    const double h =
        peak > 0 ? plot_h * counts[static_cast<std::size_t>(b)] / peak : 0.0;
    rect(out, left + bw * b + 1, top + plot_h - h, bw - 2, h, "#4878d0",
         "stroke=\"#2a4a88\" stroke-width=\"0.5\"");
  }
  line(out, left, top + plot_h, left + plot_w, top + plot_h, "#333333", 1.0);
  for (int b = 0; b <= bins; b += 3) {
    const double x = left + bw * b;
    text(out, x, top + plot_h + 16, format_fixed(lo + span * b / bins, 0), 9);
  }
  text(out, left - 8, top + 4, std::to_string(peak), 9, "end");
  out << "</svg>\n";
  return out.str();
}

}  // namespace shapaudit
