#include "krrlab/harness/plot.hpp"

#include "krrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace krrlab::harness {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 190, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

double finite_max(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, x);
  return m;
}

}  // namespace

std::string render_svg(const CsvTable& table, const std::vector<std::string>& columns,
                       const PlotOptions& options) {
  if (columns.empty()) throw DataError("plot needs at least one column");
  const std::vector<double> xs = table.column(options.x_column);
  std::vector<std::vector<double>> series;
  std::vector<std::string> labels;
  for (const auto& name : columns) {
    std::vector<double> ys = table.column(name);
    std::string label = name;
    for (const auto& [target, reference] : options.rescale) {
      if (target != name) continue;
      const double ref_max = finite_max(table.column(reference));
      const double own_max = finite_max(ys);
      if (own_max > 0.0 && std::isfinite(ref_max)) {
        for (double& y : ys) y *= ref_max / own_max;
        label += " (rescaled to max " + reference + ")";
      }
    }
    series.push_back(std::move(ys));
    labels.push_back(std::move(label));
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  bool all_positive = true;
  for (const auto& ys : series) {
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (!std::isfinite(ys[i]) || !std::isfinite(xs[i])) continue;
      xmin = std::min(xmin, xs[i]);
      xmax = std::max(xmax, xs[i]);
      ymin = std::min(ymin, ys[i]);
      ymax = std::max(ymax, ys[i]);
      if (ys[i] <= 0.0) all_positive = false;
    }
  }
  if (!std::isfinite(xmin)) throw DataError("plot: no finite points");
  const bool log_y = all_positive && ymax / ymin > 100.0;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double lo = ty(ymin), hi = ty(ymax);
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + ph - (ty(y) - lo) / (hi - lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(options.title) << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double vy = lo + (hi - lo) * t / 4.0;
    const double label_y = log_y ? std::pow(10.0, vy) : vy;
    const double gy = kTop + ph - (vy - lo) / (hi - lo) * ph;
    svg << "<text x=\"" << fmt("%.2f", px(fx)) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt("%.4g", fx) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt("%.2f", gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt("%.3g", label_y) << "</text>\n";
    svg << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << fmt("%.2f", gy)
        << "\" y2=\"" << fmt("%.2f", gy) << "\" stroke=\"#dddddd\"/>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(options.x_column) << "</text>\n";
  if (log_y) {
    svg << "<text x=\"16\" y=\"" << kTop + ph / 2
        << "\" font-family=\"sans-serif\" font-size=\"12\">log</text>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double y = series[s][i];
      if (!std::isfinite(y) || !std::isfinite(xs[i]) || (log_y && y <= 0.0)) continue;
      svg << (first ? "" : " ") << fmt("%.2f", px(xs[i])) << ',' << fmt("%.2f", py(y));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kTop + 14 + 20.0 * static_cast<double>(s);
    svg << "<line x1=\"" << kWidth - kRight + 12 << "\" x2=\"" << kWidth - kRight + 32
        << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kWidth - kRight + 36 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << escape(labels[s]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::string& csv_path, const std::vector<std::string>& columns,
               const std::string& out_path, const PlotOptions& options) {
  write_text_file(out_path, render_svg(read_csv(csv_path), columns, options));
}

}  // namespace krrlab::harness
