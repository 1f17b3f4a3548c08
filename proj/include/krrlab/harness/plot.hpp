#pragma once

#include "krrlab/harness/csv.hpp"

#include <string>
#include <utility>
#include <vector>

namespace krrlab::harness {

struct PlotOptions {
  std::string x_column = "n";
  std::string title;
  // (series, reference): series is scaled so its maximum matches the
  // reference column's maximum; the legend says so.
  std::vector<std::pair<std::string, std::string>> rescale;
};

// Standalone SVG line chart, one polyline per column. The y axis is
// logarithmic when all plotted values are positive and span more than two
// decades. Non-finite points are skipped. Output is byte-deterministic.
std::string render_svg(const CsvTable& table, const std::vector<std::string>& columns,
                       const PlotOptions& options = {});

void emit_plot(const std::string& csv_path, const std::vector<std::string>& columns,
               const std::string& out_path, const PlotOptions& options = {});

}  // namespace krrlab::harness
