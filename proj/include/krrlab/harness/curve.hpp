#pragma once

#include <span>
#include <string>
#include <vector>

namespace krrlab::harness {

enum class CurveShape { monotone_decreasing, monotone_increasing, bell, double_descent, flat, irregular };

const char* to_string(CurveShape shape);

inline constexpr double kProminence = 0.05;  // of max |smoothed value|
inline constexpr double kFlatness = 0.02;

// Window-3 moving average on interior points; endpoints kept.
std::vector<double> smooth3(std::span<const double> values);

struct Extremum {
  std::size_t index = 0;
  bool is_max = false;
  double prominence = 0.0;
};

// Strict interior extrema of the smoothed curve whose topographic prominence
// is at least kProminence * max|s|, in index order.
std::vector<Extremum> significant_extrema(std::span<const double> smoothed);

// No extrema: flat if range < kFlatness * max|s|, else monotone by endpoints.
// One maximum only: bell. A minimum followed by a maximum: double_descent.
// Anything else: irregular. Needs at least 5 values.
CurveShape classify_curve(std::span<const double> values);

std::size_t argmax(std::span<const double> values);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace krrlab::harness
