#include "krrlab/harness/curve.hpp"

#include "krrlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace krrlab::harness {

const char* to_string(CurveShape shape) {
  switch (shape) {
    case CurveShape::monotone_decreasing:
      return "monotone_decreasing";
    case CurveShape::monotone_increasing:
      return "monotone_increasing";
    case CurveShape::bell:
      return "bell";
    case CurveShape::double_descent:
      return "double_descent";
    case CurveShape::flat:
      return "flat";
    case CurveShape::irregular:
      return "irregular";
  }
  return "?";
}

std::vector<double> smooth3(std::span<const double> values) {
  std::vector<double> s(values.begin(), values.end());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    s[i] = (values[i - 1] + values[i] + values[i + 1]) / 3.0;
  }
  return s;
}

namespace {

// Prominence of a strict local maximum of v at i.
double prominence_at(const std::vector<double>& v, std::size_t i) {
  double left = v[i];
  for (std::size_t j = i; j-- > 0;) {
    if (v[j] > v[i]) break;
    left = std::min(left, v[j]);
  }
  double right = v[i];
  for (std::size_t j = i + 1; j < v.size(); ++j) {
    if (v[j] > v[i]) break;
    right = std::min(right, v[j]);
  }
  return v[i] - std::max(left, right);
}

}  // namespace

std::vector<Extremum> significant_extrema(std::span<const double> smoothed) {
  std::vector<double> s(smoothed.begin(), smoothed.end());
  double scale = 0.0;
  for (double v : s) scale = std::max(scale, std::abs(v));
  std::vector<Extremum> out;
  if (s.size() < 3 || scale == 0.0) return out;
  std::vector<double> neg(s.size());
  std::transform(s.begin(), s.end(), neg.begin(), [](double v) { return -v; });
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] > s[i - 1] && s[i] > s[i + 1]) {
      const double p = prominence_at(s, i);
      if (p >= kProminence * scale) out.push_back({i, true, p});
    } else if (s[i] < s[i - 1] && s[i] < s[i + 1]) {
      const double p = prominence_at(neg, i);
      if (p >= kProminence * scale) out.push_back({i, false, p});
    }
  }
  return out;
}

CurveShape classify_curve(std::span<const double> values) {
  if (values.size() < 5) throw DomainError("classify_curve needs at least 5 values");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("classify_curve: non-finite value");
  const std::vector<double> s = smooth3(values);
  double scale = 0.0;
  for (double v : s) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return CurveShape::flat;

  const auto extrema = significant_extrema(s);
  if (extrema.empty()) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    if (*hi - *lo < kFlatness * scale) return CurveShape::flat;
    return s.back() < s.front() ? CurveShape::monotone_decreasing
                                : CurveShape::monotone_increasing;
  }
  if (extrema.size() == 1 && extrema[0].is_max) return CurveShape::bell;
  if (extrema.size() == 2 && !extrema[0].is_max && extrema[1].is_max) {
    return CurveShape::double_descent;
  }
  return CurveShape::irregular;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw DomainError("argmax of an empty sequence");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                  values.begin());
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw DomainError("correlation of a constant sequence");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("spearman: sequences differ in length");
  if (a.size() < 2) throw DomainError("spearman needs at least 2 values");
  return pearson(average_ranks(a), average_ranks(b));
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("loglog_slope: sequences differ in length");
  if (x.size() < 2) throw DomainError("loglog_slope needs at least 2 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("loglog_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace krrlab::harness
