#include "krrlab/harness/libsvm.hpp"

#include "krrlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <utility>
#include <vector>

namespace krrlab::harness {

namespace {

struct Row {
  double label = 0.0;
  std::vector<std::pair<int, double>> entries;
};

double parse_double(std::string_view token, std::size_t line) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError("malformed number '" + std::string(token) + "'", line);
  }
  return v;
}

int parse_index(std::string_view token, std::size_t line) {
  int v = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("malformed index '" + std::string(token) + "'", line);
  }
  return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, int d) {
  std::vector<Row> rows;
  int max_index = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto tokens = split_ws(text);
    if (tokens.empty()) continue;
    Row row;
    row.label = parse_double(tokens[0], line);
    int previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("malformed token '" + std::string(tokens[t]) + "'", line);
      }
      const int index = parse_index(tokens[t].substr(0, colon), line);
      if (index < 1 || (d > 0 && index > d)) {
        throw ParseError("index " + std::to_string(index) + " out of range", line);
      }
      if (index == previous) throw ParseError("duplicate index", line);
      if (index < previous) throw ParseError("non-increasing index", line);
      previous = index;
      row.entries.emplace_back(index, parse_double(tokens[t].substr(colon + 1), line));
    }
    max_index = std::max(max_index, previous);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("libsvm input has no records");
  const int width = d > 0 ? d : max_index;
  if (width < 1) throw DataError("libsvm input has no features");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), width);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    y(r) = rows[i].label;
    for (const auto& [index, value] : rows[i].entries) x(r, index - 1) = value;
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset parse_libsvm(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_libsvm(in, d);
}

void write_libsvm(const Dataset& data, std::ostream& out) {
  char buf[64];
  const auto& x = data.features();
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", data.responses()(i));
    out << buf;
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      if (x(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof buf, " %ld:%.17g", static_cast<long>(j + 1), x(i, j));
      out << buf;
    }
    out << '\n';
  }
}

void write_libsvm(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_libsvm(data, out);
  if (!out) throw DataError("write to '" + path + "' failed");
}

Dataset standardize_columns(const Dataset& data) {
  Eigen::MatrixXd x = data.features();
  const double n = static_cast<double>(data.n());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    const double sd = n > 1 ? std::sqrt(x.col(j).squaredNorm() / (n - 1.0)) : 0.0;
    if (sd > 0.0) x.col(j) /= sd;
  }
  return Dataset(std::move(x), data.responses());
}

}  // namespace krrlab::harness
