#pragma once

#include <string>
#include <vector>

namespace krrlab::harness {

// %.12g, with "nan"/"inf" spelled out.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Throws DataError if the column is absent.
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

// Numeric CSV with a header line. Throws ParseError on ragged or non-numeric rows.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace krrlab::harness
