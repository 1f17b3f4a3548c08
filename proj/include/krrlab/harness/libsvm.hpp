#pragma once

#include "krrlab/dataset.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace krrlab::harness {

// Sparse "label idx:val ..." text, 1-based strictly increasing indices <= d.
// d <= 0 takes the width from the largest index seen. Blank lines are skipped.
Dataset parse_libsvm(std::istream& in, int d);
Dataset parse_libsvm(const std::string& path, int d);

// Zeros are omitted; values use 17 significant digits so parsing the output
// reproduces the matrix exactly.
void write_libsvm(const Dataset& data, std::ostream& out);
void write_libsvm(const Dataset& data, const std::string& path);

// Per-column z-score; constant columns are only centered.
Dataset standardize_columns(const Dataset& data);

}  // namespace krrlab::harness
