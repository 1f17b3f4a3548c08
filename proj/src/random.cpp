#include "krrlab/random.hpp"

#include <vector>

namespace krrlab {

namespace {

std::seed_seq build_seq(std::uint64_t seed, std::initializer_list<std::uint64_t> keys,
                        std::vector<std::uint32_t>& words) {
  words.clear();
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto k : keys) push(k);
  return std::seed_seq(words.begin(), words.end());
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  std::seed_seq seq = build_seq(seed, keys, words);
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  std::seed_seq seq = build_seq(seed, keys, words);
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill so the draw order does not depend on storage layout.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace krrlab
