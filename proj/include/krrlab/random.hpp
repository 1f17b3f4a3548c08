#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <random>

namespace krrlab {

using Rng = std::mt19937_64;

// Generator seeded from a base seed and a list of stream keys (n, trial, ...).
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

// A child seed for the given keys; distinct keys give unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace krrlab
