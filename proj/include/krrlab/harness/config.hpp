#pragma once

#include "krrlab/kernels.hpp"
#include "krrlab/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace krrlab::harness {

enum class Mode { synth, real };

struct ExperimentConfig {
  Mode mode = Mode::synth;
  std::string kernel = "gaussian";  // linear | polynomial | exponential_inner | gaussian
  int degree = 3;
  bool use_linearized = false;
  std::optional<double> gamma_override;
  DecayKind decay = DecayKind::harmonic;
  double decay_a = 1.0;
  int d = 500;  // real mode: 0 infers the width from the file
  std::vector<int> n_grid{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
  double cbar = 0.01;
  double theta = 2.0 / 3.0;
  double sigma = 1.0;
  int trials = 10;
  std::uint64_t seed = 0;
  int test_points = 2000;
  int noise_draws = 50;
  std::string input_path;
  std::string output_path;
  bool standardize = false;
  double r = 1.0;         // source exponent of the bias reference curve
  double moment_m = 8.0;  // moment surplus for V2
  double epsilon = 0.01;
  int workers = 1;
  int top_k = 60;

  // Throws ConfigError on the first invalid field.
  void validate() const;
};

KernelSpec make_kernel(const std::string& name, int degree);

// "start:stop:step", inclusive of stop when it lies on the lattice.
std::vector<int> parse_grid(const std::string& text);
std::string format_grid(const std::vector<int>& grid);

Mode mode_from_string(const std::string& name);

// Applies every key of a JSON object onto cfg. Unknown keys, wrong types and
// malformed values raise ConfigError.
void apply_json(ExperimentConfig& cfg, const std::string& json_text);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

}  // namespace krrlab::harness
