#pragma once

#include "krrlab/harness/config.hpp"
#include "krrlab/linearize.hpp"

#include <string>
#include <vector>

namespace krrlab::harness {

struct EigRow {
  int i = 0;  // 1-based
  double eig_k = 0.0;
  double eig_klin = 0.0;
  double scaled_xx = 0.0;  // beta * lambda_i(XX^T/d) + gamma
  bool excluded = false;   // lambda_1, left out of plots
};

struct EigCompareResult {
  LinParams params;
  double gamma_used = 0.0;
  int n = 0;
  int d = 0;
  std::vector<EigRow> rows;         // top_k
  InterlacingReport interlacing;    // over all n eigenvalues
  int start_index = 2;
  double spearman_beyond_top5 = 0.0;  // eig_k vs scaled_xx over rows 6..top_k
};

// Synthetic mode draws n = n_grid.front() points from the configured
// covariance; real mode takes that many rows after a seeded shuffle.
EigCompareResult eig_compare(const ExperimentConfig& cfg);

inline constexpr const char* kEigCsvHeader = "i,eig_K,eig_Klin,beta_eig_XX_plus_gamma,excluded";

std::string eig_csv(const EigCompareResult& result);

}  // namespace krrlab::harness
