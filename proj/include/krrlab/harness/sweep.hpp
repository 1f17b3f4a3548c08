#pragma once

#include "krrlab/harness/config.hpp"
#include "krrlab/risk.hpp"

#include <functional>
#include <string>
#include <vector>

namespace krrlab::harness {

using ProgressFn = std::function<void(const std::string&)>;

// One record per n in the grid, averaged over trials. Synthetic mode reports
// the Monte-Carlo standard error of risk_emp in mc_stderr; real mode reports
// the across-trial standard error of the held-out MSE.
std::vector<RiskPoint> run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress = {});

inline constexpr const char* kRiskCsvHeader =
    "n,lambda,bias_emp,var_emp,risk_emp,v1_bound,v2_bound,bias_ref,stderr";

std::string risk_csv(const std::vector<RiskPoint>& points);

// Runs fn(i) for i in [0, count) on `workers` threads. The first failure by
// index is rethrown after all threads finish, with `label(i)` prepended.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn,
                  const std::function<std::string(std::size_t)>& label = {});

}  // namespace krrlab::harness
