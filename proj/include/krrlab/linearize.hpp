#pragma once

#include "krrlab/dataset.hpp"
#include "krrlab/kernels.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace krrlab {

// Coefficients of K^lin = alpha 11^T + beta XX^T/d + gamma I + T.
struct LinParams {
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
  double tau = 0.0;          // tr(Sigma)/d
  double trace_ratio = 0.0;  // tr(Sigma^2)/d^2
  KernelFamily family = KernelFamily::inner_product;
  // h, h', h'' at the pivot: 0 for inner-product kernels, 2*tau for radial ones.
  double h_pivot = 0.0;
  double dh_pivot = 0.0;
  double d2h_pivot = 0.0;
};

// Pivot estimates for data without a known covariance: mean ||x_i||^2/d,
// and the plug-in tr(S^2) - (tr S)^2/n over the sample covariance S,
// clipped at 0 and divided by d^2.
double estimate_tau(const Eigen::MatrixXd& features);
double estimate_trace_ratio(const Eigen::MatrixXd& features);

// Tabulated variants use their closed forms; custom kernels go through the
// general formulas. Throws ValidityError if alpha < 0, beta <= 0 or gamma < 0.
LinParams linearize_params(const KernelSpec& spec, double tau, double trace_ratio);

struct LinKernel {
  Eigen::MatrixXd base;      // alpha 11^T + beta XX^T/d + gamma I
  Eigen::VectorXd psi;       // ||x_i||^2/d - tau
  Eigen::MatrixXd t_matrix;  // h'(2tau) A + h''(2tau)/2 A.*A, zero for inner-product
  double gamma = 0.0;        // the gamma actually used

  Eigen::MatrixXd matrix() const { return base + t_matrix; }
};

LinKernel build_lin_kernel(const LinParams& params, const Dataset& data,
                           std::optional<double> gamma_override = std::nullopt);
LinKernel build_lin_kernel(const LinParams& params, const Eigen::MatrixXd& features,
                           std::optional<double> gamma_override = std::nullopt);

// A = 1 psi^T + psi 1^T.
Eigen::MatrixXd psi_outer_sum(const Eigen::VectorXd& psi);

// Linearized k(query, x_i) for all training rows.
Eigen::VectorXd lin_cross_kernel(const LinParams& params, const Dataset& data,
                                 const Eigen::VectorXd& query);
// m x n, row q is the linearized cross kernel of queries_q.
Eigen::MatrixXd lin_cross_kernel_matrix(const LinParams& params,
                                        const Eigen::MatrixXd& train_features,
                                        const Eigen::MatrixXd& queries);

// ||K - Klin||_2 for symmetric inputs.
double approx_error(const Eigen::MatrixXd& k, const Eigen::MatrixXd& klin);

struct InterlacingViolation {
  int index = 0;  // 1-based
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct InterlacingReport {
  std::vector<InterlacingViolation> violations;
  double max_violation = 0.0;
  bool ok() const { return violations.empty(); }
};

// Checks beta*mu_i + gamma <= nu_i <= beta*mu_{i-1} + gamma for i >= start_index
// (1-based), where nu are eigenvalues of K^lin and mu those of XX^T/d, both
// sorted descending (not re-checked: disorder shows up as violations).
// nu may contain negative values.
InterlacingReport interlacing_check(std::span<const double> eig_klin,
                                    std::span<const double> eig_xx, double beta,
                                    double gamma, int start_index);

struct MomentReport {
  double mu3_hat = 0.0;
  double mu4_hat = 0.0;
  double rank1_ratio = 0.0;  // lambda_2 / lambda_1 of E_x[A(x,X)A(X,x)]
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double max_entry = 0.0;  // max |entry| of the estimate
};

// Whitened entry moments of the training features plus a Monte-Carlo
// estimate of E_x[A(x,X)A(X,x)] with A(x,X)_i = psi_x + psi_i over the query
// rows. Entries are whitened by sigma_d when given, by column standard
// deviation otherwise. Needs at least 100 query rows.
MomentReport moment_diagnostics(const Dataset& data,
                                const std::optional<Eigen::VectorXd>& sigma_d, double tau,
                                const Eigen::MatrixXd& queries);

}  // namespace krrlab
