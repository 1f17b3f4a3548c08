#pragma once

#include "krrlab/dataset.hpp"
#include "krrlab/kernels.hpp"
#include "krrlab/linearize.hpp"
#include "krrlab/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <variant>

namespace krrlab {

// lambda = cbar * n^-theta
struct RegSchedule {
  double cbar = 0.01;
  double theta = 0.0;
  std::optional<double> eta;  // capacity exponent; only constrains theta

  void validate() const;
};

double schedule_lambda(const RegSchedule& sched, int n);

// The linearized surrogate of a kernel, used in place of K and k(x, X).
struct LinearizedKernel {
  LinParams params;
  std::optional<double> gamma_override;
};

using KernelChoice = std::variant<KernelSpec, LinearizedKernel>;

Eigen::MatrixXd train_gram(const KernelChoice& kernel, const Eigen::MatrixXd& features);
// m x n
Eigen::MatrixXd cross_gram(const KernelChoice& kernel, const Eigen::MatrixXd& features,
                           const Eigen::MatrixXd& queries);

// W = (K + n lambda I)^{-1} k(X, Q): n x m, column q holds the weights that
// map training responses to the prediction at query q.
Eigen::MatrixXd smoother_weights(const Dataset& data, const KernelChoice& kernel,
                                 double lambda, const Eigen::MatrixXd& test_points);

// (1/m) sum_x (k(x,X)^T (K + n lambda I)^{-1} f(X) - f(x))^2
double empirical_bias(const Dataset& data, const Eigen::VectorXd& clean,
                      const KernelChoice& kernel, double lambda,
                      const Eigen::MatrixXd& test_points, const Eigen::VectorXd& clean_test);

// sigma^2 (1/m) sum_x ||(K + n lambda I)^{-1} k(X, x)||^2
double empirical_variance(const Dataset& data, const KernelChoice& kernel, double lambda,
                          double sigma, const Eigen::MatrixXd& test_points);

struct RiskEstimate {
  double risk = 0.0;      // mean over noise draws
  double bias = 0.0;      // exact given the test points
  double variance = 0.0;  // exact given the test points
  double mc_stderr = 0.0; // standard error of risk over noise draws
};

// Refits on f(X) + sigma * eps for noise_draws fresh eps and averages the
// test MSE against f. The responses stored in data are not used.
RiskEstimate excess_risk_mc(const Dataset& data, const Eigen::VectorXd& clean,
                            const KernelChoice& kernel, double lambda, double sigma,
                            const Eigen::MatrixXd& test_points,
                            const Eigen::VectorXd& clean_test, int noise_draws,
                            std::uint64_t seed);

// sigma^2 beta / d * N^(n lambda + gamma) over the spectrum of beta XX^T/d + alpha 11^T.
double bound_v1(const Spectrum& spectrum, double beta, int d, int n, double lambda,
                double gamma, double sigma);

struct MomentParams {
  double m = 8.0;
  double epsilon = 0.01;

  double theta_moment() const { return 0.5 - 2.0 / (8.0 + m); }
  void validate() const;
};

// Shape curve with unit constants:
//   inner-product  sigma^2 log(d)^(2+4eps) / ((n lambda + gamma)^2 d^(4 theta - 1))
//   radial         sigma^2 d^(-2 theta) log(d)^(1+eps) / (n lambda + gamma)^2
double bound_v2(KernelFamily family, int n, double lambda, double gamma, int d,
                const MomentParams& moments, double sigma);

// n^(-2 theta r)
double bias_ref(int n, double theta, double r);

struct RiskPoint {
  int n = 0;
  double lambda = 0.0;
  double bias_emp = 0.0;
  double var_emp = 0.0;
  double risk_emp = 0.0;
  double v1_bound = 0.0;
  double v2_bound = 0.0;
  double bias_ref = 0.0;
  int trial_count = 0;
  double mc_stderr = 0.0;
};

}  // namespace krrlab
