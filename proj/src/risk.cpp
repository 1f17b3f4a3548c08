#include "krrlab/risk.hpp"

#include "krrlab/errors.hpp"
#include "krrlab/random.hpp"

#include <cmath>
#include <string>

namespace krrlab {

void RegSchedule::validate() const {
  if (!(cbar >= 0.0 && cbar <= 1.0)) throw DomainError("cbar must lie in [0, 1]");
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta must lie in [0, 1]");
  if (eta) {
    if (!(*eta >= 0.0 && *eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
    if (theta > 1.0 / (1.0 + *eta)) {
      throw DomainError("theta = " + std::to_string(theta) + " exceeds 1/(1+eta) = " +
                        std::to_string(1.0 / (1.0 + *eta)));
    }
  }
}

double schedule_lambda(const RegSchedule& sched, int n) {
  sched.validate();
  if (n < 1) throw DomainError("schedule_lambda needs n >= 1");
  return sched.cbar * std::pow(static_cast<double>(n), -sched.theta);
}

Eigen::MatrixXd train_gram(const KernelChoice& kernel, const Eigen::MatrixXd& features) {
  if (const auto* spec = std::get_if<KernelSpec>(&kernel)) return kernel_matrix(*spec, features);
  const auto& lin = std::get<LinearizedKernel>(kernel);
  return build_lin_kernel(lin.params, features, lin.gamma_override).matrix();
}

Eigen::MatrixXd cross_gram(const KernelChoice& kernel, const Eigen::MatrixXd& features,
                           const Eigen::MatrixXd& queries) {
  if (const auto* spec = std::get_if<KernelSpec>(&kernel)) {
    return cross_kernel_matrix(*spec, features, queries);
  }
  return lin_cross_kernel_matrix(std::get<LinearizedKernel>(kernel).params, features, queries);
}

Eigen::MatrixXd smoother_weights(const Dataset& data, const KernelChoice& kernel,
                                 double lambda, const Eigen::MatrixXd& test_points) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be finite and >= 0");
  }
  const RidgeSystem system(train_gram(kernel, data.features()),
                           static_cast<double>(data.n()) * lambda);
  const Eigen::MatrixXd cross = cross_gram(kernel, data.features(), test_points);
  return system.solve(Eigen::MatrixXd(cross.transpose()));
}

namespace {

void check_test_inputs(const Dataset& data, const Eigen::VectorXd* clean,
                       const Eigen::MatrixXd& test_points, const Eigen::VectorXd* clean_test) {
  if (test_points.rows() < 1) throw DomainError("need at least one test point");
  if (test_points.cols() != data.d()) throw ShapeError("test points have the wrong width");
  if (clean && clean->size() != data.n()) throw ShapeError("clean responses have wrong length");
  if (clean_test && clean_test->size() != test_points.rows()) {
    throw ShapeError("clean test responses have wrong length");
  }
}

}  // namespace

double empirical_bias(const Dataset& data, const Eigen::VectorXd& clean,
                      const KernelChoice& kernel, double lambda,
                      const Eigen::MatrixXd& test_points, const Eigen::VectorXd& clean_test) {
  check_test_inputs(data, &clean, test_points, &clean_test);
  const Eigen::MatrixXd w = smoother_weights(data, kernel, lambda, test_points);
  return (w.transpose() * clean - clean_test).squaredNorm() /
         static_cast<double>(test_points.rows());
}

double empirical_variance(const Dataset& data, const KernelChoice& kernel, double lambda,
                          double sigma, const Eigen::MatrixXd& test_points) {
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  check_test_inputs(data, nullptr, test_points, nullptr);
  if (sigma == 0.0) return 0.0;
  const Eigen::MatrixXd w = smoother_weights(data, kernel, lambda, test_points);
  return sigma * sigma * w.squaredNorm() / static_cast<double>(test_points.rows());
}

RiskEstimate excess_risk_mc(const Dataset& data, const Eigen::VectorXd& clean,
                            const KernelChoice& kernel, double lambda, double sigma,
                            const Eigen::MatrixXd& test_points,
                            const Eigen::VectorXd& clean_test, int noise_draws,
                            std::uint64_t seed) {
  if (noise_draws < 2) throw DomainError("excess_risk_mc needs noise_draws >= 2");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  check_test_inputs(data, &clean, test_points, &clean_test);
  const double m = static_cast<double>(test_points.rows());
  const Eigen::MatrixXd w = smoother_weights(data, kernel, lambda, test_points);
  const Eigen::VectorXd residual = w.transpose() * clean - clean_test;

  RiskEstimate est;
  est.bias = residual.squaredNorm() / m;
  est.variance = sigma * sigma * w.squaredNorm() / m;
  if (sigma == 0.0) {
    est.risk = est.bias;
    return est;
  }
  Rng rng = make_rng(seed, {0x4e01});
  const Eigen::MatrixXd eps = sigma * standard_normal(data.n(), noise_draws, rng);
  const Eigen::MatrixXd noisy = (w.transpose() * eps).colwise() + residual;
  const Eigen::VectorXd per_draw = noisy.colwise().squaredNorm().transpose() / m;
  est.risk = per_draw.mean();
  const double var = (per_draw.array() - est.risk).square().sum() / (noise_draws - 1.0);
  est.mc_stderr = std::sqrt(var / noise_draws);
  return est;
}

double bound_v1(const Spectrum& spectrum, double beta, int d, int n, double lambda,
                double gamma, double sigma) {
  if (d < 1 || n < 1) throw DomainError("bound_v1 needs n, d >= 1");
  const double b = static_cast<double>(n) * lambda + gamma;
  if (!(b > 0.0)) throw DomainError("bound_v1 needs n*lambda + gamma > 0");
  return sigma * sigma * beta / static_cast<double>(d) * quantity_N(spectrum, b);
}

void MomentParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("moment order m must be > 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be > 0");
}

double bound_v2(KernelFamily family, int n, double lambda, double gamma, int d,
                const MomentParams& moments, double sigma) {
  moments.validate();
  if (d < 2) throw DomainError("bound_v2 needs d >= 2");
  if (n < 1) throw DomainError("bound_v2 needs n >= 1");
  const double b = static_cast<double>(n) * lambda + gamma;
  if (!(b > 0.0)) throw DomainError("bound_v2 needs n*lambda + gamma > 0");
  const double dd = static_cast<double>(d);
  const double logd = std::log(dd);
  const double theta = moments.theta_moment();
  const double eps = moments.epsilon;
  if (family == KernelFamily::inner_product) {
    return sigma * sigma * std::pow(logd, 2.0 + 4.0 * eps) /
           (b * b * std::pow(dd, 4.0 * theta - 1.0));
  }
  return sigma * sigma * std::pow(dd, -2.0 * theta) * std::pow(logd, 1.0 + eps) / (b * b);
}

double bias_ref(int n, double theta, double r) {
  if (n < 1) throw DomainError("bias_ref needs n >= 1");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("source exponent r must lie in (0, 1]");
  return std::pow(static_cast<double>(n), -2.0 * theta * r);
}

}  // namespace krrlab
