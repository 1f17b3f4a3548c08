#pragma once

#include "krrlab/dataset.hpp"
#include "krrlab/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace krrlab {

// Diagonal covariance with prescribed decay, normalized to tr = d.
struct CovModel {
  int d = 0;
  DecayKind kind = DecayKind::harmonic;
  double a = 1.0;
  Eigen::VectorXd diag;

  double tau() const { return diag.sum() / d; }
  double trace_ratio() const { return diag.squaredNorm() / (static_cast<double>(d) * d); }
};

CovModel make_covariance(int d, DecayKind kind, double a);

// n <= d: sqrt(d) times a matrix with orthonormal rows (Q factor of a Gaussian
// d x n matrix, transposed). n > d: i.i.d. standard normal entries.
Eigen::MatrixXd random_orthogonal_rows(int n, int d, std::uint64_t seed);

struct TargetSpec {
  enum class Kind { sin_sqnorm, custom };

  Kind kind = Kind::sin_sqnorm;
  std::function<double(const Eigen::VectorXd&)> fn;
  double noise_sigma = 1.0;

  static TargetSpec sin_sqnorm(double noise_sigma);
  static TargetSpec custom(std::function<double(const Eigen::VectorXd&)> fn,
                           double noise_sigma);

  // f evaluated at each row.
  Eigen::VectorXd evaluate(const Eigen::MatrixXd& points) const;
};

struct SyntheticSample {
  Dataset data;
  Eigen::VectorXd clean;  // f(X) without noise
};

// X = T Sigma^{1/2}, y = f(X) + sigma * eps.
SyntheticSample sample_dataset(const CovModel& cov, int n, const TargetSpec& target,
                               std::uint64_t seed);

// m i.i.d. rows Sigma^{1/2} t with standard normal t.
Eigen::MatrixXd sample_points(const CovModel& cov, int m, std::uint64_t seed);

}  // namespace krrlab
